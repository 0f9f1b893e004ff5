// Copyright 2026  The pseudofilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pseudofilter/config.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "pseudofilter/error.h"

namespace pseudofilter {

namespace {

std::string Trim(const std::string &s) {
  const char *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> SplitList(const std::string &value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    std::string item = Trim(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::Parse(std::istream &in, const std::string &source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    auto [it, fresh] = cfg.entries_.emplace(key, Entry{value, line_no, false});
    if (!fresh) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(it->second.line) + ")");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  KeyValueConfig cfg = Parse(in, path);
  cfg.base_dir_ = std::filesystem::path(path).parent_path();
  return cfg;
}

void KeyValueConfig::Fail(const std::string &key, const std::string &what) const {
  auto it = entries_.find(key);
  std::string where = source_;
  if (it != entries_.end() && it->second.line > 0) where += ":" + std::to_string(it->second.line);
  throw ConfigError(where + ": key '" + key + "': " + what);
}

std::optional<std::string> KeyValueConfig::Take(const std::string &key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  it->second.used = true;
  return it->second.value;
}

std::string KeyValueConfig::TakeString(const std::string &key, const std::string &fallback) {
  return Take(key).value_or(fallback);
}

double KeyValueConfig::TakeDouble(const std::string &key, double fallback) {
  auto v = Take(key);
  if (!v) return fallback;
  errno = 0;
  char *end = nullptr;
  double d = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0' || errno == ERANGE) Fail(key, "expected a number, got '" + *v + "'");
  return d;
}

long long KeyValueConfig::TakeInt(const std::string &key, long long fallback) {
  auto v = Take(key);
  if (!v) return fallback;
  errno = 0;
  char *end = nullptr;
  long long n = std::strtoll(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0' || errno == ERANGE) Fail(key, "expected an integer, got '" + *v + "'");
  return n;
}

bool KeyValueConfig::TakeBool(const std::string &key, bool fallback) {
  auto v = Take(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  Fail(key, "expected true/false, got '" + *v + "'");
}

std::string KeyValueConfig::TakePath(const std::string &key) {
  auto v = Take(key);
  if (!v || v->empty()) return "";
  std::filesystem::path p(*v);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p.lexically_normal().string();
}

std::map<std::string, std::string> KeyValueConfig::TakePrefixed(const std::string &prefix) {
  std::map<std::string, std::string> out;
  for (auto &[key, entry] : entries_) {
    if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) {
      entry.used = true;
      out.emplace(key.substr(prefix.size()), entry.value);
    }
  }
  return out;
}

void KeyValueConfig::Set(const std::string &key, const std::string &value) {
  auto &e = entries_[key];
  e.value = value;
}

void KeyValueConfig::CheckAllUsed() const {
  for (const auto &[key, entry] : entries_) {
    if (!entry.used) Fail(key, "unknown key");
  }
}

}  // namespace pseudofilter
