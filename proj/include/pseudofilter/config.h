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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pseudofilter {

// `key = value` file with `#` comments. Every key must be consumed through
// one of the Take* calls; CheckAllUsed() rejects the leftovers so that a
// misspelled key cannot silently fall back to a default.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::istream &in, const std::string &source);
  static KeyValueConfig ReadFile(const std::string &path);

  const std::string &source() const { return source_; }
  // Directory that relative paths in the file are resolved against.
  const std::filesystem::path &base_dir() const { return base_dir_; }

  bool Has(const std::string &key) const { return entries_.count(key) != 0; }
  std::optional<std::string> Take(const std::string &key);
  std::string TakeString(const std::string &key, const std::string &fallback);
  double TakeDouble(const std::string &key, double fallback);
  long long TakeInt(const std::string &key, long long fallback);
  bool TakeBool(const std::string &key, bool fallback);
  // Resolved against base_dir(); empty when the key is absent.
  std::string TakePath(const std::string &key);
  // All `prefix<suffix> = value` entries, keyed by suffix.
  std::map<std::string, std::string> TakePrefixed(const std::string &prefix);

  void Set(const std::string &key, const std::string &value);
  void CheckAllUsed() const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
  };
  [[noreturn]] void Fail(const std::string &key, const std::string &what) const;

  std::string source_;
  std::filesystem::path base_dir_;
  std::map<std::string, Entry> entries_;
};

std::vector<std::string> SplitList(const std::string &value);

}  // namespace pseudofilter
