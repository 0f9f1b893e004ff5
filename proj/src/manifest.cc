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

#include "pseudofilter/manifest.h"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"

#include "pseudofilter/error.h"

namespace pseudofilter {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void LineError(std::size_t line_no, const std::string &what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

std::optional<double> OptionalNumber(const Json &obj, const char *key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) LineError(line_no, std::string("field '") + key + "' must be a number");
  double v = it->get<double>();
  if (!std::isfinite(v)) LineError(line_no, std::string("field '") + key + "' must be finite");
  return v;
}

std::optional<std::string> OptionalString(const Json &obj, const char *key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) LineError(line_no, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

ManifestRecord ParseManifestRecord(const std::string &line, std::size_t line_no) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error &e) {
    LineError(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) LineError(line_no, "expected a JSON object");

  ManifestRecord r;
  auto id = OptionalString(obj, "utt_id", line_no);
  if (!id || id->empty()) LineError(line_no, "missing required field 'utt_id'");
  r.utt_id = *id;
  auto dur = OptionalNumber(obj, "duration_sec", line_no);
  if (!dur) LineError(line_no, "missing required field 'duration_sec'");
  if (!(*dur > 0.0)) LineError(line_no, "duration_sec must be > 0");
  r.duration_sec = *dur;
  r.text = OptionalString(obj, "text", line_no);
  r.lm_text = OptionalString(obj, "lm_text", line_no);
  if (auto d = OptionalString(obj, "domain", line_no)) r.domain = *d;
  if (auto it = obj.find("augmented"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) LineError(line_no, "field 'augmented' must be a boolean");
    r.augmented = it->get<bool>();
  }
  r.cer_hypo = OptionalNumber(obj, "cer_hypo", line_no);
  r.cer_label = OptionalNumber(obj, "cer_label", line_no);
  r.speaking_rate = OptionalNumber(obj, "speaking_rate", line_no);
  r.rejection_reason = OptionalString(obj, "rejection_reason", line_no);
  return r;
}

std::string FormatManifestRecord(const ManifestRecord &r) {
  Json obj;
  obj["utt_id"] = r.utt_id;
  obj["duration_sec"] = r.duration_sec;
  if (r.text) obj["text"] = *r.text;
  if (r.lm_text) obj["lm_text"] = *r.lm_text;
  obj["domain"] = r.domain;
  if (r.augmented) obj["augmented"] = true;
  if (r.cer_hypo) obj["cer_hypo"] = *r.cer_hypo;
  if (r.cer_label) obj["cer_label"] = *r.cer_label;
  if (r.speaking_rate) obj["speaking_rate"] = *r.speaking_rate;
  if (r.rejection_reason) obj["rejection_reason"] = *r.rejection_reason;
  return obj.dump(-1, ' ', false, Json::error_handler_t::strict);
}

std::vector<ManifestRecord> ReadManifestRecords(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  std::vector<ManifestRecord> records;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      ManifestRecord r = ParseManifestRecord(line, line_no);
      auto [it, fresh] = first_line.emplace(r.utt_id, line_no);
      if (!fresh) {
        LineError(line_no, "duplicate utt_id '" + r.utt_id + "' (first seen on line " + std::to_string(it->second) + ")");
      }
      records.push_back(std::move(r));
    }
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
  return records;
}

void WriteManifestRecords(const std::string &path, std::span<const ManifestRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto &r : records) out << FormatManifestRecord(r) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<Utterance> ReadManifest(const std::string &path) {
  std::vector<Utterance> out;
  for (auto &r : ReadManifestRecords(path)) {
    Utterance u;
    u.utt_id = std::move(r.utt_id);
    u.duration_sec = r.duration_sec;
    if (r.text) {
      try {
        u.text = Tokenize(*r.text);
      } catch (const EncodingError &e) {
        throw DataError(path + ": utterance '" + u.utt_id + "': " + e.what());
      }
    }
    u.domain = std::move(r.domain);
    u.augmented = r.augmented;
    out.push_back(std::move(u));
  }
  return out;
}

void WriteManifest(const std::string &path, std::span<const Utterance> utterances) {
  std::vector<ManifestRecord> records;
  records.reserve(utterances.size());
  for (const auto &u : utterances) records.push_back(ToRecord(u));
  WriteManifestRecords(path, records);
}

ManifestRecord ToRecord(const Utterance &utt) {
  ManifestRecord r;
  r.utt_id = utt.utt_id;
  r.duration_sec = utt.duration_sec;
  if (utt.text) r.text = utt.text->Join();
  r.domain = utt.domain;
  r.augmented = utt.augmented;
  return r;
}

ManifestRecord ToScoredRecord(const ScoredUtterance &item, bool augmented, std::optional<RejectionReason> reason) {
  ManifestRecord r;
  r.utt_id = item.utt.utt_id;
  r.duration_sec = item.utt.duration_sec;
  r.text = item.greedy.text.Join();
  r.lm_text = item.with_lm.text.Join();
  r.domain = item.utt.domain;
  r.augmented = augmented;
  r.cer_hypo = item.cer_hypo;
  r.cer_label = item.cer_label;
  r.speaking_rate = item.speaking_rate;
  if (reason) r.rejection_reason = std::string(ToString(*reason));
  return r;
}

ScoredUtterance FromScoredRecord(const ManifestRecord &r) {
  if (!r.cer_hypo || !r.speaking_rate) {
    throw DataError("utterance '" + r.utt_id + "' is not a scored record (needs cer_hypo and speaking_rate)");
  }
  ScoredUtterance s;
  s.utt.utt_id = r.utt_id;
  s.utt.duration_sec = r.duration_sec;
  s.utt.domain = r.domain;
  s.utt.augmented = r.augmented;
  s.greedy.text = Tokenize(r.text.value_or(""));
  s.with_lm.text = Tokenize(r.lm_text.value_or(""));
  s.cer_hypo = *r.cer_hypo;
  s.cer_label = r.cer_label;
  s.speaking_rate = *r.speaking_rate;
  return s;
}

void WriteFilterOutcome(const std::string &accepted_path, const std::string &rejected_path,
                        const FilterOutcome &outcome) {
  std::vector<ManifestRecord> accepted, rejected;
  accepted.reserve(outcome.accepted.size());
  for (const auto &s : outcome.accepted) accepted.push_back(ToScoredRecord(s, true));
  rejected.reserve(outcome.rejected.size());
  for (const auto &r : outcome.rejected) rejected.push_back(ToScoredRecord(r.item, false, r.reason));
  WriteManifestRecords(accepted_path, accepted);
  WriteManifestRecords(rejected_path, rejected);
}

}  // namespace pseudofilter
