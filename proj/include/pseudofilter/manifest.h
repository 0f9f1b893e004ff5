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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pseudofilter/selection.h"
#include "pseudofilter/utterance.h"

namespace pseudofilter {

// One JSON-lines manifest row. Text fields are kept verbatim so that
// read -> write reproduces the file byte for byte.
struct ManifestRecord {
  std::string utt_id;
  double duration_sec = 0.0;
  std::optional<std::string> text;
  std::optional<std::string> lm_text;  // with-LM hypothesis, scored manifests only
  std::string domain = "unknown";
  bool augmented = false;
  std::optional<double> cer_hypo;
  std::optional<double> cer_label;
  std::optional<double> speaking_rate;
  std::optional<std::string> rejection_reason;

  friend bool operator==(const ManifestRecord &, const ManifestRecord &) = default;
};

// Throws DataError naming `line_no` on malformed JSON, missing required
// fields, non-finite numbers or duration_sec <= 0.
ManifestRecord ParseManifestRecord(const std::string &line, std::size_t line_no);
std::string FormatManifestRecord(const ManifestRecord &record);

// One record per non-empty line. Duplicate utt_ids are an error naming both lines.
std::vector<ManifestRecord> ReadManifestRecords(const std::string &path);
void WriteManifestRecords(const std::string &path, std::span<const ManifestRecord> records);

std::vector<Utterance> ReadManifest(const std::string &path);
void WriteManifest(const std::string &path, std::span<const Utterance> utterances);

ManifestRecord ToRecord(const Utterance &utt);
// Scored rows carry the greedy pseudo-label in `text` and the with-LM
// hypothesis in `lm_text`; the reference is not written.
ManifestRecord ToScoredRecord(const ScoredUtterance &item, bool augmented,
                              std::optional<RejectionReason> reason = std::nullopt);
// Inverse of ToScoredRecord for what `filter` needs; the reference and
// acoustic scores are not recoverable. Requires cer_hypo and speaking_rate.
ScoredUtterance FromScoredRecord(const ManifestRecord &record);

// Accepted rows are marked augmented (pseudo-labeled training copies).
void WriteFilterOutcome(const std::string &accepted_path, const std::string &rejected_path,
                        const FilterOutcome &outcome);

}  // namespace pseudofilter
