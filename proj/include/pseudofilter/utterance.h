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
#include <string>

#include "pseudofilter/text_metrics.h"

namespace pseudofilter {

struct Utterance {
  std::string utt_id;
  double duration_sec = 0.0;
  std::optional<CharSeq> text;  // reference transcription, when known
  std::string domain = "unknown";
  bool augmented = false;  // set on pseudo-labeled training copies

  friend bool operator==(const Utterance &, const Utterance &) = default;
};

}  // namespace pseudofilter
