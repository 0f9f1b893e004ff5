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

#include <string>
#include <vector>

#include "pseudofilter/text_metrics.h"

namespace pseudofilter {

struct Hypothesis {
  CharSeq text;
  double acoustic_score = 0.0;  // higher is better

  friend bool operator==(const Hypothesis &, const Hypothesis &) = default;
};

// Recognizer output for one utterance. Entries are sorted by descending
// acoustic score and carry distinct texts.
struct NBestList {
  std::string utt_id;
  std::vector<Hypothesis> entries;

  friend bool operator==(const NBestList &, const NBestList &) = default;
};

// Throws DataError unless `nbest` is non-empty, sorted, finite and
// duplicate-free.
void ValidateNBest(const NBestList &nbest);

}  // namespace pseudofilter
