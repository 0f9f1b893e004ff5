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
#include <string_view>
#include <vector>

#include "pseudofilter/nbest.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/text_metrics.h"
#include "pseudofilter/utterance.h"

namespace pseudofilter {

struct ScoredUtterance {
  Utterance utt;
  Hypothesis greedy;
  Hypothesis with_lm;
  // CER of greedy against the with-LM text. When the with-LM text is empty
  // and greedy is not, the denominator is taken as 1, so the value equals
  // the number of greedy tokens.
  double cer_hypo = 0.0;
  std::optional<double> cer_label;  // greedy against the reference
  // Greedy-vs-reference edit counts, kept for corpus-level CER. Present
  // whenever the utterance has a reference, even an empty one.
  std::optional<AlignmentStats> label_stats;
  double speaking_rate = 0.0;  // greedy tokens per second
};

enum class EmptyPolicy { kReject, kAccept };

enum class RejectionReason { kEmptyHypothesis, kRateOutOfRange, kCerHypoAboveThreshold };

std::string_view ToString(RejectionReason reason);
RejectionReason ParseRejectionReason(std::string_view text);
std::string_view ToString(EmptyPolicy policy);
EmptyPolicy ParseEmptyPolicy(std::string_view text);

struct FilterConfig {
  double initial_threshold = 0.10;
  double relaxation = 0.03;  // added per iteration
  double max_threshold = 0.25;
  double rate_low = 1.0;     // tokens / second
  double rate_high = 12.0;
  EmptyPolicy empty_policy = EmptyPolicy::kReject;

  void Validate() const;
};

struct Rejection {
  ScoredUtterance item;
  RejectionReason reason;
};

struct FilterOutcome {
  std::vector<ScoredUtterance> accepted;
  std::vector<Rejection> rejected;
  double threshold_used = 0.0;
};

struct FilterStats {
  double pseudo_cer = 0.0;    // all scored utterances
  double filtered_cer = 0.0;  // accepted only
  double filtered_hours = 0.0;
};

// Throws DataError when duration_sec <= 0.
double SpeakingRate(std::size_t hyp_len, double duration_sec);

ScoredUtterance ScoreUtterance(const Utterance &utt, const NBestList &nbest, const NGramModel &lm,
                               RescoreWeight weight);

// min(max_threshold, initial_threshold + iteration * relaxation)
double ThresholdForIteration(const FilterConfig &config, int iteration);

// Accepts an item iff its greedy text is non-empty (unless the empty policy
// accepts), its speaking rate lies in [rate_low, rate_high] and cer_hypo is
// at most the iteration threshold. Checks run in that order and the first
// failure is recorded as the reason. Input order is kept in both lists.
FilterOutcome ApplyFilter(std::span<const ScoredUtterance> scored, const FilterConfig &config, int iteration);

// Token-weighted CER: total S+D+I over total reference tokens. A corpus
// with no reference tokens reports its error count over a denominator of 1.
double CorpusCer(const AlignmentStats &totals);

// With references, every item must carry label_stats (DataError otherwise).
// Without them, both CER fields are 0 and only hours are reported.
FilterStats ComputeFilterStats(const FilterOutcome &outcome, bool with_references);

// Spearman rank correlation with average ranks for ties; 0 when either
// side is constant.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

}  // namespace pseudofilter
