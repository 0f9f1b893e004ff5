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

#include "pseudofilter/selection.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pseudofilter/error.h"
#include "pseudofilter/recognizer.h"

namespace pseudofilter {

std::string_view ToString(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kEmptyHypothesis:
      return "empty_hypothesis";
    case RejectionReason::kRateOutOfRange:
      return "rate_out_of_range";
    case RejectionReason::kCerHypoAboveThreshold:
      return "cer_hypo_above_threshold";
  }
  return "unknown";
}

RejectionReason ParseRejectionReason(std::string_view text) {
  if (text == "empty_hypothesis") return RejectionReason::kEmptyHypothesis;
  if (text == "rate_out_of_range") return RejectionReason::kRateOutOfRange;
  if (text == "cer_hypo_above_threshold") return RejectionReason::kCerHypoAboveThreshold;
  throw DataError("unknown rejection reason '" + std::string(text) + "'");
}

std::string_view ToString(EmptyPolicy policy) { return policy == EmptyPolicy::kReject ? "reject" : "accept"; }

EmptyPolicy ParseEmptyPolicy(std::string_view text) {
  if (text == "reject") return EmptyPolicy::kReject;
  if (text == "accept") return EmptyPolicy::kAccept;
  throw ConfigError("empty_policy must be 'reject' or 'accept', got '" + std::string(text) + "'");
}

void FilterConfig::Validate() const {
  // A zero threshold is allowed: it keeps only utterances whose greedy and
  // with-LM texts agree exactly.
  if (!(initial_threshold >= 0.0 && initial_threshold <= max_threshold)) {
    throw ConfigError("thresholds must satisfy 0 <= initial_threshold <= max_threshold");
  }
  if (!(relaxation >= 0.0)) throw ConfigError("relaxation must be >= 0");
  if (!(rate_low < rate_high)) throw ConfigError("rate_low must be below rate_high");
}

double SpeakingRate(std::size_t hyp_len, double duration_sec) {
  if (!(duration_sec > 0.0)) throw DataError("duration must be positive to compute a speaking rate");
  return static_cast<double>(hyp_len) / duration_sec;
}

ScoredUtterance ScoreUtterance(const Utterance &utt, const NBestList &nbest, const NGramModel &lm,
                               RescoreWeight weight) {
  if (!(utt.duration_sec > 0.0)) throw DataError("utterance '" + utt.utt_id + "' has non-positive duration");
  ScoredUtterance out;
  out.utt = utt;
  out.greedy = GreedyHypothesis(nbest);
  out.with_lm = LmHypothesis(nbest, lm, weight);

  AlignmentStats hypo = EditDistance(out.with_lm.text, out.greedy.text);
  out.cer_hypo = CorpusCer(hypo);
  if (utt.text) {
    AlignmentStats label = EditDistance(*utt.text, out.greedy.text);
    out.label_stats = label;
    if (label.ref_len > 0) out.cer_label = Cer(label);
  }
  out.speaking_rate = SpeakingRate(out.greedy.text.size(), utt.duration_sec);
  return out;
}

double ThresholdForIteration(const FilterConfig &config, int iteration) {
  if (iteration < 0) throw DataError("iteration must be >= 0");
  return std::min(config.max_threshold, config.initial_threshold + iteration * config.relaxation);
}

FilterOutcome ApplyFilter(std::span<const ScoredUtterance> scored, const FilterConfig &config, int iteration) {
  FilterOutcome outcome;
  outcome.threshold_used = ThresholdForIteration(config, iteration);
  for (const auto &item : scored) {
    if (item.greedy.text.empty() && config.empty_policy == EmptyPolicy::kReject) {
      outcome.rejected.push_back({item, RejectionReason::kEmptyHypothesis});
    } else if (item.speaking_rate < config.rate_low || item.speaking_rate > config.rate_high) {
      outcome.rejected.push_back({item, RejectionReason::kRateOutOfRange});
    } else if (item.cer_hypo > outcome.threshold_used) {
      outcome.rejected.push_back({item, RejectionReason::kCerHypoAboveThreshold});
    } else {
      outcome.accepted.push_back(item);
    }
  }
  return outcome;
}

double CorpusCer(const AlignmentStats &totals) {
  return static_cast<double>(totals.Errors()) / static_cast<double>(std::max<std::size_t>(1, totals.ref_len));
}

FilterStats ComputeFilterStats(const FilterOutcome &outcome, bool with_references) {
  FilterStats stats;
  AlignmentStats all, kept;
  auto label_of = [&](const ScoredUtterance &s) -> const AlignmentStats & {
    if (!s.label_stats) throw DataError("utterance '" + s.utt.utt_id + "' has no reference for CER-Label");
    return *s.label_stats;
  };
  double seconds = 0.0;
  for (const auto &s : outcome.accepted) {
    seconds += s.utt.duration_sec;
    if (with_references) {
      kept += label_of(s);
      all += label_of(s);
    }
  }
  if (with_references) {
    for (const auto &r : outcome.rejected) all += label_of(r.item);
    stats.pseudo_cer = CorpusCer(all);
    stats.filtered_cer = CorpusCer(kept);
  }
  stats.filtered_hours = seconds / 3600.0;
  return stats;
}

namespace {

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("Spearman correlation needs equal-length samples");
  if (x.size() < 2) return 0.0;
  std::vector<double> rx = AverageRanks(x), ry = AverageRanks(y);
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pseudofilter
