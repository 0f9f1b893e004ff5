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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pseudofilter/nbest.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/utterance.h"

namespace pseudofilter {

// Anything that turns an utterance into an N-best list. The synthetic
// model below is the only built-in implementation.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual NBestList Recognize(const Utterance &utt) const = 0;
};

struct CorruptionSplit {
  double substitute = 0.5;
  double remove = 0.25;
  double insert = 0.25;
  friend bool operator==(const CorruptionSplit &, const CorruptionSplit &) = default;
};

// Parameters of the toy student update used by ImproveSkill.
struct LearningRule {
  double gain = 0.2;         // eta
  double skill_max = 0.95;
  double hour_scale = 1.0;   // H0, in hours
  // Weight of wrong pseudo-label tokens against right ones; 0 gives a plain
  // quality-times-hours update.
  double noise_penalty = 0.0;
  friend bool operator==(const LearningRule &, const LearningRule &) = default;
};

struct SyntheticRecognizerModel {
  double skill = 0.0;
  std::map<std::string, double> base_rates;  // domain tag -> base error rate
  double default_base_rate = 0.3;
  CorruptionSplit split;
  int nbest_size = 8;
  std::uint64_t rng_seed = 0;
  double score_noise = 0.3;
  std::vector<std::string> vocabulary;  // tokens used for substitutions/insertions
  LearningRule learning;

  // Throws ConfigError when an invariant does not hold.
  void Validate() const;
  double BaseRate(const std::string &domain) const;
  // base_rate(domain) * (1 - skill)
  double CorruptionProbability(const std::string &domain) const;

  friend bool operator==(const SyntheticRecognizerModel &, const SyntheticRecognizerModel &) = default;
};

// One raw draw of the noisy channel, before sorting and deduplication.
struct SampledEntry {
  CharSeq text;
  std::size_t events = 0;       // substitutions + deletions + insertions applied
  std::size_t true_tokens = 0;  // tokens in the source text
  double acoustic_score = 0.0;
};

class SyntheticRecognizer : public Recognizer {
 public:
  explicit SyntheticRecognizer(SyntheticRecognizerModel model);

  const SyntheticRecognizerModel &model() const { return model_; }

  // nbest_size independent corruptions of the hidden true text. The random
  // stream depends only on (rng_seed, utt_id, entry index), and each true
  // token consumes a fixed number of draws, so the corruption events at a
  // lower probability are a subset of those at a higher one.
  std::vector<SampledEntry> Sample(const Utterance &utt) const;

  // Sample() sorted by descending acoustic score with duplicate texts
  // dropped (the best-scored copy is kept). Requires utt.text.
  NBestList Recognize(const Utterance &utt) const override;

 private:
  SyntheticRecognizerModel model_;
};

Hypothesis GreedyHypothesis(const NBestList &nbest);

Hypothesis LmHypothesis(const NBestList &nbest, const NGramModel &lm, RescoreWeight weight);

// skill' = min(skill_max, skill + gain * q * hours / hour_scale) where
// q = max(0, quality - noise_penalty * (1 - quality)); never lowers skill.
// The returned model's seed is derived from the old seed and `iteration`.
SyntheticRecognizerModel ImproveSkill(const SyntheticRecognizerModel &model, double accepted_hours,
                                      double accepted_quality, int iteration);

}  // namespace pseudofilter
