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

#include "pseudofilter/recognizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pseudofilter/error.h"
#include "pseudofilter/rng.h"

namespace pseudofilter {

void ValidateNBest(const NBestList &nbest) {
  if (nbest.entries.empty()) throw DataError("N-best list for '" + nbest.utt_id + "' is empty");
  std::set<CharSeq> seen;
  for (std::size_t i = 0; i < nbest.entries.size(); ++i) {
    const auto &h = nbest.entries[i];
    if (!std::isfinite(h.acoustic_score)) throw DataError("non-finite acoustic score in '" + nbest.utt_id + "'");
    if (i > 0 && h.acoustic_score > nbest.entries[i - 1].acoustic_score) {
      throw DataError("N-best list for '" + nbest.utt_id + "' is not sorted by acoustic score");
    }
    if (!seen.insert(h.text).second) throw DataError("duplicate hypothesis text in '" + nbest.utt_id + "'");
  }
}

void SyntheticRecognizerModel::Validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(skill)) throw ConfigError("skill must lie in [0, 1]");
  if (!in_unit(default_base_rate)) throw ConfigError("default base rate must lie in [0, 1]");
  for (const auto &[domain, rate] : base_rates) {
    if (!in_unit(rate)) throw ConfigError("base rate for domain '" + domain + "' must lie in [0, 1]");
  }
  if (split.substitute < 0 || split.remove < 0 || split.insert < 0 ||
      std::abs(split.substitute + split.remove + split.insert - 1.0) > 1e-9) {
    throw ConfigError("corruption split must be non-negative and sum to 1");
  }
  if (nbest_size < 1) throw ConfigError("nbest_size must be >= 1");
  if (!(score_noise >= 0.0) || !std::isfinite(score_noise)) throw ConfigError("score noise must be >= 0");
  if (!in_unit(learning.skill_max)) throw ConfigError("skill_max must lie in [0, 1]");
  if (!(learning.gain >= 0.0)) throw ConfigError("learning gain must be >= 0");
  if (!(learning.hour_scale > 0.0)) throw ConfigError("hour scale must be > 0");
  if (!(learning.noise_penalty >= 0.0)) throw ConfigError("noise penalty must be >= 0");
}

double SyntheticRecognizerModel::BaseRate(const std::string &domain) const {
  auto it = base_rates.find(domain);
  return it == base_rates.end() ? default_base_rate : it->second;
}

double SyntheticRecognizerModel::CorruptionProbability(const std::string &domain) const {
  return BaseRate(domain) * (1.0 - skill);
}

SyntheticRecognizer::SyntheticRecognizer(SyntheticRecognizerModel model) : model_(std::move(model)) {
  model_.Validate();
}

std::vector<SampledEntry> SyntheticRecognizer::Sample(const Utterance &utt) const {
  if (!utt.text) throw DataError("synthetic recognizer needs the hidden text of '" + utt.utt_id + "'");
  const CharSeq &truth = *utt.text;
  const double p = model_.CorruptionProbability(utt.domain);
  const double p_sub = model_.split.substitute;
  const double p_del = model_.split.remove;
  const auto &vocab = model_.vocabulary;
  const std::uint64_t utt_key = Fnv1a64(utt.utt_id);

  auto random_token = [&](Rng &rng, const std::string *avoid) -> std::string {
    if (vocab.empty()) return avoid ? *avoid : std::string();
    if (avoid && vocab.size() > 1) {
      auto it = std::find(vocab.begin(), vocab.end(), *avoid);
      if (it != vocab.end()) {
        std::size_t skip = static_cast<std::size_t>(it - vocab.begin());
        std::size_t idx = rng.Below(vocab.size() - 1);
        return vocab[idx >= skip ? idx + 1 : idx];
      }
    }
    return vocab[rng.Below(vocab.size())];
  };

  std::vector<SampledEntry> out;
  out.reserve(model_.nbest_size);
  for (int e = 0; e < model_.nbest_size; ++e) {
    Rng rng(DeriveSeed(model_.rng_seed, utt_key, static_cast<std::uint64_t>(e)));
    SampledEntry entry;
    entry.true_tokens = truth.size();
    std::vector<std::string> tokens;
    tokens.reserve(truth.size() + 4);
    for (const auto &tok : truth) {
      // Three draws per token whatever happens; replacement tokens come
      // from a private stream so they never shift the outer one.
      double occur = rng.Uniform();
      double kind = rng.Uniform();
      Rng pick(rng.Below(~0ull));
      if (occur >= p) {
        tokens.push_back(tok);
        continue;
      }
      ++entry.events;
      if (kind < p_sub) {
        tokens.push_back(random_token(pick, &tok));
      } else if (kind < p_sub + p_del) {
        // dropped
      } else {
        tokens.push_back(tok);
        tokens.push_back(random_token(pick, nullptr));
      }
    }
    entry.text = CharSeq(std::move(tokens));
    entry.acoustic_score = -static_cast<double>(entry.events) + model_.score_noise * rng.Gaussian();
    out.push_back(std::move(entry));
  }
  return out;
}

NBestList SyntheticRecognizer::Recognize(const Utterance &utt) const {
  std::vector<SampledEntry> samples = Sample(utt);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].acoustic_score > samples[b].acoustic_score;
  });

  NBestList nbest;
  nbest.utt_id = utt.utt_id;
  std::set<CharSeq> seen;
  for (std::size_t i : order) {
    if (!seen.insert(samples[i].text).second) continue;
    nbest.entries.push_back({std::move(samples[i].text), samples[i].acoustic_score});
  }
  return nbest;
}

Hypothesis GreedyHypothesis(const NBestList &nbest) {
  if (nbest.entries.empty()) throw DataError("N-best list for '" + nbest.utt_id + "' is empty");
  return nbest.entries.front();
}

Hypothesis LmHypothesis(const NBestList &nbest, const NGramModel &lm, RescoreWeight weight) {
  if (nbest.entries.empty()) throw DataError("N-best list for '" + nbest.utt_id + "' is empty");
  return RescoreNBest(lm, nbest, weight).entries.front();
}

SyntheticRecognizerModel ImproveSkill(const SyntheticRecognizerModel &model, double accepted_hours,
                                      double accepted_quality, int iteration) {
  if (!(accepted_hours >= 0.0)) throw DataError("accepted hours must be >= 0");
  const LearningRule &rule = model.learning;
  double quality = std::clamp(accepted_quality, 0.0, 1.0);
  double useful = std::max(0.0, quality - rule.noise_penalty * (1.0 - quality));

  SyntheticRecognizerModel next = model;
  double target = std::min(rule.skill_max, model.skill + rule.gain * useful * accepted_hours / rule.hour_scale);
  next.skill = std::max(model.skill, target);
  next.rng_seed = DeriveSeed(model.rng_seed, 0x6e73742d69746572ull, static_cast<std::uint64_t>(iteration));
  return next;
}

}  // namespace pseudofilter
