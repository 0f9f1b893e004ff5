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
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pseudofilter/nbest.h"
#include "pseudofilter/text_metrics.h"

namespace pseudofilter {

inline constexpr const char *kSentenceBegin = "<s>";
inline constexpr const char *kSentenceEnd = "</s>";
inline constexpr const char *kUnknown = "<unk>";

// Interpolation weight between acoustic and LM score in N-best rescoring.
class RescoreWeight {
 public:
  explicit RescoreWeight(double lambda = 0.5);
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// One block of LM training text, counted `repeat` times.
struct LmCorpus {
  std::vector<CharSeq> sentences;
  int repeat = 1;
};

// Back-off character n-gram model. The probability table holds the fully
// interpolated probability of every observed n-gram and the back-off weight
// of every observed context, so the same lookup serves trained and
// ARPA-loaded models.
class NGramModel {
 public:
  using TokenId = std::uint32_t;
  using Ngram = std::vector<TokenId>;

  static constexpr TokenId kBosId = 0;
  static constexpr TokenId kEosId = 1;
  static constexpr TokenId kUnkId = 2;

  // Absolute discounting with interpolated back-off to lower orders,
  // grounded in a uniform distribution over vocabulary, end and unknown.
  static NGramModel Train(std::span<const CharSeq> corpus, int order, double discount = 0.4);
  static NGramModel Train(std::span<const LmCorpus> corpora, int order, double discount = 0.4);

  static NGramModel ReadArpa(std::istream &in);
  static NGramModel ReadArpaFile(const std::string &path);
  void WriteArpa(std::ostream &out) const;
  void WriteArpaFile(const std::string &path) const;

  int order() const { return order_; }
  std::size_t vocab_size() const { return id_to_token_.size(); }
  const std::string &token(TokenId id) const { return id_to_token_.at(id); }
  // Out-of-vocabulary tokens map to the unknown id.
  TokenId Lookup(const std::string &token) const;

  // Every id that can be predicted: regular tokens, end and unknown.
  std::vector<TokenId> PredictableIds() const;

  // Natural-log P(next | context); only the last order-1 ids of the
  // context are used.
  double LogProb(std::span<const TokenId> context, TokenId next) const;

  // Every context with a back-off weight, i.e. every context seen in training,
  // plus the empty context.
  std::vector<Ngram> Contexts() const;

  friend bool operator==(const NGramModel &, const NGramModel &) = default;

 private:
  struct Entry {
    double logprob = 0.0;  // natural log
    double backoff = 0.0;  // natural log; 0 when absent
    bool has_backoff = false;
    friend bool operator==(const Entry &, const Entry &) = default;
  };
  struct NgramHash {
    std::size_t operator()(const Ngram &g) const noexcept;
  };
  using Table = std::unordered_map<Ngram, Entry, NgramHash>;

  NGramModel() = default;
  TokenId AddToken(const std::string &token);
  const Entry *Find(const Ngram &g) const;

  int order_ = 1;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<Table> tables_;  // tables_[k-1] holds k-grams
};

// Natural-log probability of `seq` followed by the end marker.
double SequenceLogProb(const NGramModel &model, const CharSeq &seq);

// exp(-total logprob / total predicted events); events include one end
// marker per sentence. Throws DataError on an empty corpus.
double Perplexity(const NGramModel &model, std::span<const CharSeq> corpus);

// Acoustic scores shifted so the best entry is 0 and divided by the length
// of the top entry: a per-token scale that preserves acoustic order.
std::vector<double> NormalizedAcousticScores(const NBestList &nbest);

// (1 - lambda) * normalized_acoustic + lambda * logprob(text) / max(1, |text|).
double FusedScore(const NGramModel &model, const CharSeq &text, double normalized_acoustic, RescoreWeight weight);

// Re-ranks by FusedScore, descending; ties keep the original acoustic order.
NBestList RescoreNBest(const NGramModel &model, const NBestList &nbest, RescoreWeight weight);

}  // namespace pseudofilter
