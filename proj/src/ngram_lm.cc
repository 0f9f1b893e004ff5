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

#include "pseudofilter/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pseudofilter/error.h"

namespace pseudofilter {

namespace {

const double kLn10 = std::log(10.0);
// ARPA convention for the never-predicted sentence-begin unigram.
constexpr double kBosLog10 = -99.0;

std::string FormatLog10(double natural_log) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8g", natural_log / kLn10);
  return buf;
}

}  // namespace

RescoreWeight::RescoreWeight(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("rescore weight lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

std::size_t NGramModel::NgramHash::operator()(const Ngram &g) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (TokenId id : g) {
    h ^= id;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

NGramModel::TokenId NGramModel::AddToken(const std::string &token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  TokenId id = static_cast<TokenId>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

NGramModel::TokenId NGramModel::Lookup(const std::string &token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

std::vector<NGramModel::TokenId> NGramModel::PredictableIds() const {
  std::vector<TokenId> ids;
  ids.reserve(id_to_token_.size() - 1);
  for (TokenId id = 0; id < id_to_token_.size(); ++id) {
    if (id != kBosId) ids.push_back(id);
  }
  return ids;
}

const NGramModel::Entry *NGramModel::Find(const Ngram &g) const {
  if (g.empty() || g.size() > tables_.size()) return nullptr;
  const Table &t = tables_[g.size() - 1];
  auto it = t.find(g);
  return it == t.end() ? nullptr : &it->second;
}

double NGramModel::LogProb(std::span<const TokenId> context, TokenId next) const {
  std::size_t ctx_len = std::min<std::size_t>(context.size(), order_ - 1);
  auto ctx = context.subspan(context.size() - ctx_len);

  double backoff = 0.0;
  Ngram g;
  g.reserve(ctx_len + 1);
  for (std::size_t k = ctx_len;; --k) {
    auto h = ctx.subspan(ctx_len - k);
    g.assign(h.begin(), h.end());
    g.push_back(next);
    if (const Entry *e = Find(g)) return backoff + e->logprob;
    if (k == 0) break;
    g.pop_back();
    if (const Entry *c = Find(g)) backoff += c->backoff;
  }
  // Only reachable for ids missing from the unigram table.
  return backoff + LogProb({}, kUnkId);
}

std::vector<NGramModel::Ngram> NGramModel::Contexts() const {
  std::vector<Ngram> out;
  out.emplace_back();
  for (std::size_t k = 0; k + 1 < tables_.size(); ++k) {
    std::vector<Ngram> level;
    for (const auto &[g, e] : tables_[k]) {
      if (e.has_backoff) level.push_back(g);
    }
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

NGramModel NGramModel::Train(std::span<const CharSeq> corpus, int order, double discount) {
  std::vector<LmCorpus> single(1);
  single[0].sentences.assign(corpus.begin(), corpus.end());
  return Train(single, order, discount);
}

NGramModel NGramModel::Train(std::span<const LmCorpus> corpora, int order, double discount) {
  if (order < 1) throw ConfigError("n-gram order must be >= 1");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("discount must lie in (0, 1)");
  bool any = false;
  for (const auto &c : corpora) {
    if (c.repeat < 0) throw ConfigError("corpus repetition weight must be >= 0");
    if (c.repeat > 0 && !c.sentences.empty()) any = true;
  }
  if (!any) throw DataError("cannot train a language model on an empty corpus");

  NGramModel model;
  model.order_ = order;
  model.AddToken(kSentenceBegin);
  model.AddToken(kSentenceEnd);
  model.AddToken(kUnknown);
  {
    std::vector<std::string> vocab;
    for (const auto &c : corpora) {
      if (c.repeat == 0) continue;
      for (const auto &s : c.sentences) vocab.insert(vocab.end(), s.begin(), s.end());
    }
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    for (const auto &t : vocab) {
      if (t == kSentenceBegin || t == kSentenceEnd || t == kUnknown) continue;
      model.AddToken(t);
    }
  }

  // counts[k-1]: k-gram -> count, over predicted positions only.
  std::vector<std::map<Ngram, std::uint64_t>> counts(order);
  Ngram padded;
  for (const auto &c : corpora) {
    if (c.repeat == 0) continue;
    for (const auto &s : c.sentences) {
      padded.clear();
      padded.push_back(kBosId);
      for (const auto &t : s) padded.push_back(model.Lookup(t));
      padded.push_back(kEosId);
      for (std::size_t i = 1; i < padded.size(); ++i) {
        std::size_t max_k = std::min<std::size_t>(order, i + 1);
        for (std::size_t k = 1; k <= max_k; ++k) {
          Ngram g(padded.begin() + (i + 1 - k), padded.begin() + (i + 1));
          counts[k - 1][g] += static_cast<std::uint64_t>(c.repeat);
        }
      }
    }
  }

  const double uniform = 1.0 / static_cast<double>(model.vocab_size() - 1);
  model.tables_.resize(order);

  for (int k = 1; k <= order; ++k) {
    // Context totals and distinct continuation counts.
    std::map<Ngram, std::pair<std::uint64_t, std::uint64_t>> ctx_stats;
    for (const auto &[g, n] : counts[k - 1]) {
      auto &st = ctx_stats[Ngram(g.begin(), g.end() - 1)];
      st.first += n;
      st.second += 1;
    }
    Table &table = model.tables_[k - 1];
    for (const auto &[g, n] : counts[k - 1]) {
      Ngram h(g.begin(), g.end() - 1);
      const auto &[total, types] = ctx_stats.at(h);
      double gamma = discount * static_cast<double>(types) / static_cast<double>(total);
      double lower = k == 1 ? uniform : std::exp(model.LogProb(std::span(g).subspan(1, k - 2), g.back()));
      double p = (static_cast<double>(n) - discount) / static_cast<double>(total) + gamma * lower;
      table[g].logprob = std::log(p);
    }
    if (k == 1) {
      const auto &[total, types] = ctx_stats.at(Ngram{});
      double gamma = discount * static_cast<double>(types) / static_cast<double>(total);
      table[Ngram{kUnkId}].logprob = std::log(gamma * uniform);
      table[Ngram{kBosId}].logprob = kBosLog10 * kLn10;
    } else {
      for (const auto &[h, st] : ctx_stats) {
        double gamma = discount * static_cast<double>(st.second) / static_cast<double>(st.first);
        Entry &e = model.tables_[k - 2][h];
        e.backoff = std::log(gamma);
        e.has_backoff = true;
      }
    }
  }
  return model;
}

void NGramModel::WriteArpa(std::ostream &out) const {
  out << "\\data\\\n";
  for (std::size_t k = 0; k < tables_.size(); ++k) {
    out << "ngram " << (k + 1) << "=" << tables_[k].size() << "\n";
  }
  for (std::size_t k = 0; k < tables_.size(); ++k) {
    out << "\n\\" << (k + 1) << "-grams:\n";
    std::vector<const std::pair<const Ngram, Entry> *> rows;
    rows.reserve(tables_[k].size());
    for (const auto &row : tables_[k]) rows.push_back(&row);
    std::sort(rows.begin(), rows.end(), [](auto *a, auto *b) { return a->first < b->first; });
    for (const auto *row : rows) {
      out << FormatLog10(row->second.logprob) << '\t';
      for (std::size_t i = 0; i < row->first.size(); ++i) {
        if (i) out << ' ';
        out << id_to_token_[row->first[i]];
      }
      if (row->second.has_backoff) out << '\t' << FormatLog10(row->second.backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

void NGramModel::WriteArpaFile(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  WriteArpa(out);
  if (!out) throw IoError("write failed: " + path);
}

NGramModel NGramModel::ReadArpa(std::istream &in) {
  NGramModel model;
  model.AddToken(kSentenceBegin);
  model.AddToken(kSentenceEnd);
  model.AddToken(kUnknown);

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &what) -> void {
    throw DataError("ARPA line " + std::to_string(line_no) + ": " + what);
  };
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  while (next_line() && line != "\\data\\") {
  }
  if (line != "\\data\\") throw DataError("ARPA: missing \\data\\ header");

  std::vector<std::size_t> declared;
  while (next_line() && !line.empty()) {
    unsigned k = 0;
    std::size_t n = 0;
    if (std::sscanf(line.c_str(), "ngram %u=%zu", &k, &n) != 2 || k != declared.size() + 1) {
      fail("bad count line '" + line + "'");
    }
    declared.push_back(n);
  }
  if (declared.empty()) fail("no n-gram counts declared");
  model.order_ = static_cast<int>(declared.size());
  model.tables_.resize(declared.size());

  // Rows are staged as strings because higher-order tokens may only be
  // interned after the unigram section has fixed the vocabulary order.
  struct Row {
    std::vector<std::string> words;
    double logprob;
    double backoff;
    bool has_backoff;
  };
  std::vector<std::vector<Row>> rows(declared.size());
  std::size_t current = 0;
  while (next_line()) {
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    unsigned k = 0;
    if (line.front() == '\\') {
      if (std::sscanf(line.c_str(), "\\%u-grams:", &k) != 1 || k < 1 || k > declared.size()) {
        fail("bad section header '" + line + "'");
      }
      current = k;
      continue;
    }
    if (current == 0) fail("n-gram row outside a section");
    std::istringstream fields(line);
    Row row;
    double lp10 = 0.0;
    if (!(fields >> lp10)) fail("missing log-probability");
    row.logprob = lp10 * kLn10;
    for (std::size_t i = 0; i < current; ++i) {
      std::string w;
      if (!(fields >> w)) fail("expected " + std::to_string(current) + " words");
      row.words.push_back(std::move(w));
    }
    double bo10 = 0.0;
    row.has_backoff = static_cast<bool>(fields >> bo10);
    row.backoff = row.has_backoff ? bo10 * kLn10 : 0.0;
    if (!std::isfinite(row.logprob) || row.logprob > 0.0) fail("log-probability must be finite and <= 0");
    rows[current - 1].push_back(std::move(row));
  }
  if (line != "\\end\\") throw DataError("ARPA: missing \\end\\ marker");

  std::vector<std::string> vocab;
  for (const auto &row : rows[0]) vocab.push_back(row.words[0]);
  std::sort(vocab.begin(), vocab.end());
  for (const auto &t : vocab) model.AddToken(t);

  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != declared[k]) {
      throw DataError("ARPA: " + std::to_string(k + 1) + "-gram count mismatch");
    }
    for (const auto &row : rows[k]) {
      Ngram g;
      for (const auto &w : row.words) {
        auto it = model.token_to_id_.find(w);
        if (it == model.token_to_id_.end()) throw DataError("ARPA: word '" + w + "' missing from 1-grams");
        g.push_back(it->second);
      }
      Entry &e = model.tables_[k][g];
      e.logprob = row.logprob;
      e.backoff = row.backoff;
      e.has_backoff = row.has_backoff;
    }
  }
  if (!model.Find(Ngram{kUnkId})) throw DataError("ARPA: model has no <unk> unigram");
  return model;
}

NGramModel NGramModel::ReadArpaFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ARPA file: " + path);
  try {
    return ReadArpa(in);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

double SequenceLogProb(const NGramModel &model, const CharSeq &seq) {
  std::vector<NGramModel::TokenId> history;
  history.reserve(seq.size() + 2);
  history.push_back(NGramModel::kBosId);
  double total = 0.0;
  for (const auto &t : seq) {
    NGramModel::TokenId id = model.Lookup(t);
    total += model.LogProb(history, id);
    history.push_back(id);
  }
  total += model.LogProb(history, NGramModel::kEosId);
  return total;
}

double Perplexity(const NGramModel &model, std::span<const CharSeq> corpus) {
  if (corpus.empty()) throw DataError("perplexity of an empty corpus is undefined");
  double logprob = 0.0;
  std::size_t events = 0;
  for (const auto &s : corpus) {
    logprob += SequenceLogProb(model, s);
    events += s.size() + 1;
  }
  return std::exp(-logprob / static_cast<double>(events));
}

std::vector<double> NormalizedAcousticScores(const NBestList &nbest) {
  std::vector<double> out;
  if (nbest.entries.empty()) return out;
  double top = nbest.entries.front().acoustic_score;
  for (const auto &h : nbest.entries) top = std::max(top, h.acoustic_score);
  double norm = static_cast<double>(std::max<std::size_t>(1, nbest.entries.front().text.size()));
  out.reserve(nbest.entries.size());
  for (const auto &h : nbest.entries) out.push_back((h.acoustic_score - top) / norm);
  return out;
}

double FusedScore(const NGramModel &model, const CharSeq &text, double normalized_acoustic, RescoreWeight weight) {
  double lambda = weight.lambda();
  if (lambda == 0.0) return normalized_acoustic;
  double norm = static_cast<double>(std::max<std::size_t>(1, text.size()));
  return (1.0 - lambda) * normalized_acoustic + lambda * SequenceLogProb(model, text) / norm;
}

NBestList RescoreNBest(const NGramModel &model, const NBestList &nbest, RescoreWeight weight) {
  std::vector<double> scores = NormalizedAcousticScores(nbest);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = FusedScore(model, nbest.entries[i].text, scores[i], weight);
  }

  std::vector<std::size_t> order(nbest.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  NBestList out;
  out.utt_id = nbest.utt_id;
  out.entries.reserve(order.size());
  for (std::size_t i : order) out.entries.push_back(nbest.entries[i]);
  return out;
}

}  // namespace pseudofilter
