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

#include "pseudofilter/corpus_gen.h"

#include <unicode/utf8.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pseudofilter/error.h"
#include "pseudofilter/manifest.h"
#include "pseudofilter/rng.h"

namespace pseudofilter {

void CorpusSpec::Validate() const {
  if (vocab_size < 2) throw ConfigError("vocab_size must be >= 2");
  if (successors < 1 || successors > vocab_size) throw ConfigError("successors must lie in [1, vocab_size]");
  if (in_domains.empty()) throw ConfigError("at least one in-domain tag is required");
  if (out_domains.empty() && in_domain_share < 1.0) throw ConfigError("out-of-domain tags required when in_domain_share < 1");
  if (!(in_domain_share >= 0.0 && in_domain_share <= 1.0)) throw ConfigError("in_domain_share must lie in [0, 1]");
  if (!(music_fraction >= 0.0 && music_fraction <= 1.0)) throw ConfigError("music_fraction must lie in [0, 1]");
  if (unsupervised_count == 0 || supervised_count == 0 || eval_count == 0 || lm_sentences == 0) {
    throw ConfigError("corpus counts must be > 0");
  }
  if (min_len < 1 || max_len < min_len) throw ConfigError("need 1 <= min_len <= max_len");
  if (!(rate_min > 0.0 && rate_max >= rate_min)) throw ConfigError("need 0 < rate_min <= rate_max");
  if (!(music_min_duration > 0.0 && music_max_duration >= music_min_duration)) {
    throw ConfigError("need 0 < music_min_duration <= music_max_duration");
  }
}

CorpusSpec CorpusSpecFromConfig(KeyValueConfig &cfg) {
  CorpusSpec s;
  s.seed = static_cast<std::uint64_t>(cfg.TakeInt("seed", static_cast<long long>(s.seed)));
  s.vocab_size = static_cast<int>(cfg.TakeInt("vocab_size", s.vocab_size));
  s.successors = static_cast<int>(cfg.TakeInt("successors", s.successors));
  if (auto v = cfg.Take("in_domains")) s.in_domains = SplitList(*v);
  if (auto v = cfg.Take("out_domains")) s.out_domains = SplitList(*v);
  s.in_domain_share = cfg.TakeDouble("in_domain_share", s.in_domain_share);
  s.music_fraction = cfg.TakeDouble("music_fraction", s.music_fraction);
  s.unsupervised_count = static_cast<std::size_t>(cfg.TakeInt("unsupervised_count", s.unsupervised_count));
  s.supervised_count = static_cast<std::size_t>(cfg.TakeInt("supervised_count", s.supervised_count));
  s.eval_count = static_cast<std::size_t>(cfg.TakeInt("eval_count", s.eval_count));
  s.lm_sentences = static_cast<std::size_t>(cfg.TakeInt("lm_sentences", s.lm_sentences));
  s.min_len = static_cast<int>(cfg.TakeInt("min_len", s.min_len));
  s.max_len = static_cast<int>(cfg.TakeInt("max_len", s.max_len));
  s.rate_min = cfg.TakeDouble("rate_min", s.rate_min);
  s.rate_max = cfg.TakeDouble("rate_max", s.rate_max);
  s.music_min_duration = cfg.TakeDouble("music_min_duration", s.music_min_duration);
  s.music_max_duration = cfg.TakeDouble("music_max_duration", s.music_max_duration);
  s.Validate();
  return s;
}

CorpusSpec LoadCorpusSpec(const std::string &path) {
  KeyValueConfig cfg = KeyValueConfig::ReadFile(path);
  CorpusSpec spec = CorpusSpecFromConfig(cfg);
  cfg.CheckAllUsed();
  return spec;
}

namespace {

// First-order Markov source: uniform start token, then one of a few fixed
// successors per token with Zipf-like weights.
class MarkovSource {
 public:
  MarkovSource(std::uint64_t seed, int vocab_size, int successors) {
    Rng rng(seed);
    next_.resize(vocab_size);
    for (auto &row : next_) {
      while (static_cast<int>(row.size()) < successors) {
        int t = static_cast<int>(rng.Below(vocab_size));
        if (std::find(row.begin(), row.end(), t) == row.end()) row.push_back(t);
      }
    }
    double total = 0;
    for (int r = 0; r < successors; ++r) total += 1.0 / (r + 1);
    double acc = 0;
    for (int r = 0; r < successors; ++r) {
      acc += 1.0 / (r + 1) / total;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }

  std::vector<int> Sentence(Rng &rng, int length) const {
    std::vector<int> out;
    out.reserve(length);
    int t = static_cast<int>(rng.Below(next_.size()));
    out.push_back(t);
    while (static_cast<int>(out.size()) < length) {
      double u = rng.Uniform();
      std::size_t r = 0;
      while (r + 1 < cumulative_.size() && u >= cumulative_[r]) ++r;
      t = next_[t][r];
      out.push_back(t);
    }
    return out;
  }

 private:
  std::vector<std::vector<int>> next_;
  std::vector<double> cumulative_;
};

std::string TokenFor(int index) {
  UChar32 c = 0x4E00 + index;  // CJK Unified Ideographs
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  return std::string(buf, static_cast<std::size_t>(len));
}

double RoundCentis(double seconds) { return std::max(0.01, std::round(seconds * 100.0) / 100.0); }

std::string MakeId(const char *prefix, std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, i);
  return buf;
}

}  // namespace

GeneratedCorpus GenerateCorpus(const CorpusSpec &spec) {
  spec.Validate();
  std::vector<std::string> vocab;
  vocab.reserve(spec.vocab_size);
  for (int i = 0; i < spec.vocab_size; ++i) vocab.push_back(TokenFor(i));

  MarkovSource in_source(DeriveSeed(spec.seed, Fnv1a64("in-domain")), spec.vocab_size, spec.successors);
  std::vector<MarkovSource> out_sources;
  for (const auto &d : spec.out_domains) {
    out_sources.emplace_back(DeriveSeed(spec.seed, Fnv1a64("out-domain:" + d)), spec.vocab_size, spec.successors);
  }

  auto to_seq = [&](const std::vector<int> &ids) {
    std::vector<std::string> toks;
    toks.reserve(ids.size());
    for (int id : ids) toks.push_back(vocab[id]);
    return CharSeq(std::move(toks));
  };
  auto length = [&](Rng &rng) { return spec.min_len + static_cast<int>(rng.Below(spec.max_len - spec.min_len + 1)); };
  auto speech = [&](Rng &rng, const MarkovSource &src, const std::string &id, const std::string &domain) {
    Utterance u;
    u.utt_id = id;
    u.domain = domain;
    CharSeq text = to_seq(src.Sentence(rng, length(rng)));
    double rate = spec.rate_min + (spec.rate_max - spec.rate_min) * rng.Uniform();
    u.duration_sec = RoundCentis(static_cast<double>(text.size()) / rate);
    u.text = std::move(text);
    return u;
  };

  GeneratedCorpus corpus;
  {
    Rng rng(DeriveSeed(spec.seed, Fnv1a64("lm-text")));
    for (std::size_t i = 0; i < spec.lm_sentences; ++i) corpus.lm_text.push_back(to_seq(in_source.Sentence(rng, length(rng))));
  }
  {
    Rng rng(DeriveSeed(spec.seed, Fnv1a64("supervised")));
    for (std::size_t i = 0; i < spec.supervised_count; ++i) {
      const auto &domain = spec.in_domains[rng.Below(spec.in_domains.size())];
      corpus.supervised.push_back(speech(rng, in_source, MakeId("sup", i), domain));
    }
  }
  {
    Rng rng(DeriveSeed(spec.seed, Fnv1a64("eval")));
    for (std::size_t i = 0; i < spec.eval_count; ++i) {
      const auto &domain = spec.in_domains[rng.Below(spec.in_domains.size())];
      corpus.eval.push_back(speech(rng, in_source, MakeId("eval", i), domain));
    }
  }
  {
    Rng rng(DeriveSeed(spec.seed, Fnv1a64("unsupervised")));
    for (std::size_t i = 0; i < spec.unsupervised_count; ++i) {
      std::string id = MakeId("unsup", i);
      double kind = rng.Uniform();
      double in_domain = rng.Uniform();
      if (kind < spec.music_fraction) {
        // A few tokens of lyrics or noise over a long stretch of audio.
        const MarkovSource &src = out_sources.empty() ? in_source : out_sources[rng.Below(out_sources.size())];
        Utterance u;
        u.utt_id = id;
        u.domain = kMusicDomain;
        u.text = to_seq(src.Sentence(rng, 1 + static_cast<int>(rng.Below(3))));
        u.duration_sec = RoundCentis(spec.music_min_duration +
                                     (spec.music_max_duration - spec.music_min_duration) * rng.Uniform());
        corpus.unsupervised.push_back(std::move(u));
      } else if (in_domain < spec.in_domain_share || out_sources.empty()) {
        const auto &domain = spec.in_domains[rng.Below(spec.in_domains.size())];
        corpus.unsupervised.push_back(speech(rng, in_source, id, domain));
      } else {
        std::size_t d = rng.Below(out_sources.size());
        corpus.unsupervised.push_back(speech(rng, out_sources[d], id, spec.out_domains[d]));
      }
    }
  }
  return corpus;
}

void WriteCorpus(const GeneratedCorpus &corpus, const std::string &dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::path base(dir);
  WriteManifest((base / "supervised.jsonl").string(), corpus.supervised);
  WriteManifest((base / "unsupervised.jsonl").string(), corpus.unsupervised);
  WriteManifest((base / "eval.jsonl").string(), corpus.eval);
  std::string lm_path = (base / "lm_text.txt").string();
  std::ofstream out(lm_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + lm_path);
  for (const auto &s : corpus.lm_text) out << s.Join() << '\n';
  if (!out) throw IoError("write failed: " + lm_path);
}

std::vector<CharSeq> ReadTextCorpus(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open text corpus: " + path);
  std::vector<CharSeq> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      CharSeq s = Tokenize(line);
      if (!s.empty()) out.push_back(std::move(s));
    } catch (const EncodingError &e) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace pseudofilter
