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
#include <string>
#include <vector>

#include "pseudofilter/config.h"
#include "pseudofilter/text_metrics.h"
#include "pseudofilter/utterance.h"

namespace pseudofilter {

// Recipe for a synthetic corpus. In-domain sentences come from the same
// Markov source as the LM training text; every out-of-domain tag gets its
// own independently drawn source.
struct CorpusSpec {
  std::uint64_t seed = 20221108;
  int vocab_size = 100;
  int successors = 4;  // branching factor of each source
  std::vector<std::string> in_domains{"news", "reading"};
  std::vector<std::string> out_domains{"drama", "variety"};
  double in_domain_share = 0.4;
  double music_fraction = 0.05;  // near-silent-text items, domain "music"
  std::size_t unsupervised_count = 2000;
  std::size_t supervised_count = 300;
  std::size_t eval_count = 400;
  std::size_t lm_sentences = 4000;
  int min_len = 8;
  int max_len = 24;
  double rate_min = 2.0;  // true tokens per second
  double rate_max = 6.0;
  double music_min_duration = 3.0;
  double music_max_duration = 10.0;

  void Validate() const;
};

inline constexpr const char *kMusicDomain = "music";

// Reads every CorpusSpec field from `cfg`; unknown keys are left for the
// caller's CheckAllUsed().
CorpusSpec CorpusSpecFromConfig(KeyValueConfig &cfg);
CorpusSpec LoadCorpusSpec(const std::string &path);

struct GeneratedCorpus {
  std::vector<Utterance> supervised;
  std::vector<Utterance> unsupervised;
  std::vector<Utterance> eval;
  std::vector<CharSeq> lm_text;
};

GeneratedCorpus GenerateCorpus(const CorpusSpec &spec);

// Writes supervised.jsonl, unsupervised.jsonl, eval.jsonl and lm_text.txt.
void WriteCorpus(const GeneratedCorpus &corpus, const std::string &dir);

// One sentence per line, tokenized.
std::vector<CharSeq> ReadTextCorpus(const std::string &path);

}  // namespace pseudofilter
