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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pseudofilter/config.h"
#include "pseudofilter/corpus_gen.h"
#include "pseudofilter/manifest.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/recognizer.h"
#include "pseudofilter/report.h"
#include "pseudofilter/selection.h"

namespace pseudofilter {

struct LmCorpusSource {
  std::string path;
  int repeat = 1;
};

// "path" or "path*N" (N-fold repetition); relative paths resolve against
// base_dir.
LmCorpusSource ParseLmCorpusSource(const std::string &item, const std::filesystem::path &base_dir = {});

struct NSTConfig {
  int iterations = 8;  // rows 0..iterations-1
  bool filter_enabled = true;
  FilterConfig filter;
  int lm_order = 5;
  double lm_discount = 0.4;
  RescoreWeight rescore_weight{0.5};
  // Initial teacher. Its vocabulary is taken from the LM and, when
  // hour_scale is 0, learning.hour_scale becomes the unsupervised hours.
  SyntheticRecognizerModel recognizer;
  double hour_scale = 0.0;
  int workers = 1;  // 0 = hardware concurrency

  std::string supervised_manifest;
  std::string unsupervised_manifest;
  std::string eval_manifest;
  std::vector<LmCorpusSource> lm_corpora;
  std::string lm_arpa;
  // Used instead of the manifests and LM corpora when set.
  std::optional<CorpusSpec> corpus;

  void Validate() const;
};

// Reads a run config. Relative paths resolve against the config's
// directory; PSEUDOFILTER_SEED, when set, overrides `seed`.
NSTConfig LoadRunConfig(const std::string &path);
NSTConfig RunConfigFromKeyValues(KeyValueConfig &cfg);

struct NSTInputs {
  std::vector<Utterance> supervised;
  std::vector<Utterance> unsupervised;
  std::vector<Utterance> eval;
  std::optional<NGramModel> lm;
  // Set when the corpus was generated in-process.
  std::optional<GeneratedCorpus> generated;
};

// Loads manifests (or generates the corpus) and trains or reads the LM.
// A trained LM is passed through its ARPA text form so that a run scored
// in-process and one scored from the written lm.arpa see the same numbers.
NSTInputs LoadInputs(const NSTConfig &config);

double TotalHours(std::span<const Utterance> utts);

// Iteration-0 teacher: configured skill, floored by supervised hours over
// the hour scale; vocabulary from the LM.
SyntheticRecognizerModel InitialTeacher(const NSTConfig &config, const NSTInputs &inputs);

// Recognizes and scores every utterance with a worker pool; the result is
// sorted by utt_id whatever the worker count.
std::vector<ScoredUtterance> ScoreAll(const SyntheticRecognizerModel &teacher, std::span<const Utterance> utts,
                                      const NGramModel &lm, RescoreWeight weight, int workers);

// Corpus CER of greedy top-1 hypotheses; every utterance needs a reference.
double Evaluate(const SyntheticRecognizerModel &model, std::span<const Utterance> eval_set, int workers = 1);

struct IterationResult {
  SyntheticRecognizerModel student;
  IterationReport report;
  FilterOutcome outcome;
};

IterationResult RunIteration(const SyntheticRecognizerModel &teacher, int iteration, const NSTConfig &config,
                             const NSTInputs &inputs);

struct RunResult {
  std::vector<IterationReport> reports;
  std::vector<SyntheticRecognizerModel> teachers;  // teachers[k] labeled iteration k
  SyntheticRecognizerModel final_student;
};

// Runs every iteration, handing each student on as the next teacher. With
// a non-empty out_dir it writes report.csv (refreshed after every
// iteration), iter_NN/{accepted,rejected}.jsonl, lm.arpa when trained, and
// corpus/ when generated.
RunResult Run(const NSTConfig &config, const std::string &out_dir = "");
RunResult Run(const NSTConfig &config, const NSTInputs &inputs, const std::string &out_dir = "");

std::string IterationDir(const std::string &out_dir, int iteration);

// Union by utt_id; on collision the lower cer_hypo wins (earlier source on
// ties, missing cer_hypo loses). Output is sorted by utt_id.
std::vector<ManifestRecord> MergeFilteredManifests(std::span<const std::string> paths);

}  // namespace pseudofilter
