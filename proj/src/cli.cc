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

#include "pseudofilter/cli.h"

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pseudofilter/corpus_gen.h"
#include "pseudofilter/error.h"
#include "pseudofilter/manifest.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/nst_loop.h"
#include "pseudofilter/report.h"
#include "pseudofilter/selection.h"

namespace pseudofilter {
namespace {

namespace fs = std::filesystem;

struct TrainLmArgs {
  std::vector<std::string> corpora;
  int order = 5;
  double discount = 0.4;
  std::string out;
};

struct ScoreArgs {
  std::string manifest, lm, config, out;
  int workers = -1;
};

struct FilterArgs {
  std::string scored, config, out_accepted, out_rejected;
  int iteration = 0;
};

struct SimulateArgs {
  std::string config, out_dir;
  int workers = -1;
};

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void TrainLm(const TrainLmArgs &a, std::ostream &out) {
  std::vector<LmCorpus> corpora;
  for (const auto &item : a.corpora) {
    LmCorpusSource src = ParseLmCorpusSource(item);
    corpora.push_back({ReadTextCorpus(src.path), src.repeat});
  }
  NGramModel model = NGramModel::Train(corpora, a.order, a.discount);
  model.WriteArpaFile(a.out);
  out << "wrote " << a.out << " (order " << a.order << ", " << model.vocab_size() << " symbols)\n";
}

// Scoring uses the iteration-0 teacher of the run described by the config,
// with the given manifest as the unsupervised set.
void Score(const ScoreArgs &a, std::ostream &out) {
  NSTConfig config = LoadRunConfig(a.config);
  if (a.workers >= 0) config.workers = a.workers;
  NSTInputs inputs;
  if (config.corpus) {
    inputs.supervised = GenerateCorpus(*config.corpus).supervised;
  } else if (!config.supervised_manifest.empty()) {
    inputs.supervised = ReadManifest(config.supervised_manifest);
  }
  inputs.unsupervised = ReadManifest(a.manifest);
  inputs.lm = NGramModel::ReadArpaFile(a.lm);
  SyntheticRecognizerModel teacher = InitialTeacher(config, inputs);
  std::vector<ScoredUtterance> scored =
      ScoreAll(teacher, inputs.unsupervised, *inputs.lm, config.rescore_weight, config.workers);
  std::vector<ManifestRecord> records;
  records.reserve(scored.size());
  for (const auto &item : scored) records.push_back(ToScoredRecord(item, false));
  WriteManifestRecords(a.out, records);
  out << "scored " << records.size() << " utterances -> " << a.out << '\n';
}

void Filter(const FilterArgs &a, std::ostream &out) {
  NSTConfig config = LoadRunConfig(a.config);
  std::vector<ScoredUtterance> scored;
  for (const auto &r : ReadManifestRecords(a.scored)) scored.push_back(FromScoredRecord(r));
  FilterOutcome outcome;
  if (config.filter_enabled) {
    outcome = ApplyFilter(scored, config.filter, a.iteration);
  } else {
    outcome.accepted = std::move(scored);
    outcome.threshold_used = std::numeric_limits<double>::infinity();
  }
  WriteFilterOutcome(a.out_accepted, a.out_rejected, outcome);
  out << "accepted " << outcome.accepted.size() << ", rejected " << outcome.rejected.size() << '\n';
}

void Simulate(const SimulateArgs &a, std::ostream &out) {
  NSTConfig config = LoadRunConfig(a.config);
  if (a.workers >= 0) config.workers = a.workers;
  RunResult run = Run(config, a.out_dir);
  out << FormatReportTable(run.reports);
}

void Report(const std::string &run_dir, std::ostream &out) {
  out << FormatReportTable(ReadReportFile((fs::path(run_dir) / "report.csv").string()));
}

void GenCorpus(const std::string &spec, const std::string &out_dir, std::ostream &out) {
  GeneratedCorpus corpus = GenerateCorpus(LoadCorpusSpec(spec));
  WriteCorpus(corpus, out_dir);
  out << "supervised " << corpus.supervised.size() << ", unsupervised " << corpus.unsupervised.size() << ", eval "
      << corpus.eval.size() << ", lm sentences " << corpus.lm_text.size() << '\n';
}

void Merge(const MergeArgs &a, std::ostream &out) {
  std::vector<ManifestRecord> merged = MergeFilteredManifests(a.inputs);
  WriteManifestRecords(a.out, merged);
  double seconds = 0.0;
  for (const auto &r : merged) seconds += r.duration_sec;
  char hours[32];
  std::snprintf(hours, sizeof(hours), "%.1f", seconds / 3600.0);
  out << "merged " << merged.size() << " utterances (" << hours << " h)\n";
}

}  // namespace

int CliMain(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Pseudo-label filtering for noisy student training of speech recognizers", "pseudofilter"};
  app.require_subcommand(1);

  TrainLmArgs train;
  auto *train_cmd = app.add_subcommand("train-lm", "Train a character n-gram LM and write it as ARPA");
  train_cmd->add_option("corpus", train.corpora, "Text corpora, one sentence per line; path*N repeats a corpus")
      ->required();
  train_cmd->add_option("--order", train.order, "N-gram order")->check(CLI::Range(1, 20));
  train_cmd->add_option("--discount", train.discount, "Absolute discount")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--out", train.out, "Output ARPA file")->required();

  ScoreArgs score;
  auto *score_cmd = app.add_subcommand("score", "Recognize a manifest and compute CER-Hypo per utterance");
  score_cmd->add_option("--manifest", score.manifest, "Unsupervised manifest")->required();
  score_cmd->add_option("--lm", score.lm, "ARPA language model")->required();
  score_cmd->add_option("--config", score.config, "Run config")->required();
  score_cmd->add_option("--out", score.out, "Scored manifest")->required();
  score_cmd->add_option("--workers", score.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  FilterArgs filter;
  auto *filter_cmd = app.add_subcommand("filter", "Split a scored manifest into accepted and rejected sets");
  filter_cmd->add_option("--scored", filter.scored, "Scored manifest")->required();
  filter_cmd->add_option("--iteration", filter.iteration, "Iteration index")->check(CLI::NonNegativeNumber);
  filter_cmd->add_option("--config", filter.config, "Run config")->required();
  filter_cmd->add_option("--out-accepted", filter.out_accepted, "Accepted manifest")->required();
  filter_cmd->add_option("--out-rejected", filter.out_rejected, "Rejected manifest")->required();

  SimulateArgs sim;
  auto *sim_cmd = app.add_subcommand("simulate-nst", "Run the full noisy student loop");
  sim_cmd->add_option("--config", sim.config, "Run config")->required();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  sim_cmd->add_option("--workers", sim.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  std::string run_dir;
  auto *report_cmd = app.add_subcommand("report", "Print the per-iteration table of a run");
  report_cmd->add_option("--run-dir", run_dir, "Directory written by simulate-nst")->required();

  std::string spec, corpus_dir;
  auto *gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic corpus");
  gen_cmd->add_option("--spec", spec, "Corpus spec")->required();
  gen_cmd->add_option("--out-dir", corpus_dir, "Output directory")->required();

  MergeArgs merge;
  auto *merge_cmd = app.add_subcommand("merge", "Union accepted manifests by utt_id");
  merge_cmd->add_option("manifests", merge.inputs, "Accepted manifests")->required();
  merge_cmd->add_option("--out", merge.out, "Merged manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) TrainLm(train, out);
    else if (*score_cmd) Score(score, out);
    else if (*filter_cmd) Filter(filter, out);
    else if (*sim_cmd) Simulate(sim, out);
    else if (*report_cmd) Report(run_dir, out);
    else if (*gen_cmd) GenCorpus(spec, corpus_dir, out);
    else if (*merge_cmd) Merge(merge, out);
  } catch (const std::exception &e) {
    err << "pseudofilter: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace pseudofilter
