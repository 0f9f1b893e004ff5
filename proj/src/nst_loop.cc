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

#include "pseudofilter/nst_loop.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

#include "pseudofilter/error.h"
#include "pseudofilter/parallel.h"

namespace pseudofilter {

void NSTConfig::Validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  filter.Validate();
  if (lm_order < 1) throw ConfigError("lm_order must be >= 1");
  if (!(lm_discount > 0.0 && lm_discount < 1.0)) throw ConfigError("lm_discount must lie in (0, 1)");
  if (!(hour_scale >= 0.0)) throw ConfigError("hour_scale must be >= 0 (0 = unsupervised hours)");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  SyntheticRecognizerModel probe = recognizer;
  probe.learning.hour_scale = 1.0;
  probe.Validate();
  if (!corpus) {
    if (unsupervised_manifest.empty()) throw ConfigError("unsupervised_manifest (or corpus_spec) is required");
    if (eval_manifest.empty()) throw ConfigError("eval_manifest (or corpus_spec) is required");
  }
}

LmCorpusSource ParseLmCorpusSource(const std::string &item, const std::filesystem::path &base_dir) {
  LmCorpusSource src;
  std::string path = item;
  if (auto star = item.rfind('*'); star != std::string::npos) {
    path = item.substr(0, star);
    KeyValueConfig one;
    one.Set("repeat", item.substr(star + 1));
    long long repeat = one.TakeInt("repeat", 1);
    if (repeat < 1) throw ConfigError("corpus repeat must be >= 1: " + item);
    src.repeat = static_cast<int>(repeat);
  }
  if (path.empty()) throw ConfigError("empty corpus path: " + item);
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  src.path = p.lexically_normal().string();
  return src;
}

NSTConfig RunConfigFromKeyValues(KeyValueConfig &cfg) {
  NSTConfig c;
  c.iterations = static_cast<int>(cfg.TakeInt("iterations", c.iterations));
  c.filter_enabled = cfg.TakeBool("filter_enabled", c.filter_enabled);
  c.filter.initial_threshold = cfg.TakeDouble("initial_threshold", c.filter.initial_threshold);
  c.filter.relaxation = cfg.TakeDouble("relaxation", c.filter.relaxation);
  c.filter.max_threshold = cfg.TakeDouble("max_threshold", c.filter.max_threshold);
  c.filter.rate_low = cfg.TakeDouble("rate_low", c.filter.rate_low);
  c.filter.rate_high = cfg.TakeDouble("rate_high", c.filter.rate_high);
  if (auto v = cfg.Take("empty_policy")) c.filter.empty_policy = ParseEmptyPolicy(*v);
  c.lm_order = static_cast<int>(cfg.TakeInt("lm_order", c.lm_order));
  c.lm_discount = cfg.TakeDouble("lm_discount", c.lm_discount);
  c.rescore_weight = RescoreWeight(cfg.TakeDouble("lm_weight", c.rescore_weight.lambda()));

  SyntheticRecognizerModel &r = c.recognizer;
  r.skill = cfg.TakeDouble("skill", 0.3);
  r.learning.skill_max = cfg.TakeDouble("skill_max", r.learning.skill_max);
  r.learning.gain = cfg.TakeDouble("learning_gain", r.learning.gain);
  r.learning.noise_penalty = cfg.TakeDouble("noise_penalty", 2.0);
  c.hour_scale = cfg.TakeDouble("hour_scale", c.hour_scale);
  r.nbest_size = static_cast<int>(cfg.TakeInt("nbest_size", r.nbest_size));
  r.score_noise = cfg.TakeDouble("score_noise", r.score_noise);
  r.split.substitute = cfg.TakeDouble("p_sub", r.split.substitute);
  r.split.remove = cfg.TakeDouble("p_del", r.split.remove);
  r.split.insert = cfg.TakeDouble("p_ins", r.split.insert);
  r.default_base_rate = cfg.TakeDouble("default_base_rate", r.default_base_rate);
  r.base_rates = {{"news", 0.3}, {"reading", 0.3}, {"drama", 0.8}, {"variety", 0.8}, {kMusicDomain, 1.0}};
  for (const auto &[domain, value] : cfg.TakePrefixed("base_rate.")) {
    KeyValueConfig one;
    one.Set("v", value);
    r.base_rates[domain] = one.TakeDouble("v", 0.0);
  }
  r.rng_seed = static_cast<std::uint64_t>(cfg.TakeInt("seed", 1));
  if (const char *env = std::getenv("PSEUDOFILTER_SEED"); env && *env) {
    char *end = nullptr;
    unsigned long long s = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError(std::string("PSEUDOFILTER_SEED is not an integer: ") + env);
    r.rng_seed = s;
  }
  c.workers = static_cast<int>(cfg.TakeInt("workers", c.workers));

  c.supervised_manifest = cfg.TakePath("supervised_manifest");
  c.unsupervised_manifest = cfg.TakePath("unsupervised_manifest");
  c.eval_manifest = cfg.TakePath("eval_manifest");
  c.lm_arpa = cfg.TakePath("lm_arpa");
  if (auto v = cfg.Take("lm_corpora")) {
    for (const auto &item : SplitList(*v)) c.lm_corpora.push_back(ParseLmCorpusSource(item, cfg.base_dir()));
  }
  if (std::string spec = cfg.TakePath("corpus_spec"); !spec.empty()) c.corpus = LoadCorpusSpec(spec);
  c.Validate();
  return c;
}

NSTConfig LoadRunConfig(const std::string &path) {
  KeyValueConfig cfg = KeyValueConfig::ReadFile(path);
  NSTConfig c = RunConfigFromKeyValues(cfg);
  cfg.CheckAllUsed();
  return c;
}

double TotalHours(std::span<const Utterance> utts) {
  double seconds = 0.0;
  for (const auto &u : utts) seconds += u.duration_sec;
  return seconds / 3600.0;
}

NSTInputs LoadInputs(const NSTConfig &config) {
  NSTInputs in;
  std::vector<LmCorpus> lm_corpora;
  if (config.corpus) {
    in.generated = GenerateCorpus(*config.corpus);
    in.supervised = in.generated->supervised;
    in.unsupervised = in.generated->unsupervised;
    in.eval = in.generated->eval;
    lm_corpora.push_back({in.generated->lm_text, 1});
  } else {
    if (!config.supervised_manifest.empty()) in.supervised = ReadManifest(config.supervised_manifest);
    in.unsupervised = ReadManifest(config.unsupervised_manifest);
    in.eval = ReadManifest(config.eval_manifest);
  }

  if (!config.lm_arpa.empty()) {
    in.lm = NGramModel::ReadArpaFile(config.lm_arpa);
    return in;
  }
  for (const auto &src : config.lm_corpora) lm_corpora.push_back({ReadTextCorpus(src.path), src.repeat});
  LmCorpus supervised_text;
  for (const auto &u : in.supervised) {
    if (u.text && !u.text->empty()) supervised_text.sentences.push_back(*u.text);
  }
  if (!supervised_text.sentences.empty()) lm_corpora.push_back(std::move(supervised_text));

  std::size_t sentences = 0;
  for (const auto &c : lm_corpora) sentences += c.sentences.size();
  if (sentences == 0) throw ConfigError("no language model: set lm_arpa, lm_corpora or a supervised manifest with text");
  NGramModel trained = NGramModel::Train(lm_corpora, config.lm_order, config.lm_discount);
  std::stringstream arpa;
  trained.WriteArpa(arpa);
  in.lm = NGramModel::ReadArpa(arpa);
  return in;
}

SyntheticRecognizerModel InitialTeacher(const NSTConfig &config, const NSTInputs &inputs) {
  if (!inputs.lm) throw ConfigError("language model missing");
  SyntheticRecognizerModel teacher = config.recognizer;
  teacher.vocabulary.clear();
  for (NGramModel::TokenId id = NGramModel::kUnkId + 1; id < inputs.lm->vocab_size(); ++id) {
    teacher.vocabulary.push_back(inputs.lm->token(id));
  }
  double h0 = config.hour_scale > 0.0 ? config.hour_scale : TotalHours(inputs.unsupervised);
  if (!(h0 > 0.0)) throw ConfigError("hour scale is 0: the unsupervised set is empty");
  teacher.learning.hour_scale = h0;
  double floor = std::min(teacher.learning.skill_max, TotalHours(inputs.supervised) / h0);
  teacher.skill = std::max(teacher.skill, floor);
  teacher.Validate();
  return teacher;
}

std::vector<ScoredUtterance> ScoreAll(const SyntheticRecognizerModel &teacher, std::span<const Utterance> utts,
                                      const NGramModel &lm, RescoreWeight weight, int workers) {
  SyntheticRecognizer recognizer(teacher);
  std::vector<ScoredUtterance> scored(utts.size());
  ParallelFor(utts.size(), workers, [&](std::size_t i) {
    scored[i] = ScoreUtterance(utts[i], recognizer.Recognize(utts[i]), lm, weight);
  });
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredUtterance &a, const ScoredUtterance &b) { return a.utt.utt_id < b.utt.utt_id; });
  return scored;
}

double Evaluate(const SyntheticRecognizerModel &model, std::span<const Utterance> eval_set, int workers) {
  for (const auto &u : eval_set) {
    if (!u.text) throw DataError("eval utterance '" + u.utt_id + "' has no reference");
  }
  SyntheticRecognizer recognizer(model);
  std::vector<AlignmentStats> stats(eval_set.size());
  ParallelFor(eval_set.size(), workers, [&](std::size_t i) {
    NBestList nbest = recognizer.Recognize(eval_set[i]);
    stats[i] = EditDistance(*eval_set[i].text, GreedyHypothesis(nbest).text);
  });
  AlignmentStats total;
  for (const auto &s : stats) total += s;
  return CorpusCer(total);
}

IterationResult RunIteration(const SyntheticRecognizerModel &teacher, int iteration, const NSTConfig &config,
                             const NSTInputs &inputs) {
  if (iteration < 0) throw DataError("iteration must be >= 0");
  if (!inputs.lm) throw ConfigError("language model missing");
  std::vector<ScoredUtterance> scored =
      ScoreAll(teacher, inputs.unsupervised, *inputs.lm, config.rescore_weight, config.workers);

  IterationResult result;
  if (config.filter_enabled) {
    result.outcome = ApplyFilter(scored, config.filter, iteration);
  } else {
    result.outcome.accepted = std::move(scored);
    result.outcome.threshold_used = std::numeric_limits<double>::infinity();
  }
  for (auto &item : result.outcome.accepted) item.utt.augmented = true;

  FilterStats stats = ComputeFilterStats(result.outcome, true);
  result.student = ImproveSkill(teacher, stats.filtered_hours, 1.0 - stats.filtered_cer, iteration);

  IterationReport &report = result.report;
  report.iteration = iteration;
  report.eval_cer = Evaluate(result.student, inputs.eval, config.workers);
  report.pseudo_cer = stats.pseudo_cer;
  report.filtered_cer = stats.filtered_cer;
  report.filtered_hours = stats.filtered_hours;
  report.accepted_count = result.outcome.accepted.size();
  report.threshold_used = result.outcome.threshold_used;
  report.skill_after = result.student.skill;
  return result;
}

std::string IterationDir(const std::string &out_dir, int iteration) {
  char name[32];
  std::snprintf(name, sizeof(name), "iter_%02d", iteration);
  return (std::filesystem::path(out_dir) / name).string();
}

RunResult Run(const NSTConfig &config, const std::string &out_dir) {
  config.Validate();
  return Run(config, LoadInputs(config), out_dir);
}

RunResult Run(const NSTConfig &config, const NSTInputs &inputs, const std::string &out_dir) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    if (inputs.generated) WriteCorpus(*inputs.generated, (fs::path(out_dir) / "corpus").string());
    if (config.lm_arpa.empty() && inputs.lm) inputs.lm->WriteArpaFile((fs::path(out_dir) / "lm.arpa").string());
  }

  RunResult run;
  SyntheticRecognizerModel teacher = InitialTeacher(config, inputs);
  std::string report_path = out_dir.empty() ? "" : (fs::path(out_dir) / "report.csv").string();
  if (!report_path.empty()) WriteReportFile(report_path, run.reports);

  for (int it = 0; it < config.iterations; ++it) {
    IterationResult result = RunIteration(teacher, it, config, inputs);
    run.teachers.push_back(teacher);
    run.reports.push_back(result.report);
    if (!out_dir.empty()) {
      std::string dir = IterationDir(out_dir, it);
      fs::create_directories(dir);
      WriteFilterOutcome((fs::path(dir) / "accepted.jsonl").string(), (fs::path(dir) / "rejected.jsonl").string(),
                         result.outcome);
      WriteReportFile(report_path, run.reports);
    }
    teacher = std::move(result.student);
  }
  run.final_student = teacher;
  return run;
}

std::vector<ManifestRecord> MergeFilteredManifests(std::span<const std::string> paths) {
  std::map<std::string, ManifestRecord> merged;
  auto key = [](const ManifestRecord &r) { return r.cer_hypo.value_or(std::numeric_limits<double>::infinity()); };
  for (const auto &path : paths) {
    for (auto &r : ReadManifestRecords(path)) {
      auto it = merged.find(r.utt_id);
      if (it == merged.end()) {
        merged.emplace(r.utt_id, std::move(r));
      } else if (key(r) < key(it->second)) {
        it->second = std::move(r);
      }
    }
  }
  std::vector<ManifestRecord> out;
  out.reserve(merged.size());
  for (auto &[id, r] : merged) out.push_back(std::move(r));
  return out;
}

}  // namespace pseudofilter
