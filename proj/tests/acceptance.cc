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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pseudofilter/cli.h"
#include "pseudofilter/nst_loop.h"
#include "test_util.h"

namespace pf = pseudofilter;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string Config(const std::string &name) { return std::string(PSEUDOFILTER_SOURCE_DIR) + "/configs/" + name; }

int failures = 0;

void Report(int id, const char *title, bool pass, const std::string &detail) {
  std::printf("[%s] C%-2d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Format(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

bool IsInDomain(const std::string &domain) { return domain == "news" || domain == "reading"; }

int OracleDistance(const std::string &a, const std::string &b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  std::function<int(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = rec(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min({best, rec(i + 1, j) + 1, rec(i, j + 1) + 1});
    return memo[key] = best;
  };
  return rec(0, 0);
}

void EditDistanceOracle() {
  auto start = Clock::now();
  auto strings = pf::testing::AllStrings("ABC", 6);
  std::mt19937 gen(20221108);
  std::uniform_int_distribution<std::size_t> pick(0, strings.size() - 1);
  int mismatches = 0, pairs = 5000;
  for (int n = 0; n < pairs; ++n) {
    const auto &r = strings[pick(gen)];
    const auto &h = strings[pick(gen)];
    auto got = pf::EditDistance(pf::testing::Chars(r), pf::testing::Chars(h)).Errors();
    mismatches += static_cast<int>(got) != OracleDistance(r, h);
  }
  double t = Seconds(start);
  Report(1, "edit-distance oracle equivalence", mismatches == 0 && t < 5.0,
         Format("%d pairs, %d mismatches, %.2f s (limit 5 s)", pairs, mismatches, t));
}

void SixTokenFixture() {
  pf::CharSeq with_lm = pf::Tokenize("今天天气很好");
  pf::CharSeq greedy = pf::Tokenize("今天天器很好");
  double cer = pf::Cer(pf::EditDistance(with_lm, greedy));
  std::string shown = Format("%.2f", 100 * cer);
  Report(2, "one substitution in six tokens", shown == "16.67" && std::abs(cer - 1.0 / 6.0) < 1e-9,
         Format("CER-Hypo %s%% (|x - 1/6| = %.1e)", shown.c_str(), std::abs(cer - 1.0 / 6.0)));
}

struct Iteration0 {
  std::vector<pf::ScoredUtterance> scored;
  double skill = 0.0;
  double seconds = 0.0;
};

Iteration0 ScoreDefaultIteration0(const pf::NSTConfig &config) {
  auto start = Clock::now();
  pf::NSTInputs inputs = pf::LoadInputs(config);
  pf::SyntheticRecognizerModel teacher = pf::InitialTeacher(config, inputs);
  Iteration0 out;
  out.scored = pf::ScoreAll(teacher, inputs.unsupervised, *inputs.lm, config.rescore_weight, config.workers);
  out.skill = teacher.skill;
  out.seconds = Seconds(start);
  return out;
}

void Correlation(const Iteration0 &it0) {
  std::vector<double> hypo, label;
  for (const auto &s : it0.scored) {
    if (!s.cer_label) continue;
    hypo.push_back(s.cer_hypo);
    label.push_back(*s.cer_label);
  }
  double rho = pf::SpearmanCorrelation(hypo, label);
  bool ok = rho >= 0.5 && it0.scored.size() >= 1000 && std::abs(it0.skill - 0.3) < 1e-12 && it0.seconds < 30.0;
  Report(3, "CER-Hypo vs CER-Label rank correlation", ok,
         Format("Spearman %.3f over %zu utterances at skill %.2f, %.2f s (need >= 0.5, < 30 s)", rho, hypo.size(),
                it0.skill, it0.seconds));
}

void DomainEffect(const Iteration0 &it0) {
  double in_sum = 0, out_sum = 0;
  std::size_t in_n = 0, out_n = 0;
  for (const auto &s : it0.scored) {
    if (IsInDomain(s.utt.domain)) {
      in_sum += s.cer_hypo;
      ++in_n;
    } else {
      out_sum += s.cer_hypo;
      ++out_n;
    }
  }
  double in_mean = in_sum / std::max<std::size_t>(1, in_n), out_mean = out_sum / std::max<std::size_t>(1, out_n);
  Report(7, "in-domain CER-Hypo below out-of-domain", in_n > 0 && out_n > 0 && in_mean < out_mean,
         Format("mean CER-Hypo in-domain %.4f (%zu) vs out-of-domain %.4f (%zu)", in_mean, in_n, out_mean, out_n));
}

void DefaultRunCriteria(const pf::NSTConfig &config) {
  pf::RunResult run = pf::Run(config);
  const auto &r = run.reports;
  const auto &first = r.front();
  double relative = 1.0 - first.filtered_cer / first.pseudo_cer;
  Report(4, "iteration-0 selection effect", relative >= 0.20,
         Format("pseudo %.2f%% -> filtered %.2f%% (%.1f%% relative, need >= 20%%)", 100 * first.pseudo_cer,
                100 * first.filtered_cer, 100 * relative));

  bool thresholds_ok = true;
  for (std::size_t i = 1; i < r.size(); ++i) thresholds_ok &= r[i].threshold_used >= r[i - 1].threshold_used;
  double growth = r.back().filtered_hours / first.filtered_hours - 1.0;
  Report(5, "filtered hours grow under relaxation", r.size() == 8 && growth >= 0.5 && thresholds_ok,
         Format("iteration 0 %.3f h -> iteration %d %.3f h (+%.1f%%, need >= 50%%), thresholds %s", first.filtered_hours,
                r.back().iteration, r.back().filtered_hours, 100 * growth,
                thresholds_ok ? "non-decreasing" : "DECREASE"));
}

void FilterBeatsNoFilter() {
  pf::NSTConfig config = pf::LoadRunConfig(Config("ood_heavy.conf"));
  pf::NSTInputs inputs = pf::LoadInputs(config);
  double ood = 0, total = 0;
  for (const auto &u : inputs.unsupervised) {
    total += u.duration_sec;
    if (!IsInDomain(u.domain)) ood += u.duration_sec;
  }
  pf::RunResult with = pf::Run(config, inputs);
  config.filter_enabled = false;
  pf::RunResult without = pf::Run(config, inputs);
  double a = with.reports.back().eval_cer, b = without.reports.back().eval_cer;
  Report(6, "filter beats no filter on out-of-domain-heavy data", ood / total >= 0.5 && a < b,
         Format("final eval CER %.2f%% with filter vs %.2f%% without; high-error share %.0f%% of hours", 100 * a,
                100 * b, 100 * ood / total));
}

void MusicRemoval() {
  pf::NSTConfig config = pf::LoadRunConfig(Config("default.conf"));
  config.corpus->music_fraction = 0.2;
  pf::NSTInputs inputs = pf::LoadInputs(config);
  pf::IterationResult it = pf::RunIteration(pf::InitialTeacher(config, inputs), 0, config, inputs);
  std::size_t music = 0, removed = 0;
  for (const auto &u : inputs.unsupervised) music += u.domain == pf::kMusicDomain;
  for (const auto &rej : it.outcome.rejected) {
    removed += rej.item.utt.domain == pf::kMusicDomain && rej.reason == pf::RejectionReason::kRateOutOfRange;
  }
  double share = music ? static_cast<double>(removed) / static_cast<double>(music) : 0.0;
  Report(8, "speaking-rate filter removes music", music > 0 && share >= 0.95,
         Format("%zu of %zu music items (%.1f%% of the corpus) rejected as rate_out_of_range (%.1f%%, need >= 95%%)",
                removed, music, 100.0 * music / inputs.unsupervised.size(), 100 * share));
}

void LmNormalization() {
  std::mt19937 gen(9);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> sym(0, 9);
  std::vector<pf::CharSeq> corpus;
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (int n = len(gen); n > 0; --n) s += static_cast<char>('0' + sym(gen));
    corpus.push_back(pf::testing::Chars(s));
  }
  pf::NGramModel lm = pf::NGramModel::Train(corpus, 5);
  double worst = 0.0;
  std::size_t contexts = 0;
  for (const auto &ctx : lm.Contexts()) {
    double mass = 0.0;
    for (auto next : lm.PredictableIds()) mass += std::exp(lm.LogProb(ctx, next));
    worst = std::max(worst, std::abs(mass - 1.0));
    ++contexts;
  }
  Report(9, "LM conditional distributions sum to 1", worst <= 1e-6,
         Format("%zu contexts over a 10-symbol vocabulary, max |sum - 1| = %.2e", contexts, worst));
}

int Cli(const std::vector<std::string> &args) {
  std::vector<const char *> argv{"pseudofilter"};
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = pf::CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

std::map<std::string, std::string> Snapshot(const std::filesystem::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[std::filesystem::relative(e.path(), dir).string()] = pf::testing::ReadAll(e.path());
  }
  return files;
}

void DeterminismAndBudget() {
  pf::testing::TempDir dir("acceptance");
  auto start = Clock::now();
  int code = Cli({"simulate-nst", "--config", Config("default.conf"), "--out-dir", dir.File("a"), "--workers", "1"});
  double seconds = Seconds(start);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;

  int code_b = Cli({"simulate-nst", "--config", Config("default.conf"), "--out-dir", dir.File("b"), "--workers", "4"});
  int code_c = Cli({"simulate-nst", "--config", Config("default.conf"), "--out-dir", dir.File("c"), "--workers", "1"});
  bool ran = code == 0 && code_b == 0 && code_c == 0;
  auto a = ran ? Snapshot(dir.File("a")) : decltype(Snapshot(dir.path())){};
  bool same = ran && a == Snapshot(dir.File("b")) && a == Snapshot(dir.File("c"));
  std::size_t manifests = 0;
  for (const auto &[name, _] : a) manifests += name.ends_with(".jsonl");
  Report(10, "byte-identical reruns across worker counts", same && a.count("report.csv") == 1,
         Format("%zu files (%zu manifests) compared over 3 runs (workers 1, 4, 1): %s", a.size(), manifests,
                same ? "identical" : "DIFFERENT"));
  auto rows = ran ? pf::ReadReportFile(dir.File("a/report.csv")) : std::vector<pf::IterationReport>{};
  Report(11, "default simulation time and memory", ran && rows.size() == 8 && seconds < 60.0 && peak_mb < 500.0,
         Format("%.2f s (limit 60 s), process peak RSS %.1f MB (limit 500 MB), %zu report rows", seconds, peak_mb,
                rows.size()));
}

}  // namespace

int main() {
  auto start = Clock::now();
  auto guard = [](int id, const char *title, auto fn) {
    try {
      fn();
    } catch (const std::exception &e) {
      Report(id, title, false, std::string("exception: ") + e.what());
    }
  };
  guard(1, "edit-distance oracle equivalence", EditDistanceOracle);
  guard(2, "one substitution in six tokens", SixTokenFixture);
  guard(3, "default corpus checks", [] {
    pf::NSTConfig config = pf::LoadRunConfig(Config("default.conf"));
    Iteration0 it0 = ScoreDefaultIteration0(config);
    Correlation(it0);
    DefaultRunCriteria(config);
    FilterBeatsNoFilter();
    DomainEffect(it0);
  });
  guard(8, "speaking-rate filter removes music", MusicRemoval);
  guard(9, "LM conditional distributions sum to 1", LmNormalization);
  guard(10, "reruns and budget", DeterminismAndBudget);
  std::printf("%d criteria failed, %.1f s total\n", failures, Seconds(start));
  return failures == 0 ? 0 : 1;
}
