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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pseudofilter/cli.h"
#include "pseudofilter/error.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/nst_loop.h"
#include "pseudofilter/selection.h"
#include "pseudofilter/text_metrics.h"

namespace py = pybind11;
using namespace pybind11::literals;

namespace pseudofilter {
namespace {

std::vector<std::string> TokenizeStrings(const std::string &text) { return Tokenize(text).tokens(); }

CharSeq ToSeq(const std::vector<std::string> &tokens) { return CharSeq(tokens); }

NBestList ToNBest(const std::vector<std::pair<std::string, double>> &entries) {
  NBestList nb;
  nb.utt_id = "python";
  for (const auto &[text, score] : entries) nb.entries.push_back({Tokenize(text), score});
  return nb;
}

py::dict ReportDict(const IterationReport &r) {
  return py::dict("iteration"_a = r.iteration, "eval_cer"_a = r.eval_cer, "pseudo_cer"_a = r.pseudo_cer,
                  "filtered_cer"_a = r.filtered_cer, "filtered_hours"_a = r.filtered_hours,
                  "accepted_count"_a = r.accepted_count, "threshold_used"_a = r.threshold_used,
                  "skill_after"_a = r.skill_after);
}

}  // namespace
}  // namespace pseudofilter

PYBIND11_MODULE(_core, m) {
  using namespace pseudofilter;
  m.doc() = "Pseudo-label filtering for noisy student training (C++ core)";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("tokenize", &TokenizeStrings, "text"_a, "NFC-normalize, drop whitespace and split into characters.");

  py::class_<AlignmentStats>(m, "AlignmentStats")
      .def_readonly("substitutions", &AlignmentStats::substitutions)
      .def_readonly("deletions", &AlignmentStats::deletions)
      .def_readonly("insertions", &AlignmentStats::insertions)
      .def_readonly("ref_len", &AlignmentStats::ref_len)
      .def_property_readonly("errors", &AlignmentStats::Errors)
      .def("__repr__", [](const AlignmentStats &s) {
        std::ostringstream os;
        os << "AlignmentStats(S=" << s.substitutions << ", D=" << s.deletions << ", I=" << s.insertions
           << ", ref_len=" << s.ref_len << ")";
        return os.str();
      });

  m.def(
      "edit_distance",
      [](const std::string &ref, const std::string &hyp) { return EditDistance(Tokenize(ref), Tokenize(hyp)); },
      "reference"_a, "hypothesis"_a);
  m.def(
      "cer", [](const std::string &ref, const std::string &hyp) { return Cer(EditDistance(Tokenize(ref), Tokenize(hyp))); },
      "reference"_a, "hypothesis"_a, "(S + D + I) / reference length.");

  py::class_<NGramModel>(m, "NGramModel")
      .def_static(
          "train",
          [](const std::vector<std::string> &sentences, int order, double discount) {
            std::vector<CharSeq> corpus;
            for (const auto &s : sentences) corpus.push_back(Tokenize(s));
            return NGramModel::Train(corpus, order, discount);
          },
          "sentences"_a, "order"_a = 5, "discount"_a = 0.4)
      .def_static("read_arpa", &NGramModel::ReadArpaFile, "path"_a)
      .def("write_arpa", &NGramModel::WriteArpaFile, "path"_a)
      .def_property_readonly("order", &NGramModel::order)
      .def_property_readonly("vocab_size", &NGramModel::vocab_size)
      .def(
          "sequence_logprob", [](const NGramModel &lm, const std::string &text) { return SequenceLogProb(lm, Tokenize(text)); },
          "text"_a)
      .def(
          "perplexity",
          [](const NGramModel &lm, const std::vector<std::string> &sentences) {
            std::vector<CharSeq> corpus;
            for (const auto &s : sentences) corpus.push_back(Tokenize(s));
            return Perplexity(lm, corpus);
          },
          "sentences"_a);

  m.def(
      "rescore_nbest",
      [](const NGramModel &lm, const std::vector<std::pair<std::string, double>> &entries, double lambda) {
        NBestList out = RescoreNBest(lm, ToNBest(entries), RescoreWeight(lambda));
        std::vector<std::string> texts;
        for (const auto &h : out.entries) texts.push_back(h.text.Join());
        return texts;
      },
      "lm"_a, "entries"_a, "lm_weight"_a = 0.5,
      "Re-rank (text, acoustic score) pairs, given in descending acoustic order.");

  m.def("speaking_rate", &SpeakingRate, "hyp_len"_a, "duration_sec"_a);

  py::class_<FilterConfig>(m, "FilterConfig")
      .def(py::init<>())
      .def_readwrite("initial_threshold", &FilterConfig::initial_threshold)
      .def_readwrite("relaxation", &FilterConfig::relaxation)
      .def_readwrite("max_threshold", &FilterConfig::max_threshold)
      .def_readwrite("rate_low", &FilterConfig::rate_low)
      .def_readwrite("rate_high", &FilterConfig::rate_high);
  m.def("threshold_for_iteration", &ThresholdForIteration, "config"_a, "iteration"_a);

  m.def(
      "simulate",
      [](const std::string &config_path, const std::string &out_dir, int workers) {
        NSTConfig config = LoadRunConfig(config_path);
        if (workers >= 0) config.workers = workers;
        RunResult run;
        {
          py::gil_scoped_release release;
          run = Run(config, out_dir);
        }
        py::list reports;
        for (const auto &r : run.reports) reports.append(ReportDict(r));
        return reports;
      },
      "config"_a, "out_dir"_a = "", "workers"_a = -1, "Run the noisy student loop; returns one dict per iteration.");

  m.def(
      "cli_main",
      [](const std::vector<std::string> &args) {
        std::vector<const char *> argv{"pseudofilter"};
        for (const auto &a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a, "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
