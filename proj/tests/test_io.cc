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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pseudofilter/config.h"
#include "pseudofilter/corpus_gen.h"
#include "pseudofilter/error.h"
#include "pseudofilter/manifest.h"
#include "pseudofilter/ngram_lm.h"
#include "pseudofilter/report.h"
#include "pseudofilter/selection.h"
#include "test_util.h"

namespace pseudofilter {
namespace {

using testing::ReadAll;
using testing::TempDir;
using testing::WriteAll;

TEST(Manifest, EmptyFileIsEmptyList) {
  TempDir dir("manifest");
  WriteAll(dir.File("m.jsonl"), "");
  EXPECT_TRUE(ReadManifest(dir.File("m.jsonl")).empty());
}

TEST(Manifest, ReadsInFileOrderWithDefaults) {
  TempDir dir("manifest");
  WriteAll(dir.File("m.jsonl"),
           "{\"utt_id\":\"b\",\"duration_sec\":2.5,\"text\":\"你 好\",\"domain\":\"news\"}\n"
           "\n"
           "{\"utt_id\":\"a\",\"duration_sec\":1}\n"
           "{\"utt_id\":\"c\",\"duration_sec\":3.25,\"text\":\"\",\"augmented\":true}\n");
  auto utts = ReadManifest(dir.File("m.jsonl"));
  ASSERT_EQ(utts.size(), 3u);
  EXPECT_EQ(utts[0].utt_id, "b");
  EXPECT_EQ(utts[0].text->size(), 2u);
  EXPECT_EQ(utts[0].domain, "news");
  EXPECT_FALSE(utts[1].text.has_value());
  EXPECT_EQ(utts[1].domain, "unknown");
  EXPECT_TRUE(utts[2].augmented);
  EXPECT_TRUE(utts[2].text->empty());
}

void ExpectReadError(const std::string &content, const std::string &needle) {
  TempDir dir("manifest");
  WriteAll(dir.File("m.jsonl"), content);
  try {
    ReadManifest(dir.File("m.jsonl"));
    ADD_FAILURE() << "no error for: " << content;
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(Manifest, ErrorsNameTheLine) {
  ExpectReadError("{\"utt_id\":\"a\",\"duration_sec\":1}\n{\"utt_id\":\"b\",\"duration_sec\":0}\n", "line 2");
  ExpectReadError("{\"utt_id\":\"a\",\"duration_sec\":1}\n{not json\n", "line 2");
  ExpectReadError("{\"duration_sec\":1}\n", "utt_id");
  ExpectReadError("{\"utt_id\":\"a\"}\n", "duration_sec");
  ExpectReadError("{\"utt_id\":\"a\",\"duration_sec\":\"long\"}\n", "line 1");
  ExpectReadError("[1,2]\n", "line 1");
  ExpectReadError("{\"utt_id\":\"a\",\"duration_sec\":1,\"text\":\"\xFF\"}\n", "");
}

TEST(Manifest, DuplicateIdNamesBothLines) {
  ExpectReadError(
      "{\"utt_id\":\"a\",\"duration_sec\":1}\n{\"utt_id\":\"b\",\"duration_sec\":1}\n"
      "{\"utt_id\":\"a\",\"duration_sec\":2}\n",
      "line 3: duplicate utt_id 'a' (first seen on line 1)");
}

TEST(Manifest, MissingFileIsIoError) { EXPECT_THROW(ReadManifest("/nonexistent/m.jsonl"), IoError); }

TEST(Manifest, WriteReadWriteIsByteIdentical) {
  TempDir dir("manifest");
  std::vector<ManifestRecord> records(3);
  records[0] = {"u1", 1.23, "你好", std::nullopt, "news", false, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  records[1] = {"u2", 0.1 + 0.2, "ab", "ac", "drama", true, 0.5, 1.0 / 3.0, 2.0 / 3.0, std::nullopt};
  records[2] = {"u3", 7.0, std::nullopt, std::nullopt, "music", false, 2.0, std::nullopt, 0.0, "rate_out_of_range"};
  WriteManifestRecords(dir.File("a.jsonl"), records);
  auto back = ReadManifestRecords(dir.File("a.jsonl"));
  EXPECT_EQ(back, records);
  WriteManifestRecords(dir.File("b.jsonl"), back);
  EXPECT_EQ(ReadAll(dir.File("a.jsonl")), ReadAll(dir.File("b.jsonl")));
}

TEST(Manifest, ScoredRecordKeepsFilterInputs) {
  ScoredUtterance s;
  s.utt.utt_id = "x";
  s.utt.duration_sec = 2.0;
  s.utt.domain = "news";
  s.greedy.text = Tokenize("abc");
  s.with_lm.text = Tokenize("abd");
  s.cer_hypo = 1.0 / 3.0;
  s.cer_label = 0.25;
  s.speaking_rate = 1.5;
  ManifestRecord r = ToScoredRecord(s, false);
  EXPECT_EQ(*r.text, "abc");
  EXPECT_EQ(*r.lm_text, "abd");
  ScoredUtterance back = FromScoredRecord(r);
  EXPECT_EQ(back.greedy.text, s.greedy.text);
  EXPECT_EQ(back.with_lm.text, s.with_lm.text);
  EXPECT_EQ(back.cer_hypo, s.cer_hypo);
  EXPECT_EQ(back.speaking_rate, s.speaking_rate);
  EXPECT_EQ(ToScoredRecord(back, false), r);

  r.cer_hypo.reset();
  EXPECT_THROW(FromScoredRecord(r), DataError);
}

TEST(Report, PercentFormatting) {
  IterationReport r{0, 0.0485, 0.4710, 0.2518, 323.0, 1234, 0.10, 0.3};
  EXPECT_EQ(FormatReportRow(r).rfind("0,4.85,47.10,25.18,323.0,", 0), 0u);
  EXPECT_EQ(FormatReportRow(r), "0,4.85,47.10,25.18,323.0,1234,10.00,0.3000");
  r.threshold_used = std::numeric_limits<double>::infinity();
  EXPECT_EQ(FormatReportRow(r), "0,4.85,47.10,25.18,323.0,1234,inf,0.3000");
}

TEST(Report, EmptyListIsHeaderOnly) {
  std::ostringstream out;
  WriteReport(out, {});
  EXPECT_EQ(out.str(), std::string(kReportHeader) + "\n");
}

TEST(Report, RoundTripWithinFormattingPrecision) {
  TempDir dir("report");
  std::vector<IterationReport> reports{{0, 0.0485, 0.4710, 0.2518, 323.04, 10, 0.10, 0.31234},
                                       {1, 0.04412, 0.40, 0.2, 400.0, 12, 0.13, 0.4},
                                       {2, 0.0, 0.3, 0.3, 2.5, 20, std::numeric_limits<double>::infinity(), 0.95}};
  WriteReportFile(dir.File("r.csv"), reports);
  auto back = ReadReportFile(dir.File("r.csv"));
  ASSERT_EQ(back.size(), reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(back[i].iteration, reports[i].iteration);
    EXPECT_NEAR(back[i].eval_cer, reports[i].eval_cer, 0.00005 + 1e-12);
    EXPECT_NEAR(back[i].pseudo_cer, reports[i].pseudo_cer, 0.00005 + 1e-12);
    EXPECT_NEAR(back[i].filtered_cer, reports[i].filtered_cer, 0.00005 + 1e-12);
    EXPECT_NEAR(back[i].filtered_hours, reports[i].filtered_hours, 0.05 + 1e-12);
    EXPECT_EQ(back[i].accepted_count, reports[i].accepted_count);
    EXPECT_NEAR(back[i].skill_after, reports[i].skill_after, 0.00005 + 1e-12);
  }
  EXPECT_TRUE(std::isinf(back[2].threshold_used));
  WriteReportFile(dir.File("r2.csv"), back);
  EXPECT_EQ(ReadAll(dir.File("r.csv")), ReadAll(dir.File("r2.csv")));
}

TEST(Report, UnwritableAndMalformed) {
  EXPECT_THROW(WriteReportFile("/nonexistent/dir/r.csv", {}), IoError);
  TempDir dir("report");
  WriteAll(dir.File("bad.csv"), "iteration,eval_cer\n0,1\n");
  EXPECT_THROW(ReadReportFile(dir.File("bad.csv")), DataError);
}

KeyValueConfig ParseConfig(const std::string &text) {
  std::istringstream in(text);
  return KeyValueConfig::Parse(in, "test.conf");
}

TEST(Config, ParsesValuesAndComments) {
  KeyValueConfig c = ParseConfig("# header\na = 1.5  # trailing\n\nname = news , drama\nflag = true\nn = 7\n");
  EXPECT_DOUBLE_EQ(c.TakeDouble("a", 0), 1.5);
  EXPECT_EQ(SplitList(c.TakeString("name", "")), (std::vector<std::string>{"news", "drama"}));
  EXPECT_TRUE(c.TakeBool("flag", false));
  EXPECT_EQ(c.TakeInt("n", 0), 7);
  EXPECT_EQ(c.TakeInt("absent", 3), 3);
  EXPECT_NO_THROW(c.CheckAllUsed());
}

TEST(Config, StrictKeysAndValues) {
  KeyValueConfig typo = ParseConfig("initial_treshold = 0.1\n");
  try {
    typo.CheckAllUsed();
    ADD_FAILURE();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("initial_treshold"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("test.conf:1"), std::string::npos);
  }
  EXPECT_THROW(ParseConfig("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(ParseConfig("just words\n"), ConfigError);
  KeyValueConfig bad = ParseConfig("x = 1.5.2\ny = maybe\nz = 3x\n");
  EXPECT_THROW(bad.TakeDouble("x", 0), ConfigError);
  EXPECT_THROW(bad.TakeBool("y", false), ConfigError);
  EXPECT_THROW(bad.TakeInt("z", 0), ConfigError);
}

TEST(Config, PathsResolveAgainstConfigDir) {
  TempDir dir("config");
  WriteAll(dir.File("c.conf"), "m = data/x.jsonl\nabs = /tmp/y\n");
  KeyValueConfig c = KeyValueConfig::ReadFile(dir.File("c.conf"));
  EXPECT_EQ(c.TakePath("m"), (dir.path() / "data/x.jsonl").string());
  EXPECT_EQ(c.TakePath("abs"), "/tmp/y");
  EXPECT_EQ(c.TakePath("none"), "");
}

TEST(CorpusGen, DeterministicAndShaped) {
  CorpusSpec spec;
  spec.unsupervised_count = 300;
  GeneratedCorpus a = GenerateCorpus(spec), b = GenerateCorpus(spec);
  ASSERT_EQ(a.unsupervised.size(), 300u);
  for (std::size_t i = 0; i < a.unsupervised.size(); ++i) {
    ASSERT_EQ(a.unsupervised[i].utt_id, b.unsupervised[i].utt_id);
    ASSERT_EQ(a.unsupervised[i].text, b.unsupervised[i].text);
    ASSERT_EQ(a.unsupervised[i].duration_sec, b.unsupervised[i].duration_sec);
  }
  EXPECT_EQ(a.lm_text, b.lm_text);
  for (const auto &u : a.unsupervised) {
    if (u.domain == kMusicDomain) continue;
    double rate = static_cast<double>(u.text->size()) / u.duration_sec;
    ASSERT_GE(rate, 2.0 * 0.99);
    ASSERT_LE(rate, 6.0 * 1.01);
  }
  spec.seed += 1;
  EXPECT_NE(GenerateCorpus(spec).lm_text, a.lm_text);
}

TEST(CorpusGen, MusicShareRemovedByRateFilter) {
  CorpusSpec spec;
  spec.unsupervised_count = 1000;
  spec.music_fraction = 0.5;
  GeneratedCorpus c = GenerateCorpus(spec);
  std::size_t music = 0, removed = 0;
  FilterConfig filter;
  for (const auto &u : c.unsupervised) {
    music += u.domain == kMusicDomain;
    double rate = SpeakingRate(u.text->size(), u.duration_sec);
    removed += rate < filter.rate_low || rate > filter.rate_high;
  }
  EXPECT_NEAR(static_cast<double>(music) / 1000.0, 0.5, 0.05);
  EXPECT_EQ(removed, music);
}

TEST(CorpusGen, InDomainTextIsEasierForTheLm) {
  CorpusSpec spec;
  spec.in_domain_share = 0.7;
  spec.music_fraction = 0.0;
  spec.unsupervised_count = 600;
  spec.lm_sentences = 1500;
  GeneratedCorpus c = GenerateCorpus(spec);
  NGramModel lm = NGramModel::Train(c.lm_text, 3);
  std::vector<CharSeq> in, out;
  for (const auto &u : c.unsupervised) (u.domain == "news" || u.domain == "reading" ? in : out).push_back(*u.text);
  ASSERT_GT(in.size(), out.size());
  EXPECT_LT(Perplexity(lm, in), Perplexity(lm, out));
}

TEST(CorpusGen, RejectsBadSpecs) {
  CorpusSpec spec;
  spec.vocab_size = 1;
  EXPECT_THROW(GenerateCorpus(spec), ConfigError);
  spec = CorpusSpec{};
  spec.eval_count = 0;
  EXPECT_THROW(GenerateCorpus(spec), ConfigError);
}

TEST(CorpusGen, WrittenCorpusReadsBack) {
  TempDir dir("corpus");
  CorpusSpec spec;
  spec.unsupervised_count = 50;
  spec.lm_sentences = 20;
  GeneratedCorpus c = GenerateCorpus(spec);
  WriteCorpus(c, dir.path().string());
  auto unsup = ReadManifest(dir.File("unsupervised.jsonl"));
  ASSERT_EQ(unsup.size(), 50u);
  for (std::size_t i = 0; i < unsup.size(); ++i) {
    EXPECT_EQ(unsup[i].text, c.unsupervised[i].text);
    EXPECT_EQ(unsup[i].duration_sec, c.unsupervised[i].duration_sec);
    EXPECT_EQ(unsup[i].domain, c.unsupervised[i].domain);
  }
  EXPECT_EQ(ReadTextCorpus(dir.File("lm_text.txt")), c.lm_text);
}

}  // namespace
}  // namespace pseudofilter
