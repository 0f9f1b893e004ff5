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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pseudofilter {

struct IterationReport {
  int iteration = 0;
  double eval_cer = 0.0;
  double pseudo_cer = 0.0;
  double filtered_cer = 0.0;
  double filtered_hours = 0.0;
  std::size_t accepted_count = 0;
  double threshold_used = 0.0;
  double skill_after = 0.0;

  friend bool operator==(const IterationReport &, const IterationReport &) = default;
};

inline constexpr const char *kReportHeader =
    "iteration,eval_cer,pseudo_cer,filtered_cer,filtered_hours,accepted_count,threshold_used,skill_after";

// CER columns and the threshold are written as percentages with two
// decimals, hours with one decimal and skill with four.
std::string FormatReportRow(const IterationReport &report);
void WriteReport(std::ostream &out, std::span<const IterationReport> reports);
void WriteReportFile(const std::string &path, std::span<const IterationReport> reports);

// Parses a report CSV back into ratios and hours.
std::vector<IterationReport> ReadReportFile(const std::string &path);

// Fixed-width table in the layout of the usual NST results table.
std::string FormatReportTable(std::span<const IterationReport> reports);

}  // namespace pseudofilter
