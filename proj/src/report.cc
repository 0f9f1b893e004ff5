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

#include "pseudofilter/report.h"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pseudofilter/error.h"

namespace pseudofilter {

namespace {

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::string FormatReportRow(const IterationReport &r) {
  std::string row;
  row += std::to_string(r.iteration);
  row += ',' + Fixed(100.0 * r.eval_cer, 2);
  row += ',' + Fixed(100.0 * r.pseudo_cer, 2);
  row += ',' + Fixed(100.0 * r.filtered_cer, 2);
  row += ',' + Fixed(r.filtered_hours, 1);
  row += ',' + std::to_string(r.accepted_count);
  row += ',' + Fixed(100.0 * r.threshold_used, 2);
  row += ',' + Fixed(r.skill_after, 4);
  return row;
}

void WriteReport(std::ostream &out, std::span<const IterationReport> reports) {
  out << kReportHeader << '\n';
  for (const auto &r : reports) out << FormatReportRow(r) << '\n';
}

void WriteReportFile(const std::string &path, std::span<const IterationReport> reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  WriteReport(out, reports);
  if (!out) throw IoError("write failed: " + path);
}

std::vector<IterationReport> ReadReportFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw DataError(path + ": line 1: unexpected report header");
  }
  std::vector<IterationReport> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    IterationReport r;
    int iteration = 0;
    unsigned long long accepted = 0;
    double eval = 0, pseudo = 0, filtered = 0, hours = 0, threshold = 0, skill = 0;
    char tail = 0;
    int n = std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%llu,%lf,%lf%c", &iteration, &eval, &pseudo, &filtered,
                        &hours, &accepted, &threshold, &skill, &tail);
    if (n != 8) throw DataError(path + ": line " + std::to_string(line_no) + ": malformed report row");
    r.iteration = iteration;
    r.eval_cer = eval / 100.0;
    r.pseudo_cer = pseudo / 100.0;
    r.filtered_cer = filtered / 100.0;
    r.filtered_hours = hours;
    r.accepted_count = static_cast<std::size_t>(accepted);
    r.threshold_used = threshold / 100.0;
    r.skill_after = skill;
    out.push_back(r);
  }
  return out;
}

std::string FormatReportTable(std::span<const IterationReport> reports) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-6s %10s %11s %13s %15s %9s %10s %7s\n", "iter", "test CER", "Pseudo CER",
                "Filtered CER", "Filtered hours", "accepted", "threshold", "skill");
  out << buf;
  for (const auto &r : reports) {
    std::snprintf(buf, sizeof(buf), "%-6d %10.2f %11.2f %13.2f %15.1f %9zu %10.2f %7.4f\n", r.iteration,
                  100.0 * r.eval_cer, 100.0 * r.pseudo_cer, 100.0 * r.filtered_cer, r.filtered_hours,
                  r.accepted_count, 100.0 * r.threshold_used, r.skill_after);
    out << buf;
  }
  return out.str();
}

}  // namespace pseudofilter
