// Copyright 2026 The eitk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EITK_REPORT_HPP_
#define EITK_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eitk {

// Knobs shared by every Monte Carlo driver.
struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  int grid_level = 10;
  // 0 means hardware concurrency.
  int workers = 0;
};

// Per-replication rows for plotting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void Clear() {
    header.clear();
    rows.clear();
  }
};

// Outcome of one identity test.
struct ExperimentReport {
  std::string name;
  std::uint64_t params_hash = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  // Ordered so serialization is deterministic.
  std::map<std::string, double> statistics;
  std::map<std::string, std::string> labels;
  std::vector<std::string> notes;
  bool verdict = false;
  Table table;

  void Set(const std::string& key, double v) { statistics[key] = v; }
  double Get(const std::string& key) const;
  bool Has(const std::string& key) const { return statistics.count(key) > 0; }
};

// %.17g, with non-finite values spelled null (JSON) or nan/inf (CSV).
std::string FormatNumber(double v);
// Six significant digits, for statistic names built from knob values.
std::string FormatLabel(double v);

std::string ReportToJson(const ExperimentReport& report);
std::string TableToCsv(const Table& table);
// Parses the JSON produced by ReportToJson (table omitted). Throws
// InvalidArgument on malformed input.
ExperimentReport ReportFromJson(const std::string& text);

struct AggregateRow {
  std::string file;
  std::string name;
  bool verdict = false;
  std::string key;
  double value = 0.0;
};

struct Aggregate {
  std::vector<AggregateRow> rows;
  std::vector<std::string> warnings;
  bool all_pass() const;
  std::string ToCsv() const;
};

// Scans `dir` recursively for report.json files; malformed ones are skipped
// with a warning. Rows are sorted by path.
Aggregate AggregateReports(const std::string& dir);

// Runs fn(r) for r in [0, n) on `workers` threads. Callers store results by
// index, so the outcome never depends on scheduling.
template <class F>
void ParallelFor(std::size_t n, int workers, F&& fn);

int ResolveWorkers(int workers);

}  // namespace eitk

#include "eitk/parallel_impl.hpp"

#endif  // EITK_REPORT_HPP_
