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

#ifndef EITK_RUNNER_HPP_
#define EITK_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "eitk/params.hpp"
#include "eitk/report.hpp"

namespace eitk {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitCrash = 3,
};

// One experiment invocation. Subcommands: simulate, conmin, transform,
// tilt-check, identity (kind spitzer, stickmax, kac or size-biased), dim,
// millar, dini, lower-bound, report.
//
// Knobs by subcommand (all optional):
//   conmin       depth
//   tilt-check   theta, T, functional, convention, arbitrate, mgf_t, sigma
//   identity     walk_n, p, quad_points
//   dim          eps (list)
//   millar       levels (list)
//   dini         K, eps, thresholds (list), control_tol
//   lower-bound  t (list)
//   report       dir
struct RunConfig {
  std::string command;
  std::string kind;
  std::string params_file;
  // Inline parameter document; used when params_file is empty.
  std::string params_json;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  int grid_level = 10;
  int workers = 0;
  std::string out_dir;
  nlohmann::json knobs = nlohmann::json::object();
};

// Throws InvalidArgument on malformed documents.
RunConfig RunConfigFromJson(const std::string& text);
// Canonical form; excludes out_dir and workers, which never change results.
std::string RunConfigToJson(const RunConfig& config);
std::uint64_t RunConfigHash(const RunConfig& config);

struct RunResult {
  int exit_code = kExitPass;
  std::string message;
  std::optional<ExperimentReport> report;
  // Set by the report subcommand.
  std::optional<Aggregate> aggregate;
};

// Dispatches the subcommand. Never throws: usage errors map to kExitUsage and
// anything else to kExitCrash. When out_dir is set, writes report.json,
// data.csv and manifest.json there (summary.csv for the report subcommand).
RunResult Run(const RunConfig& config);

std::string Version();

}  // namespace eitk

#endif  // EITK_RUNNER_HPP_
