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

#include "eitk/runner.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <vector>

#include "eitk/dini.hpp"
#include "eitk/identities.hpp"
#include "eitk/path.hpp"
#include "eitk/stats.hpp"
#include "eitk/tilting.hpp"

#ifndef EITK_VERSION_STRING
#define EITK_VERSION_STRING "dev"
#endif

namespace eitk {
namespace {

using nlohmann::json;

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
T Knob(const RunConfig& c, const char* key, T fallback) {
  if (!c.knobs.contains(key)) return fallback;
  try {
    return c.knobs.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("bad value for knob ") + key);
  }
}

CanonicalParams LoadParams(const RunConfig& c, int* grid_level) {
  if (!c.params_file.empty()) return ParamsFromFile(c.params_file, grid_level);
  if (!c.params_json.empty()) return ParamsFromJson(c.params_json, grid_level);
  throw InvalidArgument("this subcommand needs parameters");
}

ExperimentReport SimulateReport(const CanonicalParams& params,
                                const ExperimentOptions& options) {
  struct Row {
    double min, rho, max, half, end, jumps;
  };
  std::vector<Row> rows(options.n);
  ParallelFor(options.n, options.workers, [&](std::size_t r) {
    const EIPath path =
        SimulatePath(params, options.grid_level, DeriveSeed(options.seed, r));
    const Polyline poly = path.ToPolyline();
    const MinLocation m = poly.Min();
    rows[r] = {m.min_value, m.rho, poly.Max(), path.Eval(0.5), path.Eval(1.0),
               static_cast<double>(path.jumps().size())};
  });
  ExperimentReport rep;
  rep.name = "simulate";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = options.n;
  rep.table.header = {"replication", "min", "argmin", "max",
                      "value_half", "value_end", "jumps"};
  std::vector<double> mins, halves;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& x = rows[r];
    rep.table.rows.push_back(
        {static_cast<double>(r), x.min, x.rho, x.max, x.half, x.end, x.jumps});
    mins.push_back(x.min);
    halves.push_back(x.half);
  }
  if (!rows.empty()) {
    rep.Set("mean_min", Mean(mins));
    rep.Set("mean_value_half", Mean(halves));
    rep.Set("kept_jumps", rows.front().jumps);
  }
  rep.labels["key_statistic"] = "mean_min";
  rep.verdict = true;
  return rep;
}

std::vector<double> DoubleList(const RunConfig& c, const char* key,
                               std::vector<double> fallback) {
  if (!c.knobs.contains(key)) return fallback;
  const json& v = c.knobs.at(key);
  std::vector<double> out;
  try {
    if (v.is_array()) {
      for (const json& x : v) {
        if (x.is_string()) {
          const std::string s = x.get<std::string>();
          if (s == "inf" || s == "infinity") {
            out.push_back(INFINITY);
            continue;
          }
          throw InvalidArgument(std::string("bad entry in ") + key);
        }
        out.push_back(x.get<double>());
      }
    } else {
      out.push_back(v.get<double>());
    }
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("bad list for knob ") + key);
  }
  return out;
}

RunResult Dispatch(const RunConfig& c) {
  RunResult res;
  ExperimentOptions options;
  options.seed = c.seed;
  options.n = c.n;
  options.grid_level = c.grid_level;
  options.workers = c.workers;
  if (c.grid_level < 0 || c.grid_level > 24) {
    throw InvalidArgument("grid level must lie in [0,24]");
  }

  if (c.command == "report") {
    const std::string dir = Knob<std::string>(c, "dir", c.out_dir);
    if (dir.empty()) throw InvalidArgument("report needs a directory");
    res.aggregate = AggregateReports(dir);
    res.exit_code = res.aggregate->all_pass() ? kExitPass : kExitFail;
    return res;
  }

  if (c.command == "identity") {
    if (c.kind == "spitzer") {
      WalkSpec walk = WalkSpec::Biased(Knob<int>(c, "walk_n", 10),
                                       Knob<double>(c, "p", 0.5));
      res.report = SpitzerReport(walk, options);
    } else if (c.kind == "stickmax") {
      WalkSpec walk = WalkSpec::Biased(Knob<int>(c, "walk_n", 6),
                                       Knob<double>(c, "p", 0.5));
      res.report = StickmaxReport(walk);
    } else if (c.kind == "kac") {
      int level = c.grid_level;
      const CanonicalParams p = LoadParams(c, &level);
      res.report = KacMinContinuous(p, Knob<int>(c, "quad_points", 64),
                                    options);
    } else if (c.kind == "size-biased") {
      res.report = SizeBiasedCheck(options);
    } else {
      throw InvalidArgument("unknown identity kind '" + c.kind + "'");
    }
  } else {
    static const char* kKnown[] = {"simulate", "conmin",  "transform",
                                   "tilt-check", "dim",   "millar",
                                   "dini",     "lower-bound"};
    bool known = false;
    for (const char* k : kKnown) known = known || c.command == k;
    if (!known) throw InvalidArgument("unknown subcommand '" + c.command + "'");
    const bool arbitrate =
        c.command == "tilt-check" && Knob<bool>(c, "arbitrate", false);
    const bool has_params = !c.params_file.empty() || !c.params_json.empty();
    const CanonicalParams p = arbitrate && !has_params
                                  ? CanonicalParams{}
                                  : LoadParams(c, nullptr);
    if (c.command == "simulate") {
      res.report = SimulateReport(p, options);
    } else if (c.command == "conmin") {
      res.report = ConminJointLawTest(
          p, static_cast<std::size_t>(Knob<int>(c, "depth", 3)), options);
    } else if (c.command == "transform") {
      const std::string kind = c.kind.empty() ? "3214" : c.kind;
      if (kind != "3214") throw InvalidArgument("unknown transform '" + kind + "'");
      res.report = Transform3214Test(p, options);
    } else if (c.command == "tilt-check") {
      TiltParams tilt{Knob<double>(c, "theta", 1.0), Knob<double>(c, "T", 0.5)};
      tilt.Validate();
      if (arbitrate) {
        res.report = ArbitrateDiffusionConvention(
            Knob<double>(c, "sigma", p.sigma > 0.0 ? p.sigma : 2.0), tilt,
            options);
      } else if (c.knobs.contains("mgf_t")) {
        res.report = MgfMonteCarloCheck(p, Knob<double>(c, "mgf_t", 0.5),
                                        tilt.theta, options);
      } else {
        res.report = VerifyChangeOfMeasure(
            p, tilt,
            ParseFunctional(Knob<std::string>(c, "functional", "half")),
            options,
            ParseDiffusionConvention(
                Knob<std::string>(c, "convention", "exact")));
      }
    } else if (c.command == "dim") {
      const auto eps = DoubleList(c, "eps", {0.4, 0.2, 0.1, 0.05});
      res.report = DimConditioningTest(p, eps, options);
    } else if (c.command == "millar") {
      const auto lv = DoubleList(c, "levels", {10, 12, 14});
      std::vector<int> levels;
      for (double x : lv) levels.push_back(static_cast<int>(x));
      res.report = MillarContinuityTest(p, levels, options);
    } else if (c.command == "dini") {
      DiniOptions d;
      d.K = Knob<int>(c, "K", d.K);
      d.eps = Knob<double>(c, "eps", d.eps);
      d.thresholds = DoubleList(c, "thresholds", d.thresholds);
      d.control_tol = Knob<double>(c, "control_tol", d.control_tol);
      res.report = DiniDivergenceDiag(p, d, options);
    } else {
      const auto ts = DoubleList(c, "t", {0.1, 0.25, 0.5});
      res.report = LowerBoundCheck(p, ts, options);
    }
  }
  res.exit_code = res.report->verdict ? kExitPass : kExitFail;
  return res;
}

void WriteFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void WriteArtifacts(const RunConfig& c, const RunResult& r) {
  namespace fs = std::filesystem;
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  if (r.aggregate) {
    WriteFile(dir / "summary.csv", r.aggregate->ToCsv());
    return;
  }
  if (!r.report) return;
  WriteFile(dir / "report.json", ReportToJson(*r.report));
  WriteFile(dir / "data.csv", TableToCsv(r.report->table));
  json m;
  m["config"] = json::parse(RunConfigToJson(c));
  m["config_hash"] = Hex(RunConfigHash(c));
  m["seed"] = c.seed;
  m["version"] = Version();
  m["params_hash"] = Hex(r.report->params_hash);
  m["exit_code"] = r.exit_code;
  WriteFile(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::string Version() { return EITK_VERSION_STRING; }

RunConfig RunConfigFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  RunConfig c;
  try {
    c.command = j.value("command", std::string());
    c.kind = j.value("kind", std::string());
    c.params_file = j.value("params_file", std::string());
    if (j.contains("params")) {
      const json& p = j.at("params");
      c.params_json = p.is_string() ? p.get<std::string>() : p.dump();
    }
    c.seed = j.value("seed", std::uint64_t{1});
    c.n = j.value("n", std::size_t{1000});
    c.grid_level = j.value("grid_level", 10);
    c.workers = j.value("workers", 0);
    c.out_dir = j.value("out_dir", std::string());
    if (j.contains("knobs")) {
      if (!j.at("knobs").is_object()) {
        throw InvalidArgument("knobs must be an object");
      }
      c.knobs = j.at("knobs");
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  if (c.command.empty()) throw InvalidArgument("config needs a command");
  return c;
}

std::string RunConfigToJson(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["kind"] = c.kind;
  j["params_file"] = c.params_file;
  j["params"] = c.params_json;
  j["seed"] = c.seed;
  j["n"] = c.n;
  j["grid_level"] = c.grid_level;
  j["knobs"] = c.knobs;
  return j.dump();
}

std::uint64_t RunConfigHash(const RunConfig& config) {
  return Fnv1a(RunConfigToJson(config));
}

RunResult Run(const RunConfig& config) {
  RunResult res;
  try {
    res = Dispatch(config);
    if (!config.out_dir.empty()) WriteArtifacts(config, res);
  } catch (const InvalidArgument& e) {
    res = RunResult{};
    res.exit_code = kExitUsage;
    res.message = e.what();
  } catch (const std::exception& e) {
    res = RunResult{};
    res.exit_code = kExitCrash;
    res.message = e.what();
  }
  return res;
}

}  // namespace eitk
