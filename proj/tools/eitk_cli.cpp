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

// Command-line front end over the C interface of libeitk.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eitk/eitk.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;

struct Common {
  std::string params_file;
  std::string params_json;
  std::string config_file;
  std::uint64_t seed = 1;
  std::size_t reps = 1000;
  int grid_level = 10;
  int workers = 0;
  std::string out_dir;
  bool quiet = false;
};

void AddCommon(CLI::App* sub, Common& c, bool with_params = true) {
  if (with_params) {
    sub->add_option("--params", c.params_file, "parameter file (JSON)");
    sub->add_option("--params-json", c.params_json, "inline parameter JSON");
  }
  sub->add_option("--config", c.config_file, "run config file (JSON)");
  sub->add_option("--seed", c.seed, "root seed");
  sub->add_option("--grid-level", c.grid_level, "dyadic grid level");
  sub->add_option("--workers", c.workers, "worker threads (0 = all cores)");
  sub->add_option("--out", c.out_dir, "artifact directory");
  sub->add_flag("--quiet", c.quiet, "do not print the report");
}

void AddReps(CLI::App* sub, Common& c, const std::string& name = "--n") {
  sub->add_option(name + ",--reps", c.reps, "replications");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t Given(const CLI::App* sub, const char* flag) {
  const CLI::Option* o = sub->get_option_no_throw(flag);
  return o == nullptr ? 0 : o->count();
}

json BaseConfig(const Common& c, const CLI::App* sub) {
  json cfg = json::object();
  if (!c.config_file.empty()) cfg = json::parse(ReadFile(c.config_file));
  auto given = [&](const char* flag) { return Given(sub, flag) > 0; };
  if (!c.params_file.empty()) cfg["params_file"] = c.params_file;
  if (!c.params_json.empty()) cfg["params"] = c.params_json;
  if (given("--seed") || !cfg.contains("seed")) cfg["seed"] = c.seed;
  if (given("--grid-level") || !cfg.contains("grid_level")) {
    cfg["grid_level"] = c.grid_level;
  }
  if (given("--workers") || !cfg.contains("workers")) cfg["workers"] = c.workers;
  if (!c.out_dir.empty()) cfg["out_dir"] = c.out_dir;
  if (!cfg.contains("knobs")) cfg["knobs"] = json::object();
  return cfg;
}

int Execute(const json& cfg, bool quiet) {
  eitk_report* report = nullptr;
  const std::string text = cfg.dump();
  const eitk_status s = eitk_run(text.c_str(), &report);
  if (s == EITK_INVALID_ARGUMENT || s == EITK_INTERNAL_ERROR) {
    std::cerr << "eitk: " << eitk_last_error() << "\n";
    return static_cast<int>(s);
  }
  if (!quiet) {
    char* out = nullptr;
    if (cfg.value("command", "") == "report") {
      if (eitk_report_csv(report, &out) == EITK_OK) std::cout << out;
    } else if (eitk_report_json(report, &out) == EITK_OK) {
      std::cout << out;
    }
    eitk_string_free(out);
  }
  eitk_report_free(report);
  return static_cast<int>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exchangeable-increment process toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eitk_version()));

  Common c;
  json knobs = json::object();
  std::string command, kind;

  auto* simulate = app.add_subcommand("simulate", "simulate paths");
  AddCommon(simulate, c);
  AddReps(simulate, c);

  std::size_t depth = 3;
  auto* conmin = app.add_subcommand(
      "conmin", "excursions of the convex minorant vs stick breaking");
  AddCommon(conmin, c);
  AddReps(conmin, c);
  conmin->add_option("--depth", depth, "number of intervals");

  auto* transform =
      app.add_subcommand("transform", "invariance of the 3214 transformation");
  AddCommon(transform, c);
  AddReps(transform, c);

  double theta = 1.0, T = 0.5, sigma = 2.0, mgf_t = 0.5;
  std::string functional = "half", convention = "exact";
  bool arbitrate = false;
  auto* tilt = app.add_subcommand("tilt-check", "exponential change of measure");
  AddCommon(tilt, c);
  AddReps(tilt, c);
  tilt->add_option("--theta", theta, "tilt parameter");
  tilt->add_option("--T", T, "horizon in (0,1)");
  tilt->add_option("--functional", functional, "half, end, max or positive");
  tilt->add_option("--convention", convention, "exact or literal");
  tilt->add_flag("--arbitrate", arbitrate, "compare diffusion conventions");
  tilt->add_option("--sigma", sigma, "diffusion coefficient for --arbitrate");
  auto* mgf_opt = tilt->add_option("--mgf-t", mgf_t,
                                   "check the mgf at this time instead");

  auto* identity = app.add_subcommand("identity", "fluctuation identities");
  identity->require_subcommand(1);
  int walk_n = 10, quad_points = 64;
  double p = 0.5;
  auto* spitzer = identity->add_subcommand("spitzer", "expected walk maximum");
  AddCommon(spitzer, c, false);
  spitzer->add_option("--n", walk_n, "walk steps");
  spitzer->add_option("--p", p, "P(step = +1)");
  spitzer->add_option("--reps", c.reps, "replications when n > 20");
  auto* stickmax =
      identity->add_subcommand("stickmax", "law of the walk maximum");
  AddCommon(stickmax, c, false);
  stickmax->add_option("--n", walk_n, "walk steps");
  stickmax->add_option("--p", p, "P(step = +1)");
  auto* kac = identity->add_subcommand("kac", "expected infimum");
  AddCommon(kac, c);
  AddReps(kac, c);
  kac->add_option("--quad-points", quad_points, "Gauss-Legendre nodes");
  auto* sizeb =
      identity->add_subcommand("size-biased", "size-biased stick moments");
  AddCommon(sizeb, c, false);
  AddReps(sizeb, c);

  std::vector<std::string> eps_list;
  auto* dim = app.add_subcommand("dim", "conditioning on a small infimum");
  AddCommon(dim, c);
  AddReps(dim, c);
  dim->add_option("--eps", eps_list, "epsilon list (inf allowed)")
      ->delimiter(',');

  std::vector<int> levels{10, 12, 14};
  auto* millar = app.add_subcommand("millar", "path behaviour at the minimum");
  AddCommon(millar, c);
  AddReps(millar, c);
  millar->add_option("--levels", levels, "refinement levels")->delimiter(',');

  int K = 22;
  double dini_eps = 0.1, control_tol = 1e-6;
  std::vector<double> thresholds{10.0, 100.0};
  auto* dini = app.add_subcommand("dini", "difference quotients at 0");
  AddCommon(dini, c);
  AddReps(dini, c);
  dini->add_option("--K", K, "finest scale 2^-K");
  dini->add_option("--eps", dini_eps, "truncation accuracy of X_h/h");
  dini->add_option("--thresholds", thresholds, "levels M")->delimiter(',');
  dini->add_option("--control-tol", control_tol,
                   "finite-variation tolerance");

  std::vector<double> ts{0.1, 0.25, 0.5};
  auto* lower = app.add_subcommand("lower-bound", "P(X_t >= 0) lower bound");
  AddCommon(lower, c);
  AddReps(lower, c);
  lower->add_option("--t", ts, "times in (0,1/2]")->delimiter(',');

  std::string report_dir;
  auto* report = app.add_subcommand("report", "summarize report directories");
  report->add_option("dir,--dir", report_dir, "directory to scan")->required();
  report->add_option("--out", c.out_dir, "where to write summary.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  CLI::App* leaf = sub;
  command = sub->get_name();
  if (command == "identity") {
    leaf = sub->get_subcommands().front();
    kind = leaf->get_name();
  }

  json cfg;
  try {
    cfg = BaseConfig(c, leaf);
  } catch (const std::exception& e) {
    std::cerr << "eitk: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg["command"] = command;
  if (!kind.empty()) cfg["kind"] = kind;
  if (Given(leaf, "--n") || Given(leaf, "--reps") || !cfg.contains("n")) {
    cfg["n"] = c.reps;
  }
  json& k = cfg["knobs"];
  auto set = [&](const char* flag, const char* key, const json& v) {
    if (Given(leaf, flag) > 0 || !k.contains(key)) k[key] = v;
  };
  if (command == "conmin") {
    set("--depth", "depth", depth);
  } else if (command == "tilt-check") {
    set("--theta", "theta", theta);
    set("--T", "T", T);
    set("--functional", "functional", functional);
    set("--convention", "convention", convention);
    if (arbitrate) k["arbitrate"] = true;
    if (Given(leaf, "--sigma") > 0) k["sigma"] = sigma;
    if (mgf_opt->count() > 0) k["mgf_t"] = mgf_t;
  } else if (command == "identity") {
    if (kind == "spitzer" || kind == "stickmax") {
      set("--n", "walk_n", walk_n);
      set("--p", "p", p);
      if (Given(leaf, "--reps") == 0) cfg["n"] = 10000;
    } else if (kind == "kac") {
      set("--quad-points", "quad_points", quad_points);
    }
  } else if (command == "dim") {
    if (!eps_list.empty()) {
      json arr = json::array();
      for (const std::string& e : eps_list) {
        if (e == "inf" || e == "infinity") {
          arr.push_back("inf");
        } else {
          try {
            arr.push_back(std::stod(e));
          } catch (const std::exception&) {
            std::cerr << "eitk: bad epsilon '" << e << "'\n";
            return kExitUsage;
          }
        }
      }
      k["eps"] = arr;
    }
  } else if (command == "millar") {
    set("--levels", "levels", levels);
  } else if (command == "dini") {
    set("--K", "K", K);
    set("--eps", "eps", dini_eps);
    set("--thresholds", "thresholds", thresholds);
    set("--control-tol", "control_tol", control_tol);
  } else if (command == "lower-bound") {
    set("--t", "t", ts);
  } else if (command == "report") {
    k["dir"] = report_dir;
  }
  return Execute(cfg, c.quiet);
}
