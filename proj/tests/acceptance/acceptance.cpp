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


// Acceptance suite. `acceptance N` runs criterion N; without arguments every
// criterion runs. One PASS/FAIL line is printed per criterion and the exit
// status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eitk/identities.hpp"
#include "eitk/runner.hpp"
#include "eitk/tilting.hpp"

namespace eitk {
namespace {

// Pinned tolerances.
constexpr double kExactTol = 1e-12;
constexpr double kZ = 3.0;
constexpr double kMinP = 0.005;
constexpr double kQuadTol = 1e-3;
constexpr double kShrink = 0.5;
constexpr double kGapLevel = 0.1;
constexpr double kGapFraction = 0.95;
constexpr double kDiniFraction = 0.99;
constexpr double kControlTol = 1e-6;
constexpr double kLowerBound = 1.0 / 16.0;

// Pinned budgets, in seconds.
constexpr double kBudgetExact = 60.0;
constexpr double kBudgetKac = 300.0;
constexpr double kBudgetConmin = 900.0;

const char kBrownianBridge[] = R"({"alpha":0,"sigma":1})";
const char kAlternating[] =
    R"({"alpha":0,"sigma":0,"beta":{"kind":"powerlaw","c":1,"p":1,"signs":"alternating"}})";
const char kHarmonic[] =
    R"({"alpha":0,"sigma":0,"beta":{"kind":"powerlaw","c":1,"p":1,"signs":"positive"}})";
const char kOneJump[] =
    R"({"alpha":0,"sigma":0,"beta":{"kind":"list","values":[1]}})";
const char kTenJumps[] =
    R"({"alpha":0.3,"sigma":0.7,"beta":{"kind":"list","values":)"
    R"([1,-0.8,0.6,-0.5,0.45,-0.4,0.35,-0.3,0.25,-0.2]}})";
const char kMixed[] =
    R"({"alpha":0,"sigma":1,"beta":{"kind":"list","values":[0.8,-0.5,0.3]}})";
const char kFiniteIrregular[] =
    R"({"alpha":0.5,"sigma":0,"beta":{"kind":"list","values":[1,0.5]}})";
const char kFiniteControl[] =
    R"({"alpha":2.5,"sigma":0,"beta":{"kind":"list","values":[0.5]}})";
const char kSpectrallyNegative[] =
    R"({"alpha":0,"sigma":0.5,"beta":{"kind":"powerlaw","c":1,"p":1,"signs":"negative"}})";
const char kTwoNegativeJumps[] =
    R"({"alpha":0,"sigma":0,"beta":{"kind":"list","values":[-1,-0.5]}})";

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void Expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [fail: " << what << "]";
    }
  }
  template <typename T>
  void Note(const std::string& key, const T& v) {
    detail << " " << key << "=" << v;
  }
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

RunConfig Config(const std::string& command, const std::string& params,
                 std::size_t n, int level, std::uint64_t seed) {
  RunConfig c;
  c.command = command;
  c.params_json = params;
  c.n = n;
  c.grid_level = level;
  c.seed = seed;
  return c;
}

// Runs a config and returns its report; records usage errors and crashes.
ExperimentReport RunReport(const RunConfig& c, Check& check,
                           const std::string& label) {
  const RunResult r = Run(c);
  if (!r.report) {
    check.Expect(false, label + ": " + r.message);
    return {};
  }
  check.Expect(r.exit_code == (r.report->verdict ? kExitPass : kExitFail),
               label + ": exit code");
  return *r.report;
}

void Criterion1(Check& c) {
  Timer t;
  double worst = 0.0;
  for (double p : {0.5, 0.6}) {
    for (int n = 1; n <= 10; ++n) {
      const Pair r = SpitzerDiscrete(WalkSpec::Biased(n, p));
      worst = std::max(worst, std::abs(r.lhs - r.rhs));
    }
  }
  const Pair a = SpitzerDiscrete(WalkSpec::Symmetric(2));
  const Pair b = SpitzerDiscrete(WalkSpec::Biased(2, 0.6));
  c.Note("max_abs_diff", worst);
  c.Note("n2_symmetric", a.lhs);
  c.Note("n2_p0.6", b.lhs);
  c.Expect(worst <= kExactTol, "lhs != rhs");
  c.Expect(std::abs(a.lhs - 0.75) <= kExactTol, "n=2 symmetric value");
  c.Expect(std::abs(b.lhs - 0.96) <= kExactTol, "n=2 p=0.6 value");
  RunConfig cfg;
  cfg.command = "identity";
  cfg.kind = "spitzer";
  cfg.knobs = {{"walk_n", 2}, {"p", 0.5}};
  const ExperimentReport rep = RunReport(cfg, c, "runner");
  c.Expect(rep.verdict && rep.Get("lhs") == rep.Get("rhs"), "runner verdict");
  c.Expect(t.Seconds() < kBudgetExact, "runtime");
}

void Criterion2(Check& c) {
  Timer t;
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    worst = std::max(worst, StickbreakMaxDiscrete(WalkSpec::Symmetric(n)).tv);
  }
  const LawPair two = StickbreakMaxDiscrete(WalkSpec::Symmetric(2));
  auto at = [&](const Law& l, double v) {
    const auto it = l.find(LawKey(v));
    return it == l.end() ? 0.0 : it->second;
  };
  c.Note("max_tv", worst);
  c.Expect(worst <= kExactTol, "total variation");
  for (const Law* l : {&two.lhs, &two.rhs}) {
    c.Expect(std::abs(at(*l, 0) - 0.5) <= kExactTol &&
                 std::abs(at(*l, 1) - 0.25) <= kExactTol &&
                 std::abs(at(*l, 2) - 0.25) <= kExactTol && l->size() == 3,
             "n=2 law");
  }
  c.Expect(t.Seconds() < kBudgetExact, "runtime");
}

void Criterion3(Check& c) {
  Timer t;
  RunConfig cfg = Config("identity", kBrownianBridge, 100000, 6, 301);
  cfg.kind = "kac";
  cfg.knobs = {{"quad_points", 64}};
  const ExperimentReport r = RunReport(cfg, c, "kac");
  const double exact = -std::sqrt(M_PI / 8.0);
  const double z = (r.Get("mc_mean_min") - exact) / r.Get("se");
  const double q = std::abs(r.Get("quadrature_rhs") - exact);
  c.Note("mean_min", r.Get("mc_mean_min"));
  c.Note("z", z);
  c.Note("quadrature_error", q);
  c.Expect(std::abs(z) <= kZ, "mean within 3 SE");
  c.Expect(q <= kQuadTol, "quadrature");
  c.Expect(t.Seconds() < kBudgetKac, "runtime");
}

void Criterion4(Check& c) {
  for (double theta : {-2.0, 1.0}) {
    const OneJumpOracle o = OneJumpValueAtT(theta, 0.5);
    c.Expect(std::abs(o.lhs - o.rhs) <= kExactTol, "one-jump oracle");
    struct Case {
      const char* name;
      const char* params;
      const char* functional;
    };
    for (const Case& k : {Case{"one", kOneJump, "end"},
                          Case{"ten", kTenJumps, "half"}}) {
      RunConfig cfg = Config("tilt-check", k.params, 100000, 6, 401);
      cfg.knobs = {{"theta", theta}, {"T", 0.5}, {"functional", k.functional}};
      const ExperimentReport r = RunReport(cfg, c, k.name);
      const std::string label =
          std::string(k.name) + "_theta=" + FormatLabel(theta);
      c.Note("z_" + label, r.Get("z"));
      c.Expect(std::abs(r.Get("z")) <= kZ, label);
    }
  }
}

void Criterion5(Check& c) {
  const CanonicalParams one = ParamsFromJson(kOneJump);
  const double m = Mgf(one, 0.5, 1.0);
  c.Note("one_jump_mgf", m);
  c.Expect(std::abs(m - std::cosh(0.5)) <= kExactTol, "cosh(1/2)");
  c.Expect(std::abs(m - 1.12763) <= 1e-5, "1.12763");
  struct Case {
    const char* name;
    const char* params;
  };
  for (const Case& k : {Case{"gaussian", kBrownianBridge},
                        Case{"pure_jump", kOneJump}, Case{"mixed", kTenJumps}}) {
    RunConfig cfg = Config("tilt-check", k.params, 100000, 6, 501);
    cfg.knobs = {{"theta", 1.0}, {"T", 0.5}, {"mgf_t", 0.5}};
    const ExperimentReport r = RunReport(cfg, c, k.name);
    c.Note(std::string("z_") + k.name, r.Get("z"));
    c.Expect(std::abs(r.Get("z")) <= kZ, k.name);
  }
}

void Criterion6(Check& c) {
  Timer t;
  struct Case {
    const char* name;
    const char* params;
    int level;
  };
  for (const Case& k : {Case{"brownian_bridge", kBrownianBridge, 14},
                        Case{"alternating", kAlternating, 10}}) {
    RunConfig cfg = Config("conmin", k.params, 2000, k.level, 601);
    cfg.knobs = {{"depth", 3}};
    const ExperimentReport r = RunReport(cfg, c, k.name);
    double min_p = 1.0;
    for (const auto& [key, v] : r.statistics) {
      if (key.rfind("p_", 0) == 0) min_p = std::min(min_p, v);
    }
    c.Note(std::string("min_p_") + k.name, min_p);
    c.Expect(min_p > kMinP, k.name);
  }
  c.Expect(t.Seconds() < kBudgetConmin, "runtime");
}

void Criterion7(Check& c) {
  struct Case {
    const char* name;
    const char* params;
    int level;
  };
  for (const Case& k : {Case{"mixed", kMixed, 12},
                        Case{"alternating", kAlternating, 10}}) {
    RunConfig cfg = Config("transform", k.params, 2000, k.level, 701);
    cfg.kind = "3214";
    const ExperimentReport r = RunReport(cfg, c, k.name);
    double min_p = 1.0;
    for (const auto& [key, v] : r.statistics) {
      if (key.rfind("p_", 0) == 0) min_p = std::min(min_p, v);
    }
    c.Note(std::string("min_p_") + k.name, min_p);
    c.Note(std::string("multiset_") + k.name, r.Get("jump_multiset_preserved"));
    c.Expect(min_p > kMinP, k.name);
    c.Expect(r.Get("jump_multiset_preserved") == 2000.0, "jump multiset");
  }
}

void Criterion8(Check& c) {
  RunConfig cfg = Config("dim", kBrownianBridge, 2000, 10, 801);
  cfg.knobs = {{"eps", {0.4, 0.2, 0.1, 0.05}}};
  const ExperimentReport r = RunReport(cfg, c, "dim");
  for (const char* e : {"0.4", "0.2", "0.1", "0.05"}) {
    c.Note(std::string("ks_max_eps=") + e, r.Get(std::string("ks_max_eps=") + e));
  }
  const double p = r.Get("p_max_eps=0.05");
  c.Note("p_max_eps=0.05", p);
  c.Expect(r.Get("ks_max_eps=0.05") < r.Get("ks_max_eps=0.4"), "ks decreases");
  c.Expect(p > kMinP, "final p");
}

void Criterion9(Check& c) {
  auto median = [](const ExperimentReport& r, const char* side, int level) {
    return r.Get(std::string("median_gap_") + side + "_level=" +
                 std::to_string(level));
  };
  struct Case {
    const char* name;
    const char* params;
  };
  for (const Case& k : {Case{"brownian_bridge", kBrownianBridge},
                        Case{"harmonic", kHarmonic}}) {
    RunConfig cfg = Config("millar", k.params, 500, 10, 901);
    cfg.knobs = {{"levels", {10, 12, 14}}};
    const ExperimentReport r = RunReport(cfg, c, k.name);
    for (const char* side : {"plus", "minus"}) {
      const double a = median(r, side, 10), b = median(r, side, 14);
      c.Note(std::string(k.name) + "_median_" + side + "_10", a);
      c.Note(std::string(k.name) + "_median_" + side + "_14", b);
      c.Expect(a <= 1e-9 || b <= kShrink * a, std::string(k.name) + " shrink");
    }
  }
  RunConfig cfg = Config("millar", kFiniteIrregular, 500, 10, 902);
  cfg.knobs = {{"levels", {10, 12, 14}}};
  const ExperimentReport r = RunReport(cfg, c, "finite");
  for (int level : {10, 12, 14}) {
    const double f = r.Get("fraction_gap_plus_above_0.1_level=" +
                           std::to_string(level));
    c.Note("finite_fraction_" + std::to_string(level), f);
    c.Expect(f >= kGapFraction, "finite variation gap");
  }
  (void)kGapLevel;
}

void Criterion10(Check& c) {
  RunConfig cfg = Config("dini", kHarmonic, 2000, 10, 1001);
  cfg.knobs = {{"K", 22}, {"thresholds", {10}}};
  const ExperimentReport r = RunReport(cfg, c, "harmonic");
  for (const char* f : {"sup_right", "inf_right", "sup_left", "inf_left"}) {
    const std::string key = std::string("fraction_") + f + "_M=10";
    c.Note(key, r.Get(key));
    c.Expect(r.Get(key) >= kDiniFraction, key);
  }
  RunConfig ctl = Config("dini", kFiniteControl, 20000, 10, 1002);
  ctl.knobs = {{"K", 22}, {"control_tol", kControlTol}};
  const ExperimentReport q = RunReport(ctl, c, "control");
  c.Note("control_drift", q.Get("drift"));
  c.Note("control_failures", q.Get("control_failures"));
  c.Note("control_max_abs_deviation", q.Get("max_abs_deviation"));
  c.Expect(std::abs(q.Get("drift") - 2.0) <= kExactTol, "control drift");
  c.Expect(q.Get("control_failures") <= 20000 * std::ldexp(1.0, -19),
           "control convergence");
}

void Criterion11(Check& c) {
  struct Case {
    const char* name;
    const char* params;
  };
  for (const Case& k : {Case{"negative_harmonic", kSpectrallyNegative},
                        Case{"two_jumps", kTwoNegativeJumps}}) {
    RunConfig cfg = Config("lower-bound", k.params, 20000, 8, 1101);
    cfg.knobs = {{"t", {0.1, 0.25, 0.5}}};
    const ExperimentReport r = RunReport(cfg, c, k.name);
    for (const char* t : {"0.1", "0.25", "0.5"}) {
      const double p = r.Get(std::string("p_t=") + t);
      const double se = r.Get(std::string("se_t=") + t);
      c.Note(std::string(k.name) + "_p_t=" + t, p);
      c.Expect(p >= kLowerBound - 3.0 * se, std::string(k.name) + " t=" + t);
    }
  }
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Criterion12(Check& c) {
  namespace fs = std::filesystem;
  std::vector<RunConfig> configs;
  {
    RunConfig k = Config("conmin", kBrownianBridge, 300, 10, 1201);
    k.knobs = {{"depth", 3}};
    configs.push_back(k);
  }
  {
    RunConfig k = Config("dim", kBrownianBridge, 300, 8, 1202);
    k.knobs = {{"eps", {0.4, 0.1}}};
    configs.push_back(k);
  }
  {
    RunConfig k = Config("tilt-check", kTenJumps, 2000, 6, 1203);
    k.knobs = {{"theta", 1.0}, {"T", 0.5}};
    configs.push_back(k);
  }
  {
    RunConfig k = Config("dini", kAlternating, 500, 10, 1204);
    k.knobs = {{"K", 16}};
    configs.push_back(k);
  }
  {
    RunConfig k = Config("transform", kMixed, 300, 8, 1205);
    k.kind = "3214";
    configs.push_back(k);
  }
  const fs::path root = fs::temp_directory_path() / "eitk_acceptance_12";
  fs::remove_all(root);
  int identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string csv[3];
    int run = 0;
    for (int workers : {1, 4, 4}) {
      RunConfig k = configs[i];
      k.workers = workers;
      k.out_dir = (root / (std::to_string(i) + "_" + std::to_string(run))).string();
      const RunResult r = Run(k);
      c.Expect(r.exit_code == kExitPass || r.exit_code == kExitFail,
               k.command + ": " + r.message);
      csv[run++] = ReadFile(fs::path(k.out_dir) / "data.csv");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1] && csv[1] == csv[2];
    identical += same ? 1 : 0;
    c.Expect(same, configs[i].command + " csv differs");
  }
  c.Note("identical_configs", identical);
  c.Note("configs", configs.size());
  fs::remove_all(root);
}

}  // namespace
}  // namespace eitk

int main(int argc, char** argv) {
  using Fn = void (*)(eitk::Check&);
  const Fn criteria[] = {eitk::Criterion1,  eitk::Criterion2,
                         eitk::Criterion3,  eitk::Criterion4,
                         eitk::Criterion5,  eitk::Criterion6,
                         eitk::Criterion7,  eitk::Criterion8,
                         eitk::Criterion9,  eitk::Criterion10,
                         eitk::Criterion11, eitk::Criterion12};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= 12; ++i) which.push_back(i);
  }
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > 12) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    eitk::Check check;
    try {
      criteria[k - 1](check);
    } catch (const std::exception& e) {
      check.Expect(false, e.what());
    }
    std::printf("Criterion %d: %s%s\n", k, check.ok ? "PASS" : "FAIL",
                check.detail.str().c_str());
    std::fflush(stdout);
    all = all && check.ok;
  }
  return all ? 0 : 1;
}
