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

#include "eitk/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eitk/stats.hpp"

namespace eitk {
namespace {

// log((1-t) e^{-x t} + t e^{x (1-t)}) for x = theta beta.
double LogJumpFactor(double x, double t) {
  if (x == 0.0 || t == 0.0 || t == 1.0) return 0.0;
  if (x > 30.0) return x * (1.0 - t) + std::log(t + (1.0 - t) * std::exp(-x));
  return -x * t + std::log1p(t * std::expm1(x));
}

// beta (e^{x} - 1) / (T e^{x} + 1 - T) for x = theta beta.
double MeanShift(double beta, double x, double T) {
  if (x > 30.0) {
    const double e = std::exp(-x);
    return beta * (1.0 - e) / (T + (1.0 - T) * e);
  }
  const double m = std::expm1(x);
  return beta * m / (1.0 + T * m);
}

struct SideSample {
  double half = 0.0;
  double end = 0.0;
  double max = 0.0;
};

double Pick(const SideSample& s, Functional f) {
  switch (f) {
    case Functional::kValueHalf: return s.half;
    case Functional::kValueEnd: return s.end;
    case Functional::kMax: return s.max;
    case Functional::kPositivePart: return std::max(s.end, 0.0);
  }
  return 0.0;
}

// Untilted path observed on [0,T]; bridge knots are added at T/2, T and the
// jump times before T so that the values and the maximum are exact draws.
SideSample SampleUntilted(const CanonicalParams& params, double T, int level,
                          std::uint64_t seed, bool want_max) {
  EIPath path = SimulatePath(params, level, seed);
  Rng aux = Rng(seed).Split(3);
  if (params.sigma > 0.0) {
    std::vector<double> at{0.5 * T, T};
    if (want_max) {
      for (const Jump& j : path.jumps()) {
        if (j.location <= T) at.push_back(j.location);
      }
    }
    path = path.WithBridgeKnots(at, aux);
  }
  SideSample s;
  s.half = path.Eval(0.5 * T);
  s.end = path.Eval(T);
  if (want_max) {
    const Polyline skel = path.ToPolyline().WithKnot(T);
    s.max = SampleSkeletonMaximum(skel, params.sigma, T, aux);
  }
  return s;
}

SideSample SampleTilted(const CanonicalParams& params, const TiltParams& tilt,
                        int level, std::uint64_t seed, bool want_max,
                        DiffusionConvention convention) {
  EIPath path = SimulateTiltedPath(params, tilt, level, seed, convention);
  Rng aux = Rng(seed).Split(4);
  if (path.sigma() > 0.0) {
    std::vector<double> at{0.5};
    if (want_max) {
      for (const Jump& j : path.jumps()) at.push_back(j.location);
    }
    path = path.WithBridgeKnots(at, aux);
  }
  SideSample s;
  s.half = path.Eval(0.5);
  s.end = path.Eval(1.0);
  if (want_max) {
    s.max = SampleSkeletonMaximum(path.ToPolyline(), path.sigma(), 1.0, aux);
  }
  return s;
}

constexpr std::uint64_t kUntiltedStream = 0x50;
constexpr std::uint64_t kTiltedStream = 0x51;

}  // namespace

void TiltParams::Validate() const {
  if (!(T > 0.0 && T < 1.0)) throw InvalidArgument("T must lie in (0,1)");
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
}

std::string ToString(DiffusionConvention c) {
  return c == DiffusionConvention::kExact ? "exact" : "literal";
}

DiffusionConvention ParseDiffusionConvention(const std::string& s) {
  if (s == "exact") return DiffusionConvention::kExact;
  if (s == "literal") return DiffusionConvention::kLiteral;
  throw InvalidArgument("unknown diffusion convention: " + s);
}

std::string ToString(Functional f) {
  switch (f) {
    case Functional::kValueHalf: return "value_at_T/2";
    case Functional::kValueEnd: return "value_at_T";
    case Functional::kMax: return "max_on_[0,T]";
    case Functional::kPositivePart: return "positive_part_at_T";
  }
  return "";
}

Functional ParseFunctional(const std::string& s) {
  if (s == "value_at_T/2" || s == "half") return Functional::kValueHalf;
  if (s == "value_at_T" || s == "end") return Functional::kValueEnd;
  if (s == "max_on_[0,T]" || s == "max") return Functional::kMax;
  if (s == "positive_part_at_T" || s == "positive") {
    return Functional::kPositivePart;
  }
  throw InvalidArgument("unknown functional: " + s);
}

double LogMgf(const CanonicalParams& params, double t, double theta) {
  params.Validate();
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in [0,1]");
  NeumaierSum s;
  s.Add(params.alpha * theta * t);
  s.Add(0.5 * theta * theta * params.sigma * params.sigma * t * (1.0 - t));
  for (double b : params.MaterializeBetas()) s.Add(LogJumpFactor(theta * b, t));
  return s.value();
}

double Mgf(const CanonicalParams& params, double t, double theta) {
  return std::exp(LogMgf(params, t, theta));
}

double TiltProbability(double beta, double theta, double T) {
  const double x = theta * beta + std::log(T) - std::log1p(-T);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> TiltProbabilities(const CanonicalParams& params,
                                      const TiltParams& tilt) {
  tilt.Validate();
  std::vector<double> p;
  for (double b : params.MaterializeBetas()) {
    p.push_back(TiltProbability(b, tilt.theta, tilt.T));
  }
  return p;
}

TiltedCharacteristics TiltFromUniforms(const CanonicalParams& params,
                                       const TiltParams& tilt,
                                       std::span<const double> v, double z,
                                       DiffusionConvention convention) {
  params.Validate();
  tilt.Validate();
  TiltedCharacteristics c;
  c.tilt = tilt;
  c.convention = convention;
  c.betas = params.MaterializeBetas();
  if (v.size() != c.betas.size()) {
    throw InvalidArgument("one uniform per kept jump is required");
  }
  const double T = tilt.T;
  NeumaierSum drift;
  drift.Add(params.alpha * T);
  if (convention == DiffusionConvention::kExact) {
    c.bridge_end = tilt.theta * params.sigma * T * (1.0 - T) +
                   std::sqrt(T * (1.0 - T)) * z;
    drift.Add(params.sigma * c.bridge_end);
    c.sigma_theta = params.sigma * std::sqrt(T);
  } else {
    drift.Add(tilt.theta * params.sigma);
    c.sigma_theta = std::abs(tilt.theta * params.sigma);
  }
  const std::size_t n = c.betas.size();
  c.p.resize(n);
  c.b_draws.resize(n);
  c.beta_theta.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    c.p[j] = TiltProbability(c.betas[j], tilt.theta, T);
    c.b_draws[j] = v[j] <= c.p[j] ? 1 : 0;
    c.beta_theta[j] = c.b_draws[j] ? c.betas[j] : 0.0;
    drift.Add(c.betas[j] * (c.b_draws[j] - T));
  }
  c.alpha_theta = drift.value();
  return c;
}

TiltedCharacteristics SampleTiltedCharacteristics(
    const CanonicalParams& params, const TiltParams& tilt, std::uint64_t seed,
    DiffusionConvention convention) {
  Rng rng(seed);
  const std::size_t n = params.TruncationIndex();
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform();
  const double z = rng.Normal();
  return TiltFromUniforms(params, tilt, v, z, convention);
}

double MeanAlphaTheta(const CanonicalParams& params, const TiltParams& tilt,
                      DiffusionConvention convention) {
  params.Validate();
  tilt.Validate();
  const double T = tilt.T;
  NeumaierSum s;
  for (double b : params.MaterializeBetas()) {
    s.Add(MeanShift(b, tilt.theta * b, T));
  }
  const double gauss = convention == DiffusionConvention::kExact
                           ? tilt.theta * params.sigma * params.sigma * T *
                                 (1.0 - T)
                           : tilt.theta * params.sigma;
  return params.alpha * T + gauss + T * (1.0 - T) * s.value();
}

double VarAlphaTheta(const CanonicalParams& params, const TiltParams& tilt,
                     DiffusionConvention convention) {
  NeumaierSum s;
  const auto betas = params.MaterializeBetas();
  for (double b : betas) {
    const double p = TiltProbability(b, tilt.theta, tilt.T);
    s.Add(b * b * p * (1.0 - p));
  }
  if (convention == DiffusionConvention::kExact) {
    s.Add(params.sigma * params.sigma * tilt.T * (1.0 - tilt.T));
  }
  return s.value();
}

EIPath SimulateTiltedPath(const CanonicalParams& params,
                          const TiltParams& tilt, int grid_level,
                          std::uint64_t seed,
                          DiffusionConvention convention) {
  Rng root(seed);
  const TiltedCharacteristics c = SampleTiltedCharacteristics(
      params, tilt, root.Split(1).seed(), convention);
  Rng jump_rng = root.Split(2);
  std::vector<Jump> jumps;
  for (std::size_t j = 0; j < c.betas.size(); ++j) {
    const double u = jump_rng.Uniform();
    if (c.b_draws[j]) jumps.push_back({u, c.betas[j]});
  }
  BrownianBridgeGrid bridge;
  if (c.sigma_theta > 0.0) {
    Rng bridge_rng = root.Split(3);
    bridge = BrownianBridgeGrid::Sample(grid_level, bridge_rng);
  } else {
    bridge = BrownianBridgeGrid::Zero(grid_level);
  }
  return EIPath(c.alpha_theta, c.sigma_theta, std::move(jumps),
                std::move(bridge));
}

ExperimentReport VerifyChangeOfMeasure(const CanonicalParams& params,
                                       const TiltParams& tilt, Functional f,
                                       const ExperimentOptions& options,
                                       DiffusionConvention convention) {
  params.Validate();
  tilt.Validate();
  const std::size_t n = options.n;
  if (n < 2) throw InvalidArgument("need at least 2 replications");
  const bool want_max = f == Functional::kMax;
  std::vector<SideSample> ps(n), qs(n);
  const std::uint64_t p_root = DeriveSeed(options.seed, kUntiltedStream);
  const std::uint64_t q_root = DeriveSeed(options.seed, kTiltedStream);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    ps[r] = SampleUntilted(params, tilt.T, options.grid_level,
                           DeriveSeed(p_root, r), want_max);
    qs[r] = SampleTilted(params, tilt, options.grid_level,
                         DeriveSeed(q_root, r), want_max, convention);
  });

  double max_lw = -std::numeric_limits<double>::infinity();
  for (const auto& s : ps) max_lw = std::max(max_lw, tilt.theta * s.end);
  std::vector<double> w(n), fp(n), fq(n);
  NeumaierSum wsum, wsq, wf;
  for (std::size_t r = 0; r < n; ++r) {
    w[r] = std::exp(tilt.theta * ps[r].end - max_lw);
    fp[r] = Pick(ps[r], f);
    fq[r] = Pick(qs[r], f);
    wsum.Add(w[r]);
    wsq.Add(w[r] * w[r]);
    wf.Add(w[r] * fp[r]);
  }
  const double lhs = wf.value() / wsum.value();
  NeumaierSum dev;
  for (std::size_t r = 0; r < n; ++r) {
    const double e = w[r] * (fp[r] - lhs);
    dev.Add(e * e);
  }
  const double se_lhs = std::sqrt(dev.value()) / wsum.value();
  const MeanCI q = MeanConfidence(fq);
  const double se = std::hypot(se_lhs, q.se);
  const double z = se > 0.0 ? (lhs - q.mean) / se : 0.0;
  const double ess = wsum.value() * wsum.value() / wsq.value();

  ExperimentReport rep;
  rep.name = "tilt-check";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = n;
  rep.Set("theta", tilt.theta);
  rep.Set("T", tilt.T);
  rep.Set("lhs", lhs);
  rep.Set("rhs", q.mean);
  rep.Set("se_lhs", se_lhs);
  rep.Set("se_rhs", q.se);
  rep.Set("z", z);
  rep.Set("ess", ess);
  rep.Set("log_mgf", LogMgf(params, tilt.T, tilt.theta));
  rep.Set("log_mgf_mc",
          max_lw + std::log(wsum.value() / static_cast<double>(n)));
  rep.Set("mean_alpha_theta", MeanAlphaTheta(params, tilt, convention));
  rep.labels["functional"] = ToString(f);
  rep.labels["convention"] = ToString(convention);
  rep.labels["key_statistic"] = "z";
  const bool degenerate = ess < 100.0;
  if (degenerate) {
    rep.labels["flag"] = "degenerate_weights";
    rep.notes.push_back("effective sample size below 100");
  }
  rep.verdict = !degenerate && std::abs(z) <= 3.0;
  rep.table.header = {"replication", "f_untilted", "log_weight", "f_tilted"};
  for (std::size_t r = 0; r < n; ++r) {
    rep.table.rows.push_back({static_cast<double>(r), fp[r],
                              tilt.theta * ps[r].end, fq[r]});
  }
  return rep;
}

OneJumpOracle OneJumpValueAtT(double theta, double T) {
  // X_T = 1 - T with probability T, -T otherwise.
  const double up = 1.0 - T, down = -T;
  const double m0 = T * std::exp(theta * up) + (1.0 - T) * std::exp(theta * down);
  const double m1 = T * up * std::exp(theta * up) +
                    (1.0 - T) * down * std::exp(theta * down);
  OneJumpOracle o;
  o.lhs = m1 / m0;
  o.rhs = TiltProbability(1.0, theta, T) - T;
  return o;
}

ExperimentReport MgfMonteCarloCheck(const CanonicalParams& params, double t,
                                    double theta,
                                    const ExperimentOptions& options) {
  params.Validate();
  const auto betas = params.MaterializeBetas();
  std::vector<double> y(options.n);
  ParallelFor(options.n, options.workers, [&](std::size_t r) {
    Rng rng(DeriveSeed(options.seed, r));
    y[r] = std::exp(theta * SampleValueAt(params, betas, t, rng));
  });
  const MeanCI ci = MeanConfidence(y);
  const double exact = Mgf(params, t, theta);
  ExperimentReport rep;
  rep.name = "mgf-check";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = options.n;
  rep.Set("t", t);
  rep.Set("theta", theta);
  rep.Set("mgf", exact);
  rep.Set("mc_mean", ci.mean);
  rep.Set("se", ci.se);
  rep.Set("z", ci.se > 0.0 ? (ci.mean - exact) / ci.se : 0.0);
  rep.labels["key_statistic"] = "z";
  rep.verdict = std::abs(rep.Get("z")) <= 3.0;
  rep.table.header = {"replication", "exp_theta_x"};
  for (std::size_t r = 0; r < options.n; ++r) {
    rep.table.rows.push_back({static_cast<double>(r), y[r]});
  }
  return rep;
}

ExperimentReport ArbitrateDiffusionConvention(
    double sigma, const TiltParams& tilt, const ExperimentOptions& options) {
  tilt.Validate();
  if (!(sigma > 0.0)) throw InvalidArgument("arbitration needs sigma > 0");
  CanonicalParams params;
  params.sigma = sigma;
  const std::size_t n = options.n;
  std::vector<SideSample> ps(n), qe(n), ql(n);
  const std::uint64_t p_root = DeriveSeed(options.seed, kUntiltedStream);
  const std::uint64_t q_root = DeriveSeed(options.seed, kTiltedStream);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    ps[r] = SampleUntilted(params, tilt.T, options.grid_level,
                           DeriveSeed(p_root, r), true);
    qe[r] = SampleTilted(params, tilt, options.grid_level,
                         DeriveSeed(q_root, r), true,
                         DiffusionConvention::kExact);
    ql[r] = SampleTilted(params, tilt, options.grid_level,
                         DeriveSeed(q_root, r), true,
                         DiffusionConvention::kLiteral);
  });
  double max_lw = -std::numeric_limits<double>::infinity();
  for (const auto& s : ps) max_lw = std::max(max_lw, tilt.theta * s.end);
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) {
    w[r] = std::exp(tilt.theta * ps[r].end - max_lw);
  }
  ExperimentReport rep;
  rep.name = "tilt-arbitrate";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = n;
  rep.Set("sigma", sigma);
  rep.Set("theta", tilt.theta);
  rep.Set("T", tilt.T);
  const Functional fs[] = {Functional::kValueHalf, Functional::kValueEnd,
                           Functional::kMax};
  const char* names[] = {"half", "end", "max"};
  double min_exact = 1.0, min_literal = 1.0;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> a(n), be(n), bl(n);
    for (std::size_t r = 0; r < n; ++r) {
      a[r] = Pick(ps[r], fs[k]);
      be[r] = Pick(qe[r], fs[k]);
      bl[r] = Pick(ql[r], fs[k]);
    }
    const KSResult ke = KSTwoSampleWeighted(a, w, be);
    const KSResult kl = KSTwoSampleWeighted(a, w, bl);
    rep.Set(std::string("ks_exact_") + names[k], ke.statistic);
    rep.Set(std::string("p_exact_") + names[k], ke.p_value);
    rep.Set(std::string("ks_literal_") + names[k], kl.statistic);
    rep.Set(std::string("p_literal_") + names[k], kl.p_value);
    min_exact = std::min(min_exact, ke.p_value);
    min_literal = std::min(min_literal, kl.p_value);
  }
  rep.Set("min_p_exact", min_exact);
  rep.Set("min_p_literal", min_literal);
  const bool exact_ok = min_exact > 0.005;
  const bool literal_ok = min_literal > 0.005;
  rep.labels["selected"] =
      (exact_ok != literal_ok) ? (exact_ok ? "exact" : "literal")
                               : (min_exact >= min_literal ? "exact" : "literal");
  rep.labels["key_statistic"] = "min_p_exact";
  // Decisive only when exactly one candidate survives.
  rep.verdict = exact_ok != literal_ok;
  return rep;
}

ExperimentReport LowerBoundCheck(const CanonicalParams& params,
                                 std::span<const double> ts,
                                 const ExperimentOptions& options) {
  params.Validate();
  if (params.alpha != 0.0) throw InvalidArgument("lower bound needs alpha = 0");
  const auto betas = params.MaterializeBetas();
  for (double b : betas) {
    if (b > 0.0) throw InvalidArgument("lower bound needs no positive jumps");
  }
  ExperimentReport rep;
  rep.name = "lower-bound";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = options.n;
  rep.verdict = true;
  rep.table.header = {"t", "fraction_nonnegative", "se"};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    if (!(t > 0.0 && t <= 0.5)) throw InvalidArgument("t must lie in (0,1/2]");
    std::vector<unsigned char> hit(options.n);
    const std::uint64_t root = DeriveSeed(options.seed, k);
    ParallelFor(options.n, options.workers, [&](std::size_t r) {
      Rng rng(DeriveSeed(root, r));
      hit[r] = SampleValueAt(params, betas, t, rng) >= 0.0 ? 1 : 0;
    });
    double count = 0.0;
    for (unsigned char h : hit) count += h;
    const double p = count / static_cast<double>(options.n);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(options.n));
    const std::string key = "t=" + FormatLabel(t);
    rep.Set("p_" + key, p);
    rep.Set("se_" + key, se);
    rep.table.rows.push_back({t, p, se});
    if (!(p >= 1.0 / 16.0 - 3.0 * se)) rep.verdict = false;
  }
  rep.Set("bound", 1.0 / 16.0);
  return rep;
}

}  // namespace eitk
