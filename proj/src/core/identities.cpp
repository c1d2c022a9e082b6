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

#include "eitk/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/special_functions/legendre.hpp>

#include "eitk/minorant.hpp"
#include "eitk/path.hpp"
#include "eitk/stats.hpp"
#include "eitk/transforms.hpp"

namespace eitk {
namespace {

constexpr double kLawScale = 1073741824.0;  // 2^30

using StateLaw = std::map<std::pair<long long, long long>, double>;

// Law of (S_n, max_{k<=n} S_k).
StateLaw WalkMaxLaw(const WalkSpec& walk) {
  StateLaw cur{{{0, 0}, 1.0}};
  for (int k = 0; k < walk.n; ++k) {
    StateLaw next;
    for (const auto& [state, p] : cur) {
      for (std::size_t j = 0; j < walk.values.size(); ++j) {
        const long long s = state.first + LawKey(walk.values[j]);
        next[{s, std::max(state.second, s)}] += p * walk.probs[j];
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Law Convolve(const Law& a, const Law& b) {
  Law out;
  for (const auto& [x, p] : a) {
    for (const auto& [y, q] : b) out[x + y] += p * q;
  }
  return out;
}

// Laws of S_1..S_n.
std::vector<Law> WalkMarginals(const WalkSpec& walk) {
  Law step;
  for (std::size_t j = 0; j < walk.values.size(); ++j) {
    step[LawKey(walk.values[j])] += walk.probs[j];
  }
  std::vector<Law> out;
  Law cur{{0, 1.0}};
  for (int k = 0; k < walk.n; ++k) {
    cur = Convolve(cur, step);
    out.push_back(cur);
  }
  return out;
}

double PositiveMean(const Law& law) {
  NeumaierSum s;
  for (const auto& [x, p] : law) {
    if (x > 0) s.Add(LawKeyValue(x) * p);
  }
  return s.value();
}

Law PositivePart(const Law& law) {
  Law out;
  for (const auto& [x, p] : law) out[std::max<long long>(x, 0)] += p;
  return out;
}

void Compositions(int remaining, double prob, const Law& acc,
                  const std::vector<Law>& pos, Law& out) {
  if (remaining == 0) {
    for (const auto& [x, p] : acc) out[x] += prob * p;
    return;
  }
  for (int l = 1; l <= remaining; ++l) {
    Compositions(remaining - l, prob / remaining,
                 Convolve(acc, pos[static_cast<std::size_t>(l - 1)]), pos, out);
  }
}

std::uint64_t ReplicationSeed(std::uint64_t seed, std::uint64_t stream,
                              std::size_t r) {
  return DeriveSeed(DeriveSeed(seed, stream), r);
}

double FisherZ(double r1, double r2, std::size_t n1, std::size_t n2) {
  auto clip = [](double r) { return std::clamp(r, -0.999999, 0.999999); };
  const double se = std::sqrt(1.0 / (static_cast<double>(n1) - 3.0) +
                              1.0 / (static_cast<double>(n2) - 3.0));
  return (std::atanh(clip(r1)) - std::atanh(clip(r2))) / se;
}

double Correlation(std::span<const double> x, std::span<const double> y) {
  const double mx = Mean(x), my = Mean(y);
  NeumaierSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.Add((x[i] - mx) * (y[i] - my));
    sxx.Add((x[i] - mx) * (x[i] - mx));
    syy.Add((y[i] - my) * (y[i] - my));
  }
  const double d = std::sqrt(sxx.value() * syy.value());
  return d > 0.0 ? sxy.value() / d : 0.0;
}

double ContactScaleFor(const CanonicalParams& params, int level) {
  // Jump-only skeleta are exact, so contact needs only rounding slack.
  return params.sigma == 0.0 ? 1e-9 : DefaultContactScale(level);
}

ExperimentReport NewReport(const std::string& name,
                           const CanonicalParams* params,
                           const ExperimentOptions& options) {
  ExperimentReport rep;
  rep.name = name;
  rep.params_hash = params != nullptr ? ParamsHash(*params) : 0;
  rep.seed = options.seed;
  rep.n = options.n;
  return rep;
}

}  // namespace

void WalkSpec::Validate() const {
  if (n < 1) throw InvalidArgument("walk needs n >= 1");
  if (values.empty() || values.size() != probs.size()) {
    throw InvalidArgument("walk step values and probabilities must match");
  }
  double s = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw InvalidArgument("step probabilities must be >= 0");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    throw InvalidArgument("step probabilities must sum to 1");
  }
}

long long LawKey(double x) { return std::llround(x * kLawScale); }
double LawKeyValue(long long key) { return static_cast<double>(key) / kLawScale; }

double TotalVariation(const Law& a, const Law& b) {
  NeumaierSum s;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s.Add(std::abs(ia->second));
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s.Add(std::abs(ib->second));
      ++ib;
    } else {
      s.Add(std::abs(ia->second - ib->second));
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s.value();
}

Pair SpitzerDiscrete(const WalkSpec& walk) {
  walk.Validate();
  if (walk.n > 20) {
    throw InvalidArgument("exact Spitzer evaluation needs n <= 20");
  }
  Pair out;
  NeumaierSum lhs;
  for (const auto& [state, p] : WalkMaxLaw(walk)) {
    lhs.Add(LawKeyValue(state.second) * p);
  }
  out.lhs = lhs.value();
  const auto marg = WalkMarginals(walk);
  NeumaierSum rhs;
  for (std::size_t k = 0; k < marg.size(); ++k) {
    rhs.Add(PositiveMean(marg[k]) / static_cast<double>(k + 1));
  }
  out.rhs = rhs.value();
  return out;
}

ExperimentReport SpitzerReport(const WalkSpec& walk,
                               const ExperimentOptions& options) {
  walk.Validate();
  ExperimentReport rep = NewReport("identity-spitzer", nullptr, options);
  rep.Set("walk_n", walk.n);
  rep.labels["key_statistic"] = "abs_diff";
  if (walk.n <= 20) {
    const Pair p = SpitzerDiscrete(walk);
    rep.n = 0;
    rep.labels["method"] = "exact";
    rep.Set("lhs", p.lhs);
    rep.Set("rhs", p.rhs);
    rep.Set("abs_diff", std::abs(p.lhs - p.rhs));
    rep.verdict = std::abs(p.lhs - p.rhs) <= 1e-12;
    return rep;
  }
  // Monte Carlo left side, exact right side from the marginal laws.
  std::vector<double> m(options.n);
  ParallelFor(options.n, options.workers, [&](std::size_t r) {
    Rng rng(DeriveSeed(options.seed, r));
    double s = 0.0, best = 0.0;
    for (int k = 0; k < walk.n; ++k) {
      double u = rng.Uniform(), acc = 0.0;
      std::size_t j = 0;
      while (j + 1 < walk.probs.size() && u > acc + walk.probs[j]) {
        acc += walk.probs[j];
        ++j;
      }
      s += walk.values[j];
      best = std::max(best, s);
    }
    m[r] = best;
  });
  const MeanCI ci = MeanConfidence(m);
  NeumaierSum rhs;
  const auto marg = WalkMarginals(walk);
  for (std::size_t k = 0; k < marg.size(); ++k) {
    rhs.Add(PositiveMean(marg[k]) / static_cast<double>(k + 1));
  }
  rep.labels["method"] = "monte_carlo";
  rep.Set("lhs", ci.mean);
  rep.Set("rhs", rhs.value());
  rep.Set("se", ci.se);
  rep.Set("abs_diff", std::abs(ci.mean - rhs.value()));
  rep.Set("z", (ci.mean - rhs.value()) / ci.se);
  rep.verdict = std::abs(rep.Get("z")) <= 3.0;
  return rep;
}

LawPair StickbreakMaxDiscrete(const WalkSpec& walk) {
  walk.Validate();
  if (walk.n > 12) throw InvalidArgument("stick-breaking law needs n <= 12");
  LawPair out;
  for (const auto& [state, p] : WalkMaxLaw(walk)) out.lhs[state.second] += p;
  const auto marg = WalkMarginals(walk);
  std::vector<Law> pos;
  for (const Law& l : marg) pos.push_back(PositivePart(l));
  Compositions(walk.n, 1.0, Law{{0, 1.0}}, pos, out.rhs);
  out.tv = TotalVariation(out.lhs, out.rhs);
  return out;
}

ExperimentReport StickmaxReport(const WalkSpec& walk) {
  const LawPair lp = StickbreakMaxDiscrete(walk);
  ExperimentOptions none;
  none.n = 0;
  ExperimentReport rep = NewReport("identity-stickmax", nullptr, none);
  rep.Set("walk_n", walk.n);
  rep.Set("tv", lp.tv);
  rep.labels["key_statistic"] = "tv";
  rep.verdict = lp.tv <= 1e-12;
  rep.table.header = {"value", "p_max", "p_stick"};
  Law keys = lp.lhs;
  for (const auto& [k, p] : lp.rhs) keys[k] += 0.0;
  for (const auto& [k, unused] : keys) {
    const auto a = lp.lhs.find(k);
    const auto b = lp.rhs.find(k);
    rep.table.rows.push_back({LawKeyValue(k), a == lp.lhs.end() ? 0.0 : a->second,
                              b == lp.rhs.end() ? 0.0 : b->second});
  }
  return rep;
}

double ExpectedNegativePart(const CanonicalParams& params, double l,
                            std::size_t inner, std::uint64_t seed,
                            int exact_jump_limit) {
  if (!(l > 0.0 && l < 1.0)) throw InvalidArgument("l must lie in (0,1)");
  const auto betas = params.MaterializeBetas();
  const double s = params.sigma * std::sqrt(l * (1.0 - l));
  auto neg = [s](double mu) {
    if (s == 0.0) return std::min(mu, 0.0);
    return mu * NormalCdf(-mu / s) - s * NormalPdf(mu / s);
  };
  if (betas.size() <= static_cast<std::size_t>(exact_jump_limit)) {
    const std::size_t m = betas.size();
    NeumaierSum total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      double mu = params.alpha * l, prob = 1.0;
      for (std::size_t j = 0; j < m; ++j) {
        const bool in = (mask >> j) & 1;
        mu += betas[j] * ((in ? 1.0 : 0.0) - l);
        prob *= in ? l : 1.0 - l;
      }
      total.Add(prob * neg(mu));
    }
    return total.value();
  }
  Rng rng(seed);
  NeumaierSum total;
  for (std::size_t k = 0; k < inner; ++k) {
    double mu = params.alpha * l, sum = 0.0, hit = 0.0;
    for (double b : betas) {
      sum += b;
      if (rng.Uniform() <= l) hit += b;
    }
    mu += hit - l * sum;
    total.Add(neg(mu));
  }
  return total.value() / static_cast<double>(inner);
}

double KacQuadrature(const CanonicalParams& params, int quad_points,
                     std::size_t inner, std::uint64_t seed) {
  if (quad_points < 2) throw InvalidArgument("need at least 2 nodes");
  const auto zeros =
      boost::math::legendre_p_zeros<double>(quad_points);
  std::vector<double> nodes, weights;
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime(quad_points, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes.push_back(x);
    weights.push_back(w);
    if (x != 0.0) {
      nodes.push_back(-x);
      weights.push_back(w);
    }
  }
  NeumaierSum s;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double phi = 0.25 * M_PI * (nodes[k] + 1.0);
    const double sn = std::sin(phi), cs = std::cos(phi);
    const double l = sn * sn;
    const double e = ExpectedNegativePart(params, l, inner, DeriveSeed(seed, k));
    s.Add(weights[k] * e * 2.0 * cs / sn);
  }
  return 0.25 * M_PI * s.value();
}

ExperimentReport KacMinContinuous(const CanonicalParams& params,
                                  int quad_points,
                                  const ExperimentOptions& options) {
  params.Validate();
  if (params.alpha != 0.0) throw InvalidArgument("Kac check needs alpha = 0");
  std::vector<double> mins(options.n);
  ParallelFor(options.n, options.workers, [&](std::size_t r) {
    const std::uint64_t s = DeriveSeed(options.seed, r);
    const EIPath path = SimulatePath(params, options.grid_level, s);
    Rng aux = Rng(s).Split(5);
    mins[r] = SampleContinuousMinimum(path, aux);
  });
  const MeanCI ci = MeanConfidence(mins);
  const double rhs =
      KacQuadrature(params, quad_points, 20000, DeriveSeed(options.seed, 0xCA));
  ExperimentReport rep = NewReport("identity-kac", &params, options);
  rep.Set("mc_mean_min", ci.mean);
  rep.Set("se", ci.se);
  rep.Set("quadrature_rhs", rhs);
  rep.Set("quad_points", quad_points);
  rep.Set("z", (ci.mean - rhs) / ci.se);
  rep.labels["key_statistic"] = "z";
  bool ok = std::abs(rep.Get("z")) <= 3.0;
  if (params.MaterializeBetas().empty()) {
    const double exact = -params.sigma * std::sqrt(M_PI / 8.0);
    rep.Set("closed_form", exact);
    rep.Set("z_closed_form", (ci.mean - exact) / ci.se);
    rep.Set("quadrature_error", std::abs(rhs - exact));
    ok = ok && std::abs(rep.Get("z_closed_form")) <= 3.0 &&
         std::abs(rhs - exact) <= 1e-3;
  }
  rep.verdict = ok;
  rep.table.header = {"replication", "min"};
  for (std::size_t r = 0; r < options.n; ++r) {
    rep.table.rows.push_back({static_cast<double>(r), mins[r]});
  }
  return rep;
}

ExperimentReport ConminJointLawTest(const CanonicalParams& params,
                                    std::size_t depth,
                                    const ExperimentOptions& options) {
  params.Validate();
  if (!Classify(params).npl) {
    throw InvalidArgument("convex minorant law test needs NPL parameters");
  }
  if (depth == 0) throw InvalidArgument("depth must be >= 1");
  const std::size_t n = options.n;
  const int level = options.grid_level;
  const double contact = ContactScaleFor(params, level);
  // Per replication: [len, inc, max] x depth for each side; NaN if missing.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> exc(n, std::vector<double>(3 * depth, nan));
  std::vector<std::vector<double>> stick(n,
                                         std::vector<double>(3 * depth, nan));
  std::vector<double> outside(n, 0.0);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    {
      const std::uint64_t s = ReplicationSeed(options.seed, 0xA, r);
      const Polyline poly = SimulatePath(params, level, s).ToPolyline();
      const ConvexMinorant c = ComputeMinorant(poly);
      const auto ivs = ExcursionSet(poly, c, contact);
      Rng v = Rng(s).Split(6);
      const Discovery disc = DiscoverExcursions(ivs, v, depth);
      outside[r] = static_cast<double>(disc.outside);
      for (std::size_t i = 0; i < disc.intervals.size(); ++i) {
        const ExcursionInterval& iv = disc.intervals[i];
        exc[r][3 * i] = iv.length;
        exc[r][3 * i + 1] = iv.increment;
        exc[r][3 * i + 2] = iv.excursion.Max();
      }
    }
    {
      const std::uint64_t s = ReplicationSeed(options.seed, 0xB, r);
      EIPath path = SimulatePath(params, level, s);
      Rng v = Rng(s).Split(6);
      std::vector<double> vs(depth);
      for (double& x : vs) x = v.Uniform();
      const StickBreaking sb = StickBreak(vs);
      if (params.sigma > 0.0) {
        Rng aux = Rng(s).Split(7);
        path = path.WithBridgeKnots(sb.points, aux);
      }
      const Polyline poly = path.ToPolyline();
      for (std::size_t i = 0; i < depth; ++i) {
        const double a = sb.points[i], b = sb.points[i + 1];
        stick[r][3 * i] = sb.lengths[i];
        stick[r][3 * i + 1] = path.Eval(b) - path.Eval(a);
        const Segment seg = SegmentOf(poly, a, b - a);
        stick[r][3 * i + 2] = KnightTransform(seg).path.Max();
      }
    }
  });

  ExperimentReport rep = NewReport("conmin", &params, options);
  rep.Set("depth", static_cast<double>(depth));
  rep.Set("contact_scale", contact);
  double min_p = 1.0;
  std::size_t tests = 0;
  const char* names[] = {"length", "increment", "max"};
  std::size_t missing = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    for (int c = 0; c < 3; ++c) {
      std::vector<double> a, b;
      for (std::size_t r = 0; r < n; ++r) {
        const double x = exc[r][3 * i + c];
        if (std::isnan(x)) {
          if (c == 0) ++missing;
          continue;
        }
        a.push_back(x);
      }
      for (std::size_t r = 0; r < n; ++r) b.push_back(stick[r][3 * i + c]);
      const KSResult ks = KSTwoSample(a, b);
      const std::string key = std::string(names[c]) + "_" + std::to_string(i + 1);
      rep.Set("ks_" + key, ks.statistic);
      rep.Set("p_" + key, ks.p_value);
      min_p = std::min(min_p, ks.p_value);
      ++tests;
    }
    // Cross-coordinate structure: corr(length, increment) on both sides.
    std::vector<double> la, ia, lb, ib;
    for (std::size_t r = 0; r < n; ++r) {
      if (!std::isnan(exc[r][3 * i])) {
        la.push_back(exc[r][3 * i]);
        ia.push_back(exc[r][3 * i + 1]);
      }
      lb.push_back(stick[r][3 * i]);
      ib.push_back(stick[r][3 * i + 1]);
    }
    const double ra = Correlation(la, ia), rb = Correlation(lb, ib);
    const std::string key = std::to_string(i + 1);
    rep.Set("corr_excursion_" + key, ra);
    rep.Set("corr_stick_" + key, rb);
    rep.Set("corr_z_" + key, FisherZ(ra, rb, la.size(), lb.size()));
  }
  std::vector<double> first;
  for (std::size_t r = 0; r < n; ++r) {
    if (!std::isnan(exc[r][0])) first.push_back(exc[r][0]);
  }
  const KSResult uni =
      KSOneSample(first, [](double x) { return std::clamp(x, 0.0, 1.0); });
  rep.Set("ks_length_1_uniform", uni.statistic);
  rep.Set("p_length_1_uniform", uni.p_value);
  min_p = std::min(min_p, uni.p_value);
  ++tests;
  rep.Set("min_p", min_p);
  rep.Set("tests", static_cast<double>(tests));
  rep.Set("missing_discoveries", static_cast<double>(missing));
  rep.Set("mean_outside_draws", Mean(outside));
  rep.labels["key_statistic"] = "min_p";
  rep.notes.push_back("each coordinate tested at 0.005; family-wise level " +
                      FormatLabel(1.0 - std::pow(1.0 - 0.005,
                                                  static_cast<double>(tests))) +
                      " under independence");
  rep.verdict = min_p > 0.005;
  rep.table.header.push_back("replication");
  for (std::size_t i = 0; i < depth; ++i) {
    for (const char* side : {"exc", "stick"}) {
      for (const char* nm : names) {
        rep.table.header.push_back(std::string(side) + "_" + nm + "_" +
                                   std::to_string(i + 1));
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row{static_cast<double>(r)};
    for (std::size_t i = 0; i < depth; ++i) {
      for (int c = 0; c < 3; ++c) row.push_back(exc[r][3 * i + c]);
      for (int c = 0; c < 3; ++c) row.push_back(stick[r][3 * i + c]);
    }
    rep.table.rows.push_back(std::move(row));
  }
  return rep;
}

ExperimentReport Transform3214Test(const CanonicalParams& params,
                                   const ExperimentOptions& options) {
  params.Validate();
  if (!Classify(params).npl) {
    throw InvalidArgument("3214 test needs NPL parameters");
  }
  const std::size_t n = options.n;
  const int level = options.grid_level;
  const double contact = ContactScaleFor(params, level);
  struct Row {
    double u = 0, dg = 0;
    double max = 0, min = 0, half = 0;
    double max_u = 0, min_u = 0, half_u = 0;
    double end = 0, end_u = 0;
    bool jumps_ok = false;
    double retries = 0;
  };
  std::vector<Row> rows(n);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    const std::uint64_t s = DeriveSeed(options.seed, r);
    const EIPath path = SimulatePath(params, level, s);
    const Polyline poly = path.ToPolyline();
    const auto ivs = ExcursionSet(poly, ComputeMinorant(poly), contact);
    Rng ur = Rng(s).Split(8);
    Row& row = rows[r];
    std::optional<Transform3214Result> res;
    for (int tries = 0; tries < 10000 && !res; ++tries) {
      row.u = ur.Uniform();
      res = Transform3214(poly, path.jumps(), ivs, row.u);
      if (!res) row.retries += 1.0;
    }
    if (!res) throw InvalidArgument("no excursion interval found");
    row.dg = res->d - res->g;
    row.max = poly.Max();
    row.min = poly.Min().min_value;
    row.half = poly.Eval(0.5);
    row.end = poly.value(poly.size() - 1);
    row.max_u = res->path.Max();
    row.min_u = res->path.Min().min_value;
    row.half_u = res->path.Eval(0.5);
    row.end_u = res->path.value(res->path.size() - 1);
    std::vector<double> a, b;
    for (const Jump& j : path.jumps()) a.push_back(j.size);
    for (const Jump& j : res->jumps) b.push_back(j.size);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    row.jumps_ok = a == b;
  });
  ExperimentReport rep = NewReport("transform-3214", &params, options);
  auto col = [&](auto f) {
    std::vector<double> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = f(rows[r]);
    return v;
  };
  struct Pairing {
    const char* name;
    std::vector<double> a, b;
  };
  const Pairing pairs[] = {
      {"length", col([](const Row& x) { return x.u; }),
       col([](const Row& x) { return x.dg; })},
      {"max", col([](const Row& x) { return x.max; }),
       col([](const Row& x) { return x.max_u; })},
      {"min", col([](const Row& x) { return x.min; }),
       col([](const Row& x) { return x.min_u; })},
      {"half", col([](const Row& x) { return x.half; }),
       col([](const Row& x) { return x.half_u; })},
  };
  double min_p = 1.0;
  for (const auto& p : pairs) {
    const KSResult ks = KSTwoSample(p.a, p.b);
    rep.Set(std::string("ks_") + p.name, ks.statistic);
    rep.Set(std::string("p_") + p.name, ks.p_value);
    min_p = std::min(min_p, ks.p_value);
  }
  std::size_t jumps_ok = 0;
  double end_diff = 0.0, retries = 0.0;
  for (const Row& row : rows) {
    jumps_ok += row.jumps_ok ? 1 : 0;
    end_diff = std::max(end_diff, std::abs(row.end - row.end_u));
    retries += row.retries;
  }
  rep.Set("min_p", min_p);
  rep.Set("jump_multiset_preserved", static_cast<double>(jumps_ok));
  rep.Set("max_abs_end_difference", end_diff);
  rep.Set("outside_draws", retries);
  rep.labels["key_statistic"] = "min_p";
  rep.verdict = min_p > 0.005 && jumps_ok == n;
  rep.table.header = {"replication", "u",     "d_minus_g", "max",  "max_u",
                      "min",         "min_u", "half",      "half_u"};
  for (std::size_t r = 0; r < n; ++r) {
    const Row& x = rows[r];
    rep.table.rows.push_back({static_cast<double>(r), x.u, x.dg, x.max,
                              x.max_u, x.min, x.min_u, x.half, x.half_u});
  }
  return rep;
}

ExperimentReport DimConditioningTest(const CanonicalParams& params,
                                     std::span<const double> eps_list,
                                     const ExperimentOptions& options) {
  params.Validate();
  if (params.alpha != 0.0) throw InvalidArgument("conditioning needs alpha = 0");
  if (eps_list.empty()) throw InvalidArgument("need at least one epsilon");
  const std::size_t n = options.n;
  const int level = options.grid_level;
  struct Functionals {
    double max = 0, half = 0, argmax = 0;
  };
  auto measure = [](const Polyline& p) {
    return Functionals{p.Max(), p.Eval(0.5), p.ArgMax()};
  };

  std::vector<Functionals> ref(n);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    const std::uint64_t s = ReplicationSeed(options.seed, 0xD0, r);
    ref[r] = measure(Vervaat(SimulatePath(params, level, s).ToPolyline()));
  });
  std::vector<double> ref_max(n), ref_half(n), ref_arg(n);
  for (std::size_t r = 0; r < n; ++r) {
    ref_max[r] = ref[r].max;
    ref_half[r] = ref[r].half;
    ref_arg[r] = ref[r].argmax;
  }

  ExperimentReport rep = NewReport("dim", &params, options);
  rep.table.header = {"eps", "replication", "max", "half", "argmax"};
  std::vector<double> ks_max;
  double final_p = 0.0;
  bool aborted = false;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const double eps = eps_list[e];
    const std::uint64_t stream = DeriveSeed(options.seed, 0xD1 + e);
    std::vector<Functionals> acc;
    acc.reserve(n);
    std::size_t proposals = 0;
    const std::size_t batch = std::max<std::size_t>(1024, n);
    while (acc.size() < n) {
      std::vector<unsigned char> ok(batch, 0);
      std::vector<Functionals> f(batch);
      ParallelFor(batch, options.workers, [&](std::size_t k) {
        const std::uint64_t s = DeriveSeed(stream, proposals + k);
        const Polyline poly = SimulatePath(params, level, s).ToPolyline();
        bool keep = true;
        if (std::isfinite(eps)) {
          Rng aux = Rng(s).Split(9);
          keep = aux.Uniform() < ProbabilityAbove(poly, params.sigma, -eps);
        }
        if (keep) {
          ok[k] = 1;
          f[k] = measure(poly);
        }
      });
      for (std::size_t k = 0; k < batch && acc.size() < n; ++k) {
        if (ok[k]) acc.push_back(f[k]);
      }
      proposals += batch;
      const double rate =
          static_cast<double>(acc.size()) / static_cast<double>(proposals);
      if (proposals >= 100000 && rate < 1e-4) {
        aborted = true;
        break;
      }
    }
    const double rate =
        static_cast<double>(acc.size()) / static_cast<double>(proposals);
    const std::string key = "eps=" + FormatLabel(eps);
    rep.Set("acceptance_" + key, rate);
    if (aborted) {
      rep.notes.push_back("acceptance below 1e-4 at " + key + "; aborted");
      break;
    }
    std::vector<double> mx, hf, am;
    for (std::size_t r = 0; r < acc.size(); ++r) {
      mx.push_back(acc[r].max);
      hf.push_back(acc[r].half);
      am.push_back(acc[r].argmax);
      rep.table.rows.push_back({eps, static_cast<double>(r), acc[r].max,
                                acc[r].half, acc[r].argmax});
    }
    const KSResult k1 = KSTwoSample(mx, ref_max);
    const KSResult k2 = KSTwoSample(hf, ref_half);
    const KSResult k3 = KSTwoSample(am, ref_arg);
    rep.Set("ks_max_" + key, k1.statistic);
    rep.Set("p_max_" + key, k1.p_value);
    rep.Set("ks_half_" + key, k2.statistic);
    rep.Set("p_half_" + key, k2.p_value);
    rep.Set("ks_argmax_" + key, k3.statistic);
    rep.Set("p_argmax_" + key, k3.p_value);
    ks_max.push_back(k1.statistic);
    final_p = k1.p_value;
  }
  rep.labels["key_statistic"] = "final_p_max";
  rep.Set("final_p_max", final_p);
  rep.verdict = !aborted && ks_max.size() == eps_list.size() &&
                ks_max.back() <= ks_max.front() && final_p > 0.005;
  return rep;
}

ExperimentReport MillarContinuityTest(const CanonicalParams& params,
                                      std::span<const int> levels,
                                      const ExperimentOptions& options) {
  params.Validate();
  const Classification cls = Classify(params);
  if (!cls.um) throw InvalidArgument("Millar test needs UM parameters");
  if (levels.empty()) throw InvalidArgument("need at least one level");
  const std::size_t n = options.n;
  const std::size_t m = levels.size();
  std::vector<double> gp(n * m), gm(n * m);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    const std::uint64_t s = DeriveSeed(options.seed, r);
    for (std::size_t k = 0; k < m; ++k) {
      const int level = levels[k];
      const CanonicalParams pl =
          params.is_power_law()
              ? params.WithMaxJumps(std::size_t{1} << std::min(level, 26))
              : params;
      const MinLocation loc =
          SimulatePath(pl, level, s).ToPolyline().Min();
      gp[r * m + k] = loc.value_at_rho - loc.min_value;
      gm[r * m + k] = loc.left_at_rho - loc.min_value;
    }
  });
  ExperimentReport rep = NewReport("millar", &params, options);
  rep.labels["variation"] = ToString(cls.variation);
  std::vector<double> med_p(m), med_m(m), frac_p(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> a(n), b(n);
    double big = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      a[r] = gp[r * m + k];
      b[r] = gm[r * m + k];
      big += a[r] > 0.1 ? 1.0 : 0.0;
    }
    med_p[k] = Median(a);
    med_m[k] = Median(b);
    frac_p[k] = big / static_cast<double>(n);
    const std::string key = "level=" + std::to_string(levels[k]);
    rep.Set("median_gap_plus_" + key, med_p[k]);
    rep.Set("median_gap_minus_" + key, med_m[k]);
    rep.Set("fraction_gap_plus_above_0.1_" + key, frac_p[k]);
  }
  constexpr double kTol = 1e-9;
  if (cls.variation == Variation::kInfinite) {
    auto shrinks = [&](const std::vector<double>& med) {
      return med.front() <= kTol || med.back() <= 0.5 * med.front();
    };
    rep.verdict = shrinks(med_p) && shrinks(med_m);
    rep.Set("shrink_ratio_plus",
            med_p.front() > 0 ? med_p.back() / med_p.front() : 0.0);
    rep.Set("shrink_ratio_minus",
            med_m.front() > 0 ? med_m.back() / med_m.front() : 0.0);
    rep.labels["key_statistic"] = "shrink_ratio_plus";
  } else {
    rep.verdict = std::all_of(frac_p.begin(), frac_p.end(),
                              [](double f) { return f >= 0.95; });
    rep.Set("min_fraction_gap_plus_above_0.1",
            *std::min_element(frac_p.begin(), frac_p.end()));
    rep.labels["key_statistic"] = "min_fraction_gap_plus_above_0.1";
  }
  rep.table.header = {"replication", "level", "gap_plus", "gap_minus"};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < m; ++k) {
      rep.table.rows.push_back({static_cast<double>(r),
                                static_cast<double>(levels[k]), gp[r * m + k],
                                gm[r * m + k]});
    }
  }
  return rep;
}

ExperimentReport SizeBiasedCheck(const ExperimentOptions& options) {
  std::vector<double> s2(options.n), s3(options.n);
  ParallelFor(options.n, options.workers, [&](std::size_t r) {
    Rng rng(DeriveSeed(options.seed, r));
    double rest = 1.0, a = 0.0, b = 0.0;
    for (int i = 0; i < 400 && rest > 1e-16; ++i) {
      const double l = rest * rng.Uniform();
      rest -= l;
      a += l * l;
      b += l * l * l;
    }
    s2[r] = a;
    s3[r] = b;
  });
  const MeanCI c2 = MeanConfidence(s2), c3 = MeanConfidence(s3);
  ExperimentReport rep = NewReport("size-biased", nullptr, options);
  rep.Set("mean_h1", c2.mean);
  rep.Set("se_h1", c2.se);
  rep.Set("z_h1", (c2.mean - 0.5) / c2.se);
  rep.Set("mean_h2", c3.mean);
  rep.Set("se_h2", c3.se);
  rep.Set("z_h2", (c3.mean - 1.0 / 3.0) / c3.se);
  rep.labels["key_statistic"] = "z_h1";
  rep.verdict = std::abs(rep.Get("z_h1")) <= 3.0 &&
                std::abs(rep.Get("z_h2")) <= 3.0;
  return rep;
}

}  // namespace eitk
