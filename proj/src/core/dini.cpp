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

#include "eitk/dini.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eitk/rng.hpp"
#include "eitk/stats.hpp"

namespace eitk {
namespace {

constexpr std::uint64_t kExactSumTerms = std::uint64_t{1} << 20;
constexpr std::uint64_t kIndexCap = std::uint64_t{1} << 52;

double BetaTerm(const CanonicalParams& params, std::uint64_t i) {
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    return list->values[i - 1];
  }
  return std::get<PowerLawBetas>(params.betas).Term(i);
}

std::uint64_t FamilySize(const CanonicalParams& params) {
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    return list->values.size();
  }
  return kIndexCap;
}

struct Landing {
  std::uint64_t index;
  double size;
  double u;
};

}  // namespace

DiniDiagnostics RunningExtremes(const std::vector<double>& quotients) {
  DiniDiagnostics d;
  d.depth = static_cast<int>(quotients.size());
  double hi = -INFINITY, lo = INFINITY;
  for (double q : quotients) {
    hi = std::max(hi, q);
    lo = std::min(lo, q);
    d.running_sup.push_back(hi);
    d.running_inf.push_back(lo);
  }
  return d;
}

double BetaPartialSum(const CanonicalParams& params, std::uint64_t n) {
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    NeumaierSum s;
    for (std::uint64_t i = 0; i < std::min<std::uint64_t>(n, list->values.size());
         ++i) {
      s.Add(list->values[i]);
    }
    return s.value();
  }
  const auto& pl = std::get<PowerLawBetas>(params.betas);
  const std::uint64_t m = std::min(n, kExactSumTerms);
  NeumaierSum s;
  for (std::uint64_t i = 1; i <= m; ++i) s.Add(pl.Term(i));
  if (n <= m) return s.value();
  // Euler-Maclaurin on (m, n] for f(x) = c x^-p.
  const double a = static_cast<double>(m), b = static_cast<double>(n);
  auto f = [&](double x) { return pl.c * std::pow(x, -pl.p); };
  auto df = [&](double x) { return -pl.p * pl.c * std::pow(x, -pl.p - 1.0); };
  if (pl.signs == SignPattern::kAlternating) {
    // Boole summation: sum_{i=a+1}^{b} (-1)^i f(i) to first order.
    const double sa = ((m + 1) % 2 == 0) ? 1.0 : -1.0;
    const double sb = (n % 2 == 0) ? 1.0 : -1.0;
    s.Add(0.5 * (sa * f(a + 1.0) + sb * f(b)));
    return s.value();
  }
  double integral = std::abs(pl.p - 1.0) < 1e-15
                        ? pl.c * std::log(b / a)
                        : pl.c * (std::pow(b, 1.0 - pl.p) -
                                  std::pow(a, 1.0 - pl.p)) /
                              (1.0 - pl.p);
  double tail = integral + 0.5 * (f(b) - f(a)) + (df(b) - df(a)) / 12.0;
  if (pl.signs == SignPattern::kNegative) tail = -tail;
  s.Add(tail);
  return s.value();
}

std::uint64_t DiniTruncationIndex(const CanonicalParams& params, double bound) {
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    std::uint64_t n = list->values.size();
    while (n > 0 && params.TailSquareBound(n - 1) <= bound) --n;
    return n;
  }
  const auto& pl = std::get<PowerLawBetas>(params.betas);
  const double q = 2.0 * pl.p;
  const double raw =
      std::pow(pl.c * pl.c / ((q - 1.0) * bound), 1.0 / (q - 1.0));
  if (!(raw < static_cast<double>(kIndexCap))) return kIndexCap;
  std::uint64_t n = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(raw)));
  while (params.TailSquareBound(n) > bound) ++n;
  return n;
}

DiniPlan MakeDiniPlan(const CanonicalParams& params, int K, double eps) {
  if (K < 1 || K > 60) throw InvalidArgument("K must lie in [1,60]");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  DiniPlan plan;
  plan.K = K;
  plan.h.assign(K + 1, 1.0);
  plan.index.assign(K + 1, 0);
  plan.compensator.assign(K + 1, 0.0);
  const std::uint64_t family = FamilySize(params);
  for (int k = 1; k <= K; ++k) {
    plan.h[k] = std::ldexp(1.0, -k);
    plan.index[k] = std::max(
        plan.index[k - 1],
        std::min(family, DiniTruncationIndex(params, eps * eps * plan.h[k])));
    plan.compensator[k] = BetaPartialSum(params, plan.index[k]);
  }
  if (plan.index[1] > kMaxMaterializedJumps) {
    throw InvalidArgument("too many exact jumps at the coarsest scale");
  }
  return plan;
}

DiniSample SampleDiniQuotients(const CanonicalParams& params, int K,
                               double eps, std::uint64_t seed) {
  return SampleDiniQuotients(params, MakeDiniPlan(params, K, eps), seed);
}

DiniSample SampleDiniQuotients(const CanonicalParams& params,
                               const DiniPlan& plan, std::uint64_t seed) {
  const Rng root(seed);
  const int K = plan.K;
  const auto& h = plan.h;
  const auto& idx = plan.index;
  std::vector<Landing> landings;
  {
    Rng r = root.Split(1);
    for (std::uint64_t i = 1; i <= idx[1]; ++i) {
      landings.push_back({i, BetaTerm(params, i), r.Uniform()});
    }
  }
  for (int k = 2; k <= K; ++k) {
    Rng r = root.Split(10 + static_cast<std::uint64_t>(k));
    const double q = 2.0 * h[k];
    std::uint64_t i = idx[k - 1];
    while (true) {
      const std::uint64_t skip = r.Geometric(q);
      if (skip >= idx[k] - i) break;
      i += skip + 1;
      const double w = r.Uniform() * q;
      const double u = w < h[k] ? w : 1.0 - (w - h[k]);
      landings.push_back({i, BetaTerm(params, i), u});
    }
  }

  std::vector<double> b_right(K + 1, 0.0), b_left(K + 1, 0.0);
  if (params.sigma > 0.0) {
    Rng r = root.Split(2);
    b_right[1] = b_left[1] = 0.5 * r.Normal();
    for (int k = 1; k < K; ++k) {
      const double sd = 0.5 * std::sqrt(h[k]);
      b_right[k + 1] = 0.5 * b_right[k] + sd * r.Normal();
      b_left[k + 1] = 0.5 * b_left[k] + sd * r.Normal();
    }
  }

  DiniSample out;
  for (int m = 1; m <= K; ++m) {
    NeumaierSum jr, jl;
    for (const Landing& l : landings) {
      if (l.index > idx[m]) continue;
      if (l.u <= h[m]) jr.Add(l.size);
      if (l.u >= 1.0 - h[m]) jl.Add(l.size);
    }
    const double drift = params.alpha - plan.compensator[m];
    out.right.push_back(drift +
                        (params.sigma * b_right[m] + jr.value()) / h[m]);
    out.left.push_back(drift +
                       (-params.sigma * b_left[m] + jl.value()) / h[m]);
  }
  return out;
}

ExperimentReport DiniDivergenceDiag(const CanonicalParams& params,
                                    const DiniOptions& dini,
                                    const ExperimentOptions& options) {
  params.Validate();
  if (dini.thresholds.empty()) throw InvalidArgument("need a threshold");
  const Classification cls = Classify(params);
  const std::size_t n = options.n;
  const int K = dini.K;
  const DiniPlan plan = MakeDiniPlan(params, K, dini.eps);
  std::vector<DiniSample> samples(n);
  ParallelFor(n, options.workers, [&](std::size_t r) {
    samples[r] = SampleDiniQuotients(params, plan, DeriveSeed(options.seed, r));
  });

  ExperimentReport rep;
  rep.name = "dini";
  rep.params_hash = ParamsHash(params);
  rep.seed = options.seed;
  rep.n = n;
  rep.labels["variation"] = ToString(cls.variation);
  rep.Set("K", K);
  rep.Set("eps", dini.eps);

  std::vector<DiniDiagnostics> right(n), left(n);
  for (std::size_t r = 0; r < n; ++r) {
    right[r] = RunningExtremes(samples[r].right);
    left[r] = RunningExtremes(samples[r].left);
  }
  const double dn = static_cast<double>(n);
  auto fraction = [&](const std::vector<DiniDiagnostics>& d, int k, double M,
                      bool sup) {
    double c = 0.0;
    for (const auto& x : d) {
      c += sup ? (x.running_sup[k - 1] > M ? 1.0 : 0.0)
               : (x.running_inf[k - 1] < -M ? 1.0 : 0.0);
    }
    return c / dn;
  };
  double min_first = 1.0;
  for (std::size_t t = 0; t < dini.thresholds.size(); ++t) {
    const double M = dini.thresholds[t];
    const std::string m = "M=" + FormatLabel(M);
    const double fs_r = fraction(right, K, M, true);
    const double fi_r = fraction(right, K, M, false);
    const double fs_l = fraction(left, K, M, true);
    const double fi_l = fraction(left, K, M, false);
    rep.Set("fraction_sup_right_" + m, fs_r);
    rep.Set("fraction_inf_right_" + m, fi_r);
    rep.Set("fraction_sup_left_" + m, fs_l);
    rep.Set("fraction_inf_left_" + m, fi_l);
    if (t == 0) min_first = std::min({fs_r, fi_r, fs_l, fi_l});
  }
  const double alpha_tilde = params.FiniteVariationDrift();
  rep.table.header = {"k"};
  for (double M : dini.thresholds) {
    for (const char* nm : {"sup_right", "inf_right", "sup_left", "inf_left"}) {
      rep.table.header.push_back(std::string("fraction_") + nm + "_M=" +
                                 FormatLabel(M));
    }
  }
  for (int k = 1; k <= K; ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (double M : dini.thresholds) {
      row.push_back(fraction(right, k, M, true));
      row.push_back(fraction(right, k, M, false));
      row.push_back(fraction(left, k, M, true));
      row.push_back(fraction(left, k, M, false));
    }
    rep.table.rows.push_back(std::move(row));
  }
  if (cls.variation == Variation::kInfinite) {
    rep.Set("min_fraction", min_first);
    rep.labels["key_statistic"] = "min_fraction";
    rep.verdict = min_first >= 0.99;
  } else {
    std::size_t bad = 0;
    double worst = 0.0;
    for (const DiniSample& s : samples) {
      const double e = std::max(std::abs(s.right.back() - alpha_tilde),
                                std::abs(s.left.back() - alpha_tilde));
      worst = std::max(worst, e);
      bad += e <= dini.control_tol ? 0 : 1;
    }
    rep.Set("drift", alpha_tilde);
    rep.Set("control_failures", static_cast<double>(bad));
    rep.Set("control_failure_rate", static_cast<double>(bad) / dn);
    rep.Set("max_abs_deviation", worst);
    rep.labels["key_statistic"] = "control_failure_rate";
    rep.verdict = static_cast<double>(bad) <= dn * std::ldexp(1.0, -19);
  }
  return rep;
}

}  // namespace eitk
