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

#ifndef EITK_IDENTITIES_HPP_
#define EITK_IDENTITIES_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "eitk/params.hpp"
#include "eitk/report.hpp"

namespace eitk {

// Random walk with iid steps drawn from a finite law.
struct WalkSpec {
  int n = 1;
  std::vector<double> values;
  std::vector<double> probs;

  static WalkSpec Symmetric(int n) { return {n, {-1.0, 1.0}, {0.5, 0.5}}; }
  // P(+1) = p.
  static WalkSpec Biased(int n, double p) {
    return {n, {-1.0, 1.0}, {1.0 - p, p}};
  }

  // Throws unless n >= 1, the lists match, and probabilities sum to 1.
  void Validate() const;
};

// Finite law on the reals. Keys are rounded to a 2^-30 lattice so that sums
// reached along different routes coincide.
using Law = std::map<long long, double>;
double LawKeyValue(long long key);
long long LawKey(double x);
double TotalVariation(const Law& a, const Law& b);

struct Pair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// E[max_{0<=k<=n} S_k] by dynamic programming over (S_k, M_k), and
// sum_k E[S_k^+]/k from the marginal laws. Exact when n <= 20; otherwise a
// Monte Carlo estimate of the left side with `options` (rhs stays exact).
Pair SpitzerDiscrete(const WalkSpec& walk);
ExperimentReport SpitzerReport(const WalkSpec& walk,
                               const ExperimentOptions& options = {});

struct LawPair {
  Law lhs;
  Law rhs;
  double tv = 0.0;
};

// Law of max_k S_k against the law of sum_i (S_{sigma_i} - S_{sigma_{i-1}})^+
// under discrete uniform stick breaking on {1..n}. n <= 12.
LawPair StickbreakMaxDiscrete(const WalkSpec& walk);
ExperimentReport StickmaxReport(const WalkSpec& walk);

// E[min(X_l, 0)] for one l in (0,1). Exact by enumerating jump subsets when
// at most `exact_jump_limit` jumps are kept; Monte Carlo with `inner` draws
// otherwise.
double ExpectedNegativePart(const CanonicalParams& params, double l,
                            std::size_t inner, std::uint64_t seed,
                            int exact_jump_limit = 16);

// int_0^1 E[min(X_l,0)]/l dl via Gauss-Legendre in phi with l = sin^2 phi.
double KacQuadrature(const CanonicalParams& params, int quad_points,
                     std::size_t inner = 20000, std::uint64_t seed = 7);

// Monte Carlo mean of the exact continuous infimum vs KacQuadrature.
ExperimentReport KacMinContinuous(const CanonicalParams& params,
                                  int quad_points,
                                  const ExperimentOptions& options);

// Discovered excursion intervals vs stick breaking plus Knight transforms, per
// coordinate i <= depth: lengths, increments and maxima. The length of the
// first interval is also tested against Uniform(0,1).
ExperimentReport ConminJointLawTest(const CanonicalParams& params,
                                    std::size_t depth,
                                    const ExperimentOptions& options);

// (U, functionals of X) vs (d-g, functionals of X^U), plus exact jump-size
// multiset preservation in every replication.
ExperimentReport Transform3214Test(const CanonicalParams& params,
                                   const ExperimentOptions& options);

// Rejection sampling of paths with infimum > -eps (exact continuous
// conditioning given the skeleton) against Vervaat transforms.
ExperimentReport DimConditioningTest(const CanonicalParams& params,
                                     std::span<const double> eps_list,
                                     const ExperimentOptions& options);

// Gaps X_rho - min and X_{rho-} - min across refinement levels; the level
// also sets the number of kept jumps to 2^level for infinite families.
ExperimentReport MillarContinuityTest(const CanonicalParams& params,
                                      std::span<const int> levels,
                                      const ExperimentOptions& options);

// E[sum_i h(L_i) L_i] against int_0^1 h for h(s) = s and h(s) = s^2.
ExperimentReport SizeBiasedCheck(const ExperimentOptions& options);

}  // namespace eitk

#endif  // EITK_IDENTITIES_HPP_
