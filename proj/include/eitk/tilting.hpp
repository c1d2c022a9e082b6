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

#ifndef EITK_TILTING_HPP_
#define EITK_TILTING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eitk/params.hpp"
#include "eitk/path.hpp"
#include "eitk/report.hpp"

namespace eitk {

struct TiltParams {
  double theta = 0.0;
  double T = 0.5;

  // Throws unless T lies strictly inside (0,1) and theta is finite.
  void Validate() const;
};

// How the Brownian part looks under the tilted measure.
//
// kExact: b_T ~ N(theta sigma T(1-T), T(1-T)), the drift absorbs sigma b_T and
//   the rescaled path carries a bridge with coefficient sigma sqrt(T).
// kLiteral: deterministic theta sigma in the drift and a theta sigma-scaled
//   bridge in rescaled time. Kept for the arbitration experiment.
enum class DiffusionConvention { kExact, kLiteral };

std::string ToString(DiffusionConvention c);
DiffusionConvention ParseDiffusionConvention(const std::string& s);

// log E[e^{theta X_t}] = alpha theta t + theta^2 sigma^2 t(1-t)/2
//   + sum_j log((1-t) e^{-theta beta_j t} + t e^{theta beta_j (1-t)})
// over the kept jumps, each factor in log-sum-exp form, compensated sum.
double LogMgf(const CanonicalParams& params, double t, double theta);
double Mgf(const CanonicalParams& params, double t, double theta);

// T e^{theta beta} / (T e^{theta beta} + 1 - T), evaluated as a logistic.
double TiltProbability(double beta, double theta, double T);
std::vector<double> TiltProbabilities(const CanonicalParams& params,
                                      const TiltParams& tilt);

struct TiltedCharacteristics {
  TiltParams tilt;
  DiffusionConvention convention = DiffusionConvention::kExact;
  std::vector<double> betas;
  std::vector<double> p;
  std::vector<unsigned char> b_draws;
  std::vector<double> beta_theta;
  // Brownian endpoint under the tilt (kExact only; 0 otherwise).
  double bridge_end = 0.0;
  double alpha_theta = 0.0;
  // Bridge coefficient of the rescaled unit-time path.
  double sigma_theta = 0.0;
};

// Deterministic construction from explicit uniforms: B_j = 1{v_j <= p_j},
// z a standard normal for the Brownian endpoint. v must hold one entry per
// kept jump.
TiltedCharacteristics TiltFromUniforms(const CanonicalParams& params,
                                       const TiltParams& tilt,
                                       std::span<const double> v, double z,
                                       DiffusionConvention convention =
                                           DiffusionConvention::kExact);

TiltedCharacteristics SampleTiltedCharacteristics(
    const CanonicalParams& params, const TiltParams& tilt, std::uint64_t seed,
    DiffusionConvention convention = DiffusionConvention::kExact);

// E[alpha^theta]. Exact: alpha T + theta sigma^2 T(1-T) + T(1-T) sum_j ...;
// literal: alpha T + theta sigma + T(1-T) sum_j ....
double MeanAlphaTheta(const CanonicalParams& params, const TiltParams& tilt,
                      DiffusionConvention convention =
                          DiffusionConvention::kExact);
// sum_j beta_j^2 p_j (1 - p_j), plus sigma^2 T(1-T) for kExact.
double VarAlphaTheta(const CanonicalParams& params, const TiltParams& tilt,
                     DiffusionConvention convention =
                         DiffusionConvention::kExact);

// The tilted process on [0,T] in rescaled time s = t/T:
//   Y_s = alpha^theta s + sigma_theta b_s + sum_j beta_j B_j (1{U_j<=s} - s),
// so X^theta_t = Y_{t/T}.
EIPath SimulateTiltedPath(const CanonicalParams& params,
                          const TiltParams& tilt, int grid_level,
                          std::uint64_t seed,
                          DiffusionConvention convention =
                              DiffusionConvention::kExact);

enum class Functional { kValueHalf, kValueEnd, kMax, kPositivePart };

std::string ToString(Functional f);
Functional ParseFunctional(const std::string& s);

// Self-normalized reweighting of untilted paths against direct simulation of
// the tilted path. Pass iff |z| <= 3 and the effective sample size is >= 100.
ExperimentReport VerifyChangeOfMeasure(const CanonicalParams& params,
                                       const TiltParams& tilt, Functional f,
                                       const ExperimentOptions& options,
                                       DiffusionConvention convention =
                                           DiffusionConvention::kExact);

// One jump of size 1 at a uniform time, sigma = alpha = 0, f = X_T.
// lhs integrates over the uniform; rhs is p - T from the tilted Bernoulli.
struct OneJumpOracle {
  double lhs = 0.0;
  double rhs = 0.0;
};
OneJumpOracle OneJumpValueAtT(double theta, double T);

// Monte Carlo E[e^{theta X_t}] from exact marginal draws vs Mgf.
ExperimentReport MgfMonteCarloCheck(const CanonicalParams& params, double t,
                                    double theta,
                                    const ExperimentOptions& options);

// Pure Gaussian paths (alpha = 0, beta empty) reweighted by e^{theta X_T} and
// compared by weighted KS to each candidate tilted law on X_{T/2}, X_T and
// the maximum. The convention whose every p-value exceeds 0.005 is selected.
ExperimentReport ArbitrateDiffusionConvention(double sigma,
                                              const TiltParams& tilt,
                                              const ExperimentOptions& options);

// Empirical P(X_t >= 0) >= 1/16 - 3 SE at each t, for alpha = 0 and no
// positive jumps.
ExperimentReport LowerBoundCheck(const CanonicalParams& params,
                                 std::span<const double> ts,
                                 const ExperimentOptions& options);

}  // namespace eitk

#endif  // EITK_TILTING_HPP_
