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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "eitk/rng.hpp"
#include "eitk/stats.hpp"
#include "eitk/tilting.hpp"

namespace eitk {
namespace {

CanonicalParams List(double alpha, double sigma, std::vector<double> b) {
  CanonicalParams p;
  p.alpha = alpha;
  p.sigma = sigma;
  p.betas = BetaList{std::move(b)};
  return p;
}

const CanonicalParams kTen =
    List(0.3, 0.7, {1, -0.8, 0.6, -0.5, 0.45, -0.4, 0.35, -0.3, 0.25, -0.2});

TEST(TiltParamsTest, Validation) {
  EXPECT_THROW((TiltParams{1.0, 0.0}.Validate()), InvalidArgument);
  EXPECT_THROW((TiltParams{1.0, 1.0}.Validate()), InvalidArgument);
  EXPECT_THROW((TiltParams{NAN, 0.5}.Validate()), InvalidArgument);
  EXPECT_NO_THROW((TiltParams{-2.0, 0.3}.Validate()));
}

TEST(MgfTest, OneJumpIsHyperbolicCosine) {
  EXPECT_NEAR(Mgf(List(0, 0, {1.0}), 0.5, 1.0), std::cosh(0.5), 1e-12);
}

TEST(MgfTest, GaussianClosedForm) {
  const double t = 0.3, th = 1.7;
  EXPECT_NEAR(LogMgf(List(0.4, 1.2, {}), t, th),
              0.4 * th * t + th * th * 1.44 * t * (1 - t) / 2, 1e-14);
}

TEST(MgfTest, ZeroThetaIsOne) {
  EXPECT_NEAR(LogMgf(kTen, 0.37, 0.0), 0.0, 1e-15);
}

TEST(MgfTest, StableForLargeTheta) {
  const double v = LogMgf(List(0, 0, {1.0}), 0.5, 2000.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1000.0 + std::log(0.5), 1e-9);
}

TEST(TiltTest, ProbabilityIsLogistic) {
  const double beta = 0.7, th = 1.3, T = 0.25;
  const double e = T * std::exp(th * beta);
  EXPECT_NEAR(TiltProbability(beta, th, T), e / (e + 1 - T), 1e-15);
  EXPECT_DOUBLE_EQ(TiltProbability(beta, 0.0, T), T);
  EXPECT_NEAR(TiltProbability(1.0, 800.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(TiltProbability(1.0, -800.0, 0.5), 0.0, 1e-15);
}

TEST(TiltTest, MeanAlphaThetaIsDerivativeOfLogMgf) {
  for (double th : {-2.0, 0.0, 1.0}) {
    const TiltParams tilt{th, 0.4};
    const double h = 1e-5;
    const double fd =
        (LogMgf(kTen, 0.4, th + h) - LogMgf(kTen, 0.4, th - h)) / (2 * h);
    EXPECT_NEAR(MeanAlphaTheta(kTen, tilt), fd, 1e-7) << th;
  }
}

TEST(TiltTest, VarianceIsSecondDerivative) {
  const TiltParams tilt{0.8, 0.4};
  const double h = 1e-4;
  const double d2 = (LogMgf(kTen, 0.4, 0.8 + h) - 2 * LogMgf(kTen, 0.4, 0.8) +
                     LogMgf(kTen, 0.4, 0.8 - h)) /
                    (h * h);
  EXPECT_NEAR(VarAlphaTheta(kTen, tilt), d2, 1e-5);
}

TEST(TiltTest, ZeroThetaKeepsLaw) {
  const TiltParams tilt{0.0, 0.3};
  for (double p : TiltProbabilities(kTen, tilt)) EXPECT_DOUBLE_EQ(p, 0.3);
  EXPECT_NEAR(MeanAlphaTheta(kTen, tilt), 0.3 * 0.3, 1e-15);
}

TEST(TiltTest, FromUniformsIsDeterministic) {
  const TiltParams tilt{1.0, 0.5};
  std::vector<double> v(10, 0.5);
  const TiltedCharacteristics c = TiltFromUniforms(kTen, tilt, v, 0.0);
  const std::vector<double> p = TiltProbabilities(kTen, tilt);
  const std::vector<double> b = kTen.MaterializeBetas();
  double drift = 0.3 * 0.5 + 0.7 * c.bridge_end;
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_EQ(c.b_draws[j], 0.5 <= p[j] ? 1 : 0);
    drift += b[j] * (c.b_draws[j] - 0.5);
  }
  EXPECT_NEAR(c.bridge_end, 0.7 * 0.25, 1e-15);
  EXPECT_NEAR(c.alpha_theta, drift, 1e-14);
  EXPECT_NEAR(c.sigma_theta, 0.7 * std::sqrt(0.5), 1e-15);
  EXPECT_THROW(TiltFromUniforms(kTen, tilt, std::vector<double>(3, 0.5), 0.0),
               InvalidArgument);
}

TEST(TiltTest, SampledAlphaThetaMean) {
  const TiltParams tilt{-2.0, 0.5};
  std::vector<double> a;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    a.push_back(SampleTiltedCharacteristics(kTen, tilt, DeriveSeed(11, s))
                    .alpha_theta);
  }
  const MeanCI ci = MeanConfidence(a);
  EXPECT_NEAR(ci.mean, MeanAlphaTheta(kTen, tilt), 4 * ci.se);
  EXPECT_NEAR(ci.sd * ci.sd, VarAlphaTheta(kTen, tilt),
              0.05 * VarAlphaTheta(kTen, tilt));
}

TEST(TiltTest, TiltedPathEndsAtAlphaTheta) {
  const TiltParams tilt{1.0, 0.5};
  const EIPath p = SimulateTiltedPath(kTen, tilt, 6, 3);
  const TiltedCharacteristics c = SampleTiltedCharacteristics(kTen, tilt, Rng(3).Split(1).seed());
  EXPECT_NEAR(p.Eval(1.0), c.alpha_theta, 1e-12);
}

TEST(OneJumpTest, OracleAgrees) {
  for (double th : {-2.0, 0.5, 1.0, 3.0}) {
    for (double T : {0.2, 0.5, 0.9}) {
      const OneJumpOracle o = OneJumpValueAtT(th, T);
      EXPECT_NEAR(o.lhs, o.rhs, 1e-12) << th << " " << T;
    }
  }
}

TEST(ChangeOfMeasureTest, ZeroThetaPasses) {
  ExperimentOptions opt;
  opt.n = 2000;
  opt.seed = 5;
  opt.grid_level = 6;
  const ExperimentReport r = VerifyChangeOfMeasure(
      kTen, TiltParams{0.0, 0.5}, Functional::kValueHalf, opt);
  EXPECT_TRUE(r.verdict);
}

TEST(ChangeOfMeasureTest, FunctionalNamesRoundTrip) {
  for (Functional f : {Functional::kValueHalf, Functional::kValueEnd,
                       Functional::kMax, Functional::kPositivePart}) {
    EXPECT_EQ(ParseFunctional(ToString(f)), f);
  }
  EXPECT_THROW(ParseFunctional("nope"), InvalidArgument);
  EXPECT_EQ(ParseDiffusionConvention("literal"), DiffusionConvention::kLiteral);
}

TEST(LowerBoundTest, RejectsPositiveJumpsAndDrift) {
  ExperimentOptions opt;
  opt.n = 100;
  const double ts[] = {0.5};
  EXPECT_THROW(LowerBoundCheck(List(0, 1, {0.5}), ts, opt), InvalidArgument);
  EXPECT_THROW(LowerBoundCheck(List(0.1, 1, {}), ts, opt), InvalidArgument);
}

}  // namespace
}  // namespace eitk
