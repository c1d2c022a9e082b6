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

#include "eitk/path.hpp"
#include "eitk/stats.hpp"

namespace eitk {
namespace {

CanonicalParams List(double alpha, double sigma, std::vector<double> b) {
  CanonicalParams p;
  p.alpha = alpha;
  p.sigma = sigma;
  p.betas = BetaList{std::move(b)};
  return p;
}

CanonicalParams Bridge() { return List(0.0, 1.0, {}); }

TEST(BridgeTest, EndpointsAreZero) {
  Rng rng(3);
  const auto b = BrownianBridgeGrid::Sample(6, rng);
  ASSERT_EQ(b.values().size(), 65u);
  EXPECT_EQ(b.values().front(), 0.0);
  EXPECT_EQ(b.values().back(), 0.0);
}

TEST(BridgeTest, CoarseGridIsPrefixOfFine) {
  Rng a(11), b(11);
  const auto coarse = BrownianBridgeGrid::Sample(4, a);
  const auto fine = BrownianBridgeGrid::Sample(8, b);
  for (std::size_t k = 0; k < coarse.times().size(); ++k) {
    EXPECT_EQ(coarse.values()[k], fine.values()[16 * k]);
  }
}

TEST(BridgeTest, MarginalsMatchNormal) {
  for (double t : {0.25, 0.5, 0.75}) {
    std::vector<double> x;
    for (std::uint64_t r = 0; r < 4000; ++r) {
      Rng rng(DeriveSeed(17, r));
      x.push_back(BrownianBridgeGrid::Sample(4, rng).Eval(t));
    }
    const double s = std::sqrt(t * (1 - t));
    const KSResult ks = KSOneSample(x, [s](double v) { return NormalCdf(v / s); });
    EXPECT_GT(ks.p_value, 0.01) << "t=" << t;
  }
}

TEST(BridgeTest, InsertKeepsConditionalVariance) {
  // Inserting t = 0.3 into a level-1 grid: Var = 0.3 * 0.2 / 0.5 given b(1/2)
  // plus the linear interpolation of b(1/2); unconditionally 0.3 * 0.7.
  std::vector<double> x;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    Rng rng(DeriveSeed(23, r));
    auto b = BrownianBridgeGrid::Sample(1, rng);
    const double ts[] = {0.3};
    b.Insert(ts, rng);
    x.push_back(b.Eval(0.3));
  }
  const MeanCI ci = MeanConfidence(x);
  EXPECT_NEAR(ci.sd * ci.sd, 0.21, 0.015);
}

TEST(PathTest, SingleJumpFormula) {
  const double loc[] = {0.5};
  const EIPath p = PathWithJumpsAt(List(0, 0, {1.0}), loc);
  EXPECT_DOUBLE_EQ(p.Eval(0.25), -0.25);
  EXPECT_DOUBLE_EQ(p.Eval(0.5), 0.5);
  EXPECT_DOUBLE_EQ(p.EvalLeft(0.5), -0.5);
  EXPECT_DOUBLE_EQ(p.Eval(1.0), 0.0);
  const MinLocation m = MinAndLocation(p);
  EXPECT_DOUBLE_EQ(m.min_value, -0.5);
  EXPECT_DOUBLE_EQ(m.rho, 0.5);
  EXPECT_TRUE(m.attained_from_left);
}

TEST(PathTest, HandEvaluation) {
  const double loc[] = {0.3, 0.6};
  const EIPath p = PathWithJumpsAt(List(0, 0, {1.0, -2.0}), loc);
  EXPECT_NEAR(p.Eval(0.7), -0.3, 1e-15);
}

TEST(PathTest, EndValueIsAlphaForFiniteLists) {
  for (std::uint64_t s = 1; s < 50; ++s) {
    const EIPath p = SimulatePath(List(0.375, 0, {1.0, -0.5, 0.25, 2.0}), 5, s);
    EXPECT_NEAR(p.Eval(1.0), 0.375, 1e-14);
    EXPECT_EQ(p.Eval(0.0), 0.0);
  }
}

TEST(PathTest, DeterministicInSeed) {
  CanonicalParams h;
  h.sigma = 0.5;
  h.betas = PowerLawBetas{1.0, 1.0, SignPattern::kAlternating};
  const EIPath a = SimulatePath(h, 8, 99), b = SimulatePath(h, 8, 99);
  for (double t = 0; t <= 1.0; t += 1.0 / 64) EXPECT_EQ(a.Eval(t), b.Eval(t));
}

TEST(PathTest, MonotonePathMinimumAtOrigin) {
  const EIPath p = SimulatePath(List(2.0, 0, {}), 6, 1);
  const MinLocation m = MinAndLocation(p);
  EXPECT_EQ(m.min_value, 0.0);
  EXPECT_EQ(m.rho, 0.0);
}

TEST(PathTest, MinimumIsTranslationEquivariant) {
  const EIPath p = SimulatePath(List(0, 1, {0.7, -0.4}), 8, 5);
  const Polyline q = p.ToPolyline().Shifted(0.0, 3.0);
  const MinLocation a = MinAndLocation(p), b = q.Min();
  EXPECT_NEAR(b.min_value, a.min_value + 3.0, 1e-12);
  EXPECT_EQ(a.rho, b.rho);
}

TEST(PathTest, ReverseIsInvolution) {
  const EIPath p = SimulatePath(List(0.2, 1, {0.7, -0.4, 0.1}), 6, 8);
  const EIPath rr = p.Reversed().Reversed();
  for (double t = 0; t <= 1.0; t += 1.0 / 64) {
    EXPECT_NEAR(rr.Eval(t), p.Eval(t), 1e-12);
  }
}

TEST(PathTest, ReverseOfDriftIsDrift) {
  const EIPath p = SimulatePath(List(1.5, 0, {}), 4, 2).Reversed();
  for (double t = 0; t <= 1.0; t += 1.0 / 16) EXPECT_NEAR(p.Eval(t), 1.5 * t, 1e-14);
}

TEST(PathTest, ReverseDefinition) {
  const EIPath p = SimulatePath(List(0.3, 0.8, {1.0, -0.6}), 6, 31);
  const EIPath r = p.Reversed();
  for (double t = 0; t <= 1.0; t += 1.0 / 64) {
    EXPECT_NEAR(r.Eval(t), p.Eval(1.0) - p.EvalLeft(1.0 - t), 1e-12);
  }
}

TEST(PathTest, ReversalPreservesLaw) {
  const CanonicalParams q = List(0.2, 0.5, {1.0, -0.3, 0.6});
  std::vector<double> a, b;
  for (std::uint64_t r = 0; r < 3000; ++r) {
    a.push_back(SimulatePath(q, 6, DeriveSeed(1, r)).Eval(0.3));
    b.push_back(SimulatePath(q, 6, DeriveSeed(2, r)).Reversed().Eval(0.3));
  }
  EXPECT_GT(KSTwoSample(a, b).p_value, 0.01);
}

TEST(PathTest, BridgeVarianceAtHalf) {
  std::vector<double> x;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    x.push_back(SimulatePath(Bridge(), 3, DeriveSeed(4, r)).Eval(0.5));
  }
  const MeanCI ci = MeanConfidence(x);
  // SE of the sample variance of a normal: sigma^2 sqrt(2/(n-1)).
  const double se = 0.25 * std::sqrt(2.0 / 9999.0);
  EXPECT_NEAR(ci.sd * ci.sd, 0.25, 3 * se);
}

TEST(PathTest, IncrementsAreExchangeable) {
  // First and second moments of the four quarter increments agree under
  // every transposition.
  const CanonicalParams q = List(0.4, 0.6, {1.0, -0.7, 0.5});
  const int n = 20000;
  double m[4] = {}, c[4][4] = {};
  for (int r = 0; r < n; ++r) {
    const EIPath p = SimulatePath(q, 2, DeriveSeed(6, r));
    double d[4];
    for (int k = 0; k < 4; ++k) d[k] = p.Eval((k + 1) / 4.0) - p.Eval(k / 4.0);
    for (int i = 0; i < 4; ++i) {
      m[i] += d[i] / n;
      for (int j = 0; j < 4; ++j) c[i][j] += d[i] * d[j] / n;
    }
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(m[i], 0.1, 0.02);
    EXPECT_NEAR(c[i][i], c[0][0], 0.03);
    for (int j = 0; j < 4; ++j) {
      if (i != j) EXPECT_NEAR(c[i][j], c[0][1], 0.03);
    }
  }
}

TEST(PathTest, TruncatedTailVarianceIsBounded) {
  CanonicalParams full;
  full.betas = PowerLawBetas{1.0, 1.0, SignPattern::kPositive};
  full.truncation_tol = 0.05;
  const std::size_t n = full.TruncationIndex();
  // Omitted jumps contribute at most tol^2 t(1-t) of variance at t.
  double omitted = 0.0;
  for (std::size_t i = n + 1; i < 100 * n; ++i) omitted += 1.0 / (double(i) * i);
  EXPECT_LE(omitted * 0.25, 0.05 * 0.05 / 4);
}

TEST(PathTest, ContinuousMinimumOfBridge) {
  // P(inf b < -x) = exp(-2 x^2) for the standard bridge.
  std::vector<double> mins;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    const EIPath p = SimulatePath(Bridge(), 3, DeriveSeed(8, r));
    Rng aux = Rng(DeriveSeed(8, r)).Split(5);
    mins.push_back(SampleContinuousMinimum(p, aux));
  }
  const KSResult ks = KSOneSample(mins, [](double m) {
    return m >= 0 ? 1.0 : std::exp(-2.0 * m * m);
  });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(PathTest, ProbabilityAboveOfBridge) {
  // One segment from 0 to 0 of unit length: 1 - exp(-2 eps^2).
  const Polyline flat({0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0});
  EXPECT_NEAR(ProbabilityAbove(flat, 1.0, -0.3), -std::expm1(-2 * 0.09), 1e-15);
  EXPECT_EQ(ProbabilityAbove(flat, 0.0, -0.3), 1.0);
  EXPECT_EQ(ProbabilityAbove(flat, 1.0, 0.1), 0.0);
}

TEST(PathTest, SkeletonMaximumRequiresKnot) {
  const Polyline flat({0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0});
  Rng rng(1);
  EXPECT_THROW(SampleSkeletonMaximum(flat, 1.0, 0.5, rng), InvalidArgument);
  EXPECT_GE(SampleSkeletonMaximum(flat, 1.0, 1.0, rng), 0.0);
}

TEST(PathTest, EvalOutsideDomainThrows) {
  const EIPath p = SimulatePath(Bridge(), 2, 1);
  EXPECT_THROW(p.Eval(1.5), InvalidArgument);
  EXPECT_THROW(p.Eval(-0.1), InvalidArgument);
}

}  // namespace
}  // namespace eitk
