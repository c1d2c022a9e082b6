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

#include "eitk/params.hpp"
#include "eitk/rng.hpp"
#include "eitk/stats.hpp"

namespace eitk {
namespace {

TEST(KSTest, IdenticalSamples) {
  const std::vector<double> a = {0.1, 0.5, 0.9, 0.3};
  const KSResult r = KSTwoSample(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(KSTest, DisjointSamples) {
  const std::vector<double> a = {0.1, 0.2, 0.3};
  const std::vector<double> b = {1.1, 1.2, 1.3};
  EXPECT_DOUBLE_EQ(KSTwoSample(a, b).statistic, 1.0);
}

TEST(KSTest, HalfShift) {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(KSTwoSample(a, b).statistic, 0.5);
}

TEST(KSTest, SymmetricAndMonotoneInvariant) {
  Rng rng(4);
  std::vector<double> a(300), b(200);
  for (double& x : a) x = rng.Normal();
  for (double& x : b) x = rng.Normal() + 0.2;
  const KSResult ab = KSTwoSample(a, b);
  const KSResult ba = KSTwoSample(b, a);
  EXPECT_DOUBLE_EQ(ab.statistic, ba.statistic);
  EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
  for (double& x : a) x = std::exp(x);
  for (double& x : b) x = std::exp(x);
  EXPECT_DOUBLE_EQ(KSTwoSample(a, b).statistic, ab.statistic);
}

TEST(KSTest, EmptyThrows) {
  const std::vector<double> a = {1.0};
  EXPECT_THROW(KSTwoSample(a, {}), InvalidArgument);
}

TEST(KSTest, WeightedEqualWeightsMatchUnweighted) {
  Rng rng(8);
  std::vector<double> a(100), b(150), w(100, 2.5);
  for (double& x : a) x = rng.Uniform();
  for (double& x : b) x = rng.Uniform();
  const KSResult u = KSTwoSample(a, b);
  const KSResult v = KSTwoSampleWeighted(a, w, b);
  EXPECT_NEAR(u.statistic, v.statistic, 1e-12);
  EXPECT_NEAR(u.p_value, v.p_value, 1e-12);
}

TEST(KSTest, OneSampleUniform) {
  Rng rng(2);
  std::vector<double> a(5000);
  for (double& x : a) x = rng.Uniform();
  const KSResult r = KSOneSample(a, [](double x) { return x; });
  EXPECT_GT(r.p_value, 0.001);
  EXPECT_LT(r.statistic, 0.03);
}

TEST(KolmogorovTest, KnownValues) {
  // 2 sum (-1)^{k-1} e^{-2k^2} at x = 1, summed independently here.
  double q = 0.0;
  for (int k = 1; k < 50; ++k) q += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k);
  EXPECT_NEAR(KolmogorovSurvival(1.0), q, 1e-12);
  EXPECT_NEAR(KolmogorovSurvival(1.0), 0.2699996716, 1e-9);
  EXPECT_DOUBLE_EQ(KolmogorovSurvival(0.0), 1.0);
  EXPECT_LT(KolmogorovSurvival(5.0), 1e-20);
  EXPECT_NEAR(KolmogorovSurvival(1.358), 0.05, 1e-3);
}

TEST(MeanCITest, TwoPoints) {
  const std::vector<double> x = {0.0, 2.0};
  const MeanCI ci = MeanConfidence(x);
  EXPECT_DOUBLE_EQ(ci.mean, 1.0);
  EXPECT_NEAR(ci.sd, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ci.half_width, 1.959963984540054, 1e-9);
  EXPECT_THROW(MeanConfidence(std::vector<double>{1.0}), InvalidArgument);
}

TEST(NormalTest, Quantiles) {
  EXPECT_NEAR(NormalQuantileTwoSided(0.95), 1.959963984540054, 1e-9);
  EXPECT_NEAR(NormalQuantileTwoSided(0.99), 2.5758293035489, 1e-9);
  EXPECT_NEAR(NormalCdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(NormalCdf(1.0) - NormalCdf(-1.0), 0.6826894921370859, 1e-12);
  EXPECT_NEAR(NormalPdf(0.0), 1.0 / std::sqrt(2 * M_PI), 1e-16);
}

TEST(EcdfTest, Steps) {
  const std::vector<double> x = {3.0, 1.0, 2.0, 2.0};
  const Ecdf f(x);
  EXPECT_EQ(f(0.5), 0.0);
  EXPECT_EQ(f(1.0), 0.25);
  EXPECT_EQ(f(2.0), 0.75);
  EXPECT_EQ(f(2.5), 0.75);
  EXPECT_EQ(f(3.0), 1.0);
}

TEST(QuantileTest, TypeSeven) {
  const std::vector<double> x = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(Median(x), 2.5);
  EXPECT_DOUBLE_EQ(Quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(Quantile(x, 0.25), 1.75);
}

TEST(BootstrapTest, DegenerateSample) {
  const std::vector<double> x(50, 3.0);
  const Interval ci = BootstrapCI(
      x, [](std::span<const double> s) { return Mean(s); }, 200, 0.95, 1);
  EXPECT_DOUBLE_EQ(ci.lo, 3.0);
  EXPECT_DOUBLE_EQ(ci.hi, 3.0);
}

TEST(BootstrapTest, MedianIntervalCoversAndWarns) {
  Rng rng(12);
  std::vector<double> x(400);
  for (double& v : x) v = rng.Normal();
  const auto med = [](std::span<const double> s) {
    return Median(std::vector<double>(s.begin(), s.end()));
  };
  std::string warning;
  const Interval ci = BootstrapCI(x, med, 500, 0.95, 3, &warning);
  EXPECT_TRUE(ci.Contains(Median(x)));
  EXPECT_LT(ci.hi - ci.lo, 0.5);
  EXPECT_TRUE(warning.empty());
  BootstrapCI(x, med, 50, 0.95, 3, &warning);
  EXPECT_FALSE(warning.empty());
  const Interval again = BootstrapCI(x, med, 500, 0.95, 3);
  EXPECT_EQ(again.lo, ci.lo);
  EXPECT_EQ(again.hi, ci.hi);
}

TEST(NeumaierTest, Compensates) {
  NeumaierSum s;
  s.Add(1.0);
  s.Add(1e100);
  s.Add(1.0);
  s.Add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

}  // namespace
}  // namespace eitk
