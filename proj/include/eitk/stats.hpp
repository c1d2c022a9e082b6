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

#ifndef EITK_STATS_HPP_
#define EITK_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace eitk {

struct KSResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double KolmogorovSurvival(double x);

// Two-sample KS with the asymptotic p-value at n = n1 n2 / (n1 + n2).
// Throws InvalidArgument on an empty sample.
KSResult KSTwoSample(std::span<const double> a, std::span<const double> b);

// Two-sample KS where `a` carries nonnegative weights (an importance-weighted
// empirical law). The effective size of `a` is (sum w)^2 / sum w^2.
KSResult KSTwoSampleWeighted(std::span<const double> a,
                             std::span<const double> wa,
                             std::span<const double> b);

// One-sample KS against a continuous CDF.
KSResult KSOneSample(std::span<const double> a,
                     const std::function<double(double)>& cdf);

struct MeanCI {
  double mean = 0.0;
  double half_width = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

// Normal-approximation interval, half width z(level) s / sqrt(n). n >= 2.
MeanCI MeanConfidence(std::span<const double> sample, double level = 0.95);

// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double NormalQuantileTwoSided(double level);
double NormalCdf(double x);
double NormalPdf(double x);

class Ecdf {
 public:
  explicit Ecdf(std::span<const double> sample);
  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool Contains(double x) const { return lo <= x && x <= hi; }
};

// Percentile bootstrap. Resample b uses Rng(DeriveSeed(seed, b)). Sets
// *warning when B < 100.
Interval BootstrapCI(std::span<const double> sample,
                     const std::function<double(std::span<const double>)>&
                         statistic,
                     std::size_t B, double level, std::uint64_t seed,
                     std::string* warning = nullptr);

double Mean(std::span<const double> x);
double Median(std::vector<double> x);
// Type-7 sample quantile.
double Quantile(std::vector<double> x, double q);

// Compensated (Neumaier) running sum.
class NeumaierSum {
 public:
  void Add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace eitk

#endif  // EITK_STATS_HPP_
