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

#include "eitk/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "eitk/params.hpp"
#include "eitk/rng.hpp"

namespace eitk {

double KolmogorovSurvival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) {
    // Small-x form of the same distribution (Jacobi theta transformation):
    // 1 - sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double a = (2.0 * k - 1.0) * M_PI / x;
      s += std::exp(-a * a / 8.0);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KSResult KSTwoSample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n1 - j / n2));
  }
  KSResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double ne = n1 * n2 / (n1 + n2);
  r.p_value = KolmogorovSurvival(std::sqrt(ne) * d);
  return r;
}

KSResult KSTwoSampleWeighted(std::span<const double> a,
                             std::span<const double> wa,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS needs nonempty samples");
  if (wa.size() != a.size()) throw InvalidArgument("one weight per point");
  std::vector<std::size_t> order(a.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
  std::vector<double> y(b.begin(), b.end());
  std::sort(y.begin(), y.end());
  NeumaierSum wsum, wsq;
  for (double w : wa) {
    if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
    wsum.Add(w);
    wsq.Add(w * w);
  }
  const double total = wsum.value();
  if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double fa = 0.0, d = 0.0;
  while (i < order.size() && j < y.size()) {
    const double v = std::min(a[order[i]], y[j]);
    while (i < order.size() && a[order[i]] == v) fa += wa[order[i++]] / total;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(fa - j / n2));
  }
  KSResult r;
  r.statistic = d;
  r.n1 = a.size();
  r.n2 = y.size();
  const double ess = total * total / wsq.value();
  const double ne = ess * n2 / (ess + n2);
  r.p_value = KolmogorovSurvival(std::sqrt(ne) * d);
  return r;
}

KSResult KSOneSample(std::span<const double> a,
                     const std::function<double(double)>& cdf) {
  if (a.empty()) throw InvalidArgument("KS needs a nonempty sample");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  KSResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.p_value = KolmogorovSurvival(std::sqrt(n) * d);
  return r;
}

double NormalQuantileTwoSided(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidArgument("confidence level must lie in (0,1)");
  }
  const boost::math::normal_distribution<double> z;
  return boost::math::quantile(z, 0.5 + 0.5 * level);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

MeanCI MeanConfidence(std::span<const double> sample, double level) {
  if (sample.size() < 2) throw InvalidArgument("mean CI needs n >= 2");
  MeanCI ci;
  ci.n = sample.size();
  ci.mean = Mean(sample);
  NeumaierSum ss;
  for (double x : sample) ss.Add((x - ci.mean) * (x - ci.mean));
  ci.sd = std::sqrt(ss.value() / static_cast<double>(ci.n - 1));
  ci.se = ci.sd / std::sqrt(static_cast<double>(ci.n));
  ci.half_width = NormalQuantileTwoSided(level) * ci.se;
  return ci;
}

Ecdf::Ecdf(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

Interval BootstrapCI(std::span<const double> sample,
                     const std::function<double(std::span<const double>)>&
                         statistic,
                     std::size_t B, double level, std::uint64_t seed,
                     std::string* warning) {
  if (sample.empty()) throw InvalidArgument("bootstrap needs a sample");
  if (B == 0) throw InvalidArgument("bootstrap needs B >= 1");
  if (B < 100 && warning != nullptr) {
    *warning = "bootstrap with fewer than 100 resamples";
  }
  std::vector<double> stats(B);
  std::vector<double> resample(sample.size());
  const std::uint64_t n = sample.size();
  for (std::size_t b = 0; b < B; ++b) {
    Rng rng(DeriveSeed(seed, b));
    for (double& x : resample) {
      x = sample[static_cast<std::size_t>(rng.NextU64() % n)];
    }
    stats[b] = statistic(resample);
  }
  const double tail = 0.5 * (1.0 - level);
  return {Quantile(stats, tail), Quantile(stats, 1.0 - tail)};
}

double Mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  NeumaierSum s;
  for (double v : x) s.Add(v);
  return s.value() / static_cast<double>(x.size());
}

double Median(std::vector<double> x) { return Quantile(std::move(x), 0.5); }

double Quantile(std::vector<double> x, double q) {
  if (x.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

void NeumaierSum::Add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace eitk
