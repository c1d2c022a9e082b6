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

#include "eitk/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eitk {

BrownianBridgeGrid BrownianBridgeGrid::Sample(int level, Rng& rng) {
  if (level < 0 || level > 24) {
    throw InvalidArgument("grid level must lie in [0, 24]");
  }
  BrownianBridgeGrid g;
  g.level_ = level;
  const std::size_t n = std::size_t{1} << level;
  g.times_.resize(n + 1);
  g.values_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    g.times_[k] = std::ldexp(static_cast<double>(k), -level);
  }
  for (int l = 1; l <= level; ++l) {
    const std::size_t step = std::size_t{1} << (level - l);
    // Conditional variance of the midpoint of an interval of width w is w/4.
    const double sd = std::sqrt(std::ldexp(2.0 * step, -level) / 4.0);
    for (std::size_t k = step; k < n; k += 2 * step) {
      g.values_[k] =
          0.5 * (g.values_[k - step] + g.values_[k + step]) + sd * rng.Normal();
    }
  }
  return g;
}

BrownianBridgeGrid BrownianBridgeGrid::Zero(int level) {
  if (level < 0 || level > 24) {
    throw InvalidArgument("grid level must lie in [0, 24]");
  }
  BrownianBridgeGrid g;
  g.level_ = level;
  const std::size_t n = std::size_t{1} << level;
  g.times_.resize(n + 1);
  g.values_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    g.times_[k] = std::ldexp(static_cast<double>(k), -level);
  }
  return g;
}

double BrownianBridgeGrid::Eval(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return values_.back();
  const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (times_[j] == t) return values_[j];
  const double w = (t - times_[j]) / (times_[j + 1] - times_[j]);
  return values_[j] + w * (values_[j + 1] - values_[j]);
}

void BrownianBridgeGrid::Insert(std::span<const double> ts, Rng& rng) {
  std::vector<double> sorted(ts.begin(), ts.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double t : sorted) {
    if (!(t > 0.0 && t < 1.0)) continue;
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (*it == t) continue;
    const std::size_t c = static_cast<std::size_t>(it - times_.begin());
    const std::size_t a = c - 1;
    const double ta = times_[a], tc = times_[c];
    const double w = (t - ta) / (tc - ta);
    const double mean = values_[a] + w * (values_[c] - values_[a]);
    const double var = (t - ta) * (tc - t) / (tc - ta);
    const double v = mean + std::sqrt(var) * rng.Normal();
    times_.insert(times_.begin() + static_cast<std::ptrdiff_t>(c), t);
    values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(c), v);
  }
}

BrownianBridgeGrid BrownianBridgeGrid::Reversed() const {
  BrownianBridgeGrid r;
  r.level_ = level_;
  r.times_.resize(times_.size());
  r.values_.resize(values_.size());
  const std::size_t n = times_.size();
  for (std::size_t k = 0; k < n; ++k) {
    r.times_[k] = 1.0 - times_[n - 1 - k];
    r.values_[k] = -values_[n - 1 - k];
  }
  r.values_.front() = 0.0;
  r.values_.back() = 0.0;
  return r;
}

EIPath::EIPath(double alpha, double sigma, std::vector<Jump> jumps,
               BrownianBridgeGrid bridge)
    : alpha_(alpha),
      sigma_(sigma),
      jumps_(std::move(jumps)),
      bridge_(std::move(bridge)) {
  for (const Jump& j : jumps_) {
    if (!(j.location >= 0.0 && j.location <= 1.0)) {
      throw InvalidArgument("jump locations must lie in [0,1]");
    }
  }
  std::stable_sort(jumps_.begin(), jumps_.end(),
                   [](const Jump& a, const Jump& b) {
                     return a.location < b.location;
                   });
  prefix_.resize(jumps_.size());
  double s = 0.0;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    s += jumps_[i].size;
    prefix_[i] = s;
  }
}

double EIPath::JumpSumUpTo(double t, bool inclusive) const {
  auto cmp = [](const Jump& j, double x) { return j.location < x; };
  auto cmp_up = [](double x, const Jump& j) { return x < j.location; };
  const auto it =
      inclusive ? std::upper_bound(jumps_.begin(), jumps_.end(), t, cmp_up)
                : std::lower_bound(jumps_.begin(), jumps_.end(), t, cmp);
  const std::size_t k = static_cast<std::size_t>(it - jumps_.begin());
  return k == 0 ? 0.0 : prefix_[k - 1];
}

double EIPath::Eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("evaluation time outside [0,1]");
  }
  const double b = sigma_ == 0.0 ? 0.0 : sigma_ * bridge_.Eval(t);
  return alpha_ * t + b + (JumpSumUpTo(t, true) - t * jump_total());
}

double EIPath::EvalLeft(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("evaluation time outside [0,1]");
  }
  const double b = sigma_ == 0.0 ? 0.0 : sigma_ * bridge_.Eval(t);
  return alpha_ * t + b + (JumpSumUpTo(t, false) - t * jump_total());
}

Polyline EIPath::ToPolyline() const {
  const auto bt = bridge_.times();
  const auto bv = bridge_.values();
  std::vector<double> times, lefts, values;
  const std::size_t cap = bt.size() + jumps_.size();
  times.reserve(cap);
  lefts.reserve(cap);
  values.reserve(cap);
  const double total = jump_total();
  std::size_t bi = 0, ji = 0;
  double cum = 0.0;
  while (bi < bt.size() || ji < jumps_.size()) {
    double t;
    if (ji >= jumps_.size() ||
        (bi < bt.size() && bt[bi] <= jumps_[ji].location)) {
      t = bt[bi];
    } else {
      t = jumps_[ji].location;
    }
    const double before = cum;
    while (ji < jumps_.size() && jumps_[ji].location == t) {
      cum = prefix_[ji];
      ++ji;
    }
    double b;
    if (bi < bt.size() && bt[bi] == t) {
      b = bv[bi];
      ++bi;
    } else {
      b = bridge_.Eval(t);
    }
    const double base = alpha_ * t + (sigma_ == 0.0 ? 0.0 : sigma_ * b);
    times.push_back(t);
    lefts.push_back(base + (before - t * total));
    values.push_back(base + (cum - t * total));
  }
  lefts.front() = values.front();
  return Polyline(std::move(times), std::move(lefts), std::move(values));
}

EIPath EIPath::WithBridgeKnots(std::span<const double> ts, Rng& rng) const {
  BrownianBridgeGrid b = bridge_;
  b.Insert(ts, rng);
  return EIPath(alpha_, sigma_, jumps_, std::move(b));
}

EIPath EIPath::Reversed() const {
  std::vector<Jump> rj;
  rj.reserve(jumps_.size());
  for (const Jump& j : jumps_) rj.push_back({1.0 - j.location, j.size});
  return EIPath(alpha_, sigma_, std::move(rj), bridge_.Reversed());
}

EIPath SimulatePath(const CanonicalParams& params, int grid_level,
                    std::uint64_t seed) {
  params.Validate();
  if (grid_level < 0) throw InvalidArgument("grid level must be >= 0");
  const std::vector<double> betas = params.MaterializeBetas();
  Rng root(seed);
  Rng jump_rng = root.Split(1);
  std::vector<Jump> jumps(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    jumps[i] = {jump_rng.Uniform(), betas[i]};
  }
  BrownianBridgeGrid bridge;
  if (params.sigma > 0.0) {
    Rng bridge_rng = root.Split(2);
    bridge = BrownianBridgeGrid::Sample(grid_level, bridge_rng);
  } else {
    bridge = BrownianBridgeGrid::Zero(grid_level);
  }
  return EIPath(params.alpha, params.sigma, std::move(jumps),
                std::move(bridge));
}

EIPath PathWithJumpsAt(const CanonicalParams& params,
                       std::span<const double> locations,
                       BrownianBridgeGrid bridge) {
  const std::vector<double> betas = params.MaterializeBetas();
  if (betas.size() != locations.size()) {
    throw InvalidArgument("one location per kept jump is required");
  }
  std::vector<Jump> jumps(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    jumps[i] = {locations[i], betas[i]};
  }
  return EIPath(params.alpha, params.sigma, std::move(jumps),
                std::move(bridge));
}

MinLocation MinAndLocation(const EIPath& path) {
  return path.ToPolyline().Min();
}

double SampleValueAt(const CanonicalParams& params,
                     std::span<const double> betas, double t, Rng& rng) {
  double x = params.alpha * t;
  if (params.sigma > 0.0) {
    x += params.sigma * std::sqrt(t * (1.0 - t)) * rng.Normal();
  }
  double jumps = 0.0, total = 0.0;
  for (double b : betas) {
    total += b;
    if (rng.Uniform() <= t) jumps += b;
  }
  return x + (jumps - t * total);
}

double ProbabilityAbove(const Polyline& skeleton, double sigma, double level) {
  double prob = 1.0;
  for (std::size_t j = 0; j < skeleton.size(); ++j) {
    if (!(skeleton.lower(j) > level)) return 0.0;
  }
  if (sigma == 0.0) return 1.0;
  const double s2 = sigma * sigma;
  for (std::size_t j = 0; j + 1 < skeleton.size(); ++j) {
    const double a = skeleton.value(j) - level;
    const double b = skeleton.left(j + 1) - level;
    const double h = skeleton.time(j + 1) - skeleton.time(j);
    prob *= -std::expm1(-2.0 * a * b / (s2 * h));
  }
  return prob;
}

double SampleContinuousMinimum(const EIPath& path, Rng& rng) {
  if (path.sigma() == 0.0) return path.ToPolyline().Min().min_value;
  std::vector<double> at;
  at.reserve(path.jumps().size());
  for (const Jump& j : path.jumps()) at.push_back(j.location);
  const Polyline skel = path.WithBridgeKnots(at, rng).ToPolyline();
  const double s2 = path.sigma() * path.sigma();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < skel.size(); ++j) {
    const double a = skel.value(j);
    const double b = skel.left(j + 1);
    const double h = skel.time(j + 1) - skel.time(j);
    const double d = a - b;
    const double low =
        0.5 * (a + b - std::sqrt(d * d - 2.0 * s2 * h * std::log(rng.Uniform())));
    m = std::min({m, low, skel.lower(j)});
  }
  return std::min(m, skel.lower(skel.size() - 1));
}

double SampleSkeletonMaximum(const Polyline& skeleton, double sigma,
                             double upto, Rng& rng) {
  const std::size_t end = skeleton.FindKnot(upto);
  if (end == skeleton.size()) {
    throw InvalidArgument("maximum horizon must be a skeleton knot");
  }
  const double s2 = sigma * sigma;
  double m = skeleton.value(0);
  for (std::size_t j = 0; j < end; ++j) {
    const double a = skeleton.value(j);
    const double b = skeleton.left(j + 1);
    m = std::max({m, a, b, skeleton.value(j + 1)});
    if (s2 > 0.0) {
      const double h = skeleton.time(j + 1) - skeleton.time(j);
      const double d = a - b;
      const double high =
          0.5 * (a + b + std::sqrt(d * d - 2.0 * s2 * h * std::log(rng.Uniform())));
      m = std::max(m, high);
    }
  }
  return m;
}

}  // namespace eitk
