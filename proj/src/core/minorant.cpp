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

#include "eitk/minorant.hpp"

#include <algorithm>
#include <cmath>

#include "eitk/params.hpp"

namespace eitk {
namespace {

constexpr double kSlopeMergeTol = 1e-12;

struct Pt {
  double t;
  double v;
};

// > 0 when a -> b -> c turns left (counterclockwise).
double Cross(const Pt& a, const Pt& b, const Pt& c) {
  return (b.t - a.t) * (c.v - a.v) - (b.v - a.v) * (c.t - a.t);
}

}  // namespace

ConvexMinorant::ConvexMinorant(std::vector<Face> faces)
    : faces_(std::move(faces)) {}

double ConvexMinorant::Eval(double t) const {
  if (faces_.empty()) throw InvalidArgument("empty minorant");
  auto it = std::upper_bound(
      faces_.begin(), faces_.end(), t,
      [](double x, const Face& f) { return x < f.start_time; });
  const Face& f = it == faces_.begin() ? faces_.front() : *(it - 1);
  if (t == f.end_time) return f.end_value;
  if (t == f.start_time) return f.start_value;
  return f.start_value + f.slope * (t - f.start_time);
}

double ConvexMinorant::SlopeAt(double t) const {
  if (faces_.empty()) throw InvalidArgument("empty minorant");
  auto it = std::upper_bound(
      faces_.begin(), faces_.end(), t,
      [](double x, const Face& f) { return x < f.start_time; });
  return it == faces_.begin() ? faces_.front().slope : (it - 1)->slope;
}

double ConvexMinorant::Minimum() const {
  double m = faces_.empty() ? 0.0 : faces_.front().start_value;
  for (const Face& f : faces_) m = std::min(m, f.end_value);
  return m;
}

double ConvexMinorant::NegativeIncrementSum() const {
  double s = 0.0;
  for (const Face& f : faces_) {
    if (f.increment() < 0.0) s += f.increment();
  }
  return s;
}

ConvexMinorant ComputeMinorant(const Polyline& path) {
  if (path.empty()) return ConvexMinorant();
  std::vector<Pt> hull;
  hull.reserve(64);
  for (std::size_t j = 0; j < path.size(); ++j) {
    const Pt p{path.time(j), path.lower(j)};
    while (hull.size() >= 2 &&
           Cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  std::vector<Face> faces;
  if (hull.size() == 1) {
    faces.push_back({hull[0].t, hull[0].t, hull[0].v, hull[0].v, 0.0});
    return ConvexMinorant(std::move(faces));
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const Pt& a = hull[k];
    const Pt& b = hull[k + 1];
    const double slope = (b.v - a.v) / (b.t - a.t);
    if (!faces.empty()) {
      Face& prev = faces.back();
      if (std::abs(slope - prev.slope) <=
          kSlopeMergeTol * (1.0 + std::abs(slope))) {
        prev.end_time = b.t;
        prev.end_value = b.v;
        prev.slope = (prev.end_value - prev.start_value) /
                     (prev.end_time - prev.start_time);
        continue;
      }
    }
    faces.push_back({a.t, b.t, a.v, b.v, slope});
  }
  return ConvexMinorant(std::move(faces));
}

double DefaultContactScale(int grid_level) {
  return std::ldexp(1.0, -grid_level);
}

std::vector<ExcursionInterval> ExcursionSet(const Polyline& path,
                                            const ConvexMinorant& minorant,
                                            double contact_scale) {
  std::vector<ExcursionInterval> out;
  const std::size_t n = path.size();
  if (n < 2) return out;
  double scale = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    scale = std::max({scale, std::abs(path.left(j)), std::abs(path.value(j))});
  }
  const double touch_tol = 1e-12 * scale;
  std::vector<double> c(n);
  std::vector<std::size_t> touch;
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = minorant.Eval(path.time(j));
    if (path.lower(j) - c[j] <= touch_tol) touch.push_back(j);
  }
  for (std::size_t k = 0; k + 1 < touch.size(); ++k) {
    const std::size_t a = touch[k];
    const std::size_t b = touch[k + 1];
    // The path is linear between knots and C is linear on each face, so the
    // gap's supremum is attained at a knot value or left limit.
    double top = std::max(path.value(a) - c[a], path.left(b) - c[b]);
    for (std::size_t j = a + 1; j < b; ++j) {
      top = std::max({top, path.left(j) - c[j], path.value(j) - c[j]});
    }
    const double g = path.time(a);
    const double d = path.time(b);
    const double slope = (c[b] - c[a]) / (d - g);
    if (!(top > contact_scale * (1.0 + std::abs(slope)))) continue;
    ExcursionInterval iv;
    iv.g = g;
    iv.d = d;
    iv.length = d - g;
    iv.increment = c[b] - c[a];
    iv.slope = slope;
    std::vector<double> et, el, ev;
    et.reserve(b - a + 1);
    el.reserve(b - a + 1);
    ev.reserve(b - a + 1);
    for (std::size_t j = a; j <= b; ++j) {
      et.push_back(path.time(j) - g);
      el.push_back(j == a ? path.value(j) - c[j] : path.left(j) - c[j]);
      ev.push_back(path.value(j) - c[j]);
    }
    iv.excursion = Polyline(std::move(et), std::move(el), std::move(ev));
    out.push_back(std::move(iv));
  }
  return out;
}

std::size_t FindInterval(std::span<const ExcursionInterval> intervals,
                         double t) {
  auto it = std::upper_bound(
      intervals.begin(), intervals.end(), t,
      [](double x, const ExcursionInterval& iv) { return x < iv.g; });
  if (it == intervals.begin()) return intervals.size();
  const std::size_t k = static_cast<std::size_t>(it - intervals.begin()) - 1;
  return intervals[k].Contains(t) ? k : intervals.size();
}

Discovery DiscoverExcursions(std::span<const ExcursionInterval> intervals,
                             std::span<const double> v_seq) {
  Discovery out;
  std::vector<bool> seen(intervals.size(), false);
  for (double v : v_seq) {
    ++out.draws;
    const std::size_t k = FindInterval(intervals, v);
    if (k == intervals.size()) {
      ++out.outside;
    } else if (seen[k]) {
      ++out.duplicates;
    } else {
      seen[k] = true;
      out.intervals.push_back(intervals[k]);
    }
  }
  return out;
}

Discovery DiscoverExcursions(std::span<const ExcursionInterval> intervals,
                             Rng& rng, std::size_t depth,
                             std::size_t max_draws) {
  Discovery out;
  std::vector<bool> seen(intervals.size(), false);
  const std::size_t want = std::min(depth, intervals.size());
  while (out.intervals.size() < want && out.draws < max_draws) {
    const double v = rng.Uniform();
    ++out.draws;
    const std::size_t k = FindInterval(intervals, v);
    if (k == intervals.size()) {
      ++out.outside;
    } else if (seen[k]) {
      ++out.duplicates;
    } else {
      seen[k] = true;
      out.intervals.push_back(intervals[k]);
    }
  }
  return out;
}

}  // namespace eitk
