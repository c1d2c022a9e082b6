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

#include "eitk/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "eitk/params.hpp"

namespace eitk {

Segment SegmentOf(const Polyline& path, double a, double length) {
  if (!(length > 0.0)) throw InvalidArgument("segment length must be > 0");
  if (path.empty() || a < path.start() || a + length > path.end() * (1 + 1e-15)) {
    throw InvalidArgument("segment outside the path domain");
  }
  const double b = std::min(a + length, path.end());
  const Polyline p = path.WithKnot(a).WithKnot(b);
  const std::size_t ia = p.FindKnot(a);
  const std::size_t ib = p.FindKnot(b);
  const double x0 = p.value(ia);
  Polyline out;
  for (std::size_t j = ia; j <= ib; ++j) {
    out.Append(p.time(j) - a, p.left(j) - x0, p.value(j) - x0);
  }
  return Segment{a, out.end(), std::move(out)};
}

Segment KnightBridge(const Segment& segment) {
  if (!(segment.length > 0.0) || segment.path.size() < 2) {
    throw InvalidArgument("Knight bridge needs a segment of positive length");
  }
  const Polyline& y = segment.path;
  const double end = y.value(y.size() - 1);
  return Segment{segment.origin, segment.length,
                 y.PlusLinear(-end / segment.length, 0.0)};
}

Polyline CyclicShiftAtMin(const Polyline& path) {
  if (path.size() < 2) throw InvalidArgument("degenerate path");
  const MinLocation loc = path.Min();
  const double m = loc.min_value;
  const double t0 = path.start();
  const double len = path.length();
  const std::size_t n = path.size();
  const std::size_t r = path.FindKnot(loc.rho);
  if (r == 0 || r == n - 1) {
    // rho at either end: the shift is the identity.
    return path.Shifted(-t0, -m);
  }
  Polyline out;
  out.Append(0.0, path.value(r) - m, path.value(r) - m);
  for (std::size_t j = r + 1; j + 1 < n; ++j) {
    out.Append(path.time(j) - loc.rho, path.left(j) - m, path.value(j) - m);
  }
  // Wrap: left limit at the end of the path, then the start value.
  out.Append(path.end() - loc.rho, path.left(n - 1) - m, path.value(0) - m);
  for (std::size_t j = 1; j < r; ++j) {
    out.Append(path.time(j) - t0 + (path.end() - loc.rho), path.left(j) - m,
               path.value(j) - m);
  }
  out.Append(len, path.left(r) - m, path.value(r) - m);
  return out;
}

Segment KnightTransform(const Segment& segment) {
  const Segment k = KnightBridge(segment);
  return Segment{segment.origin, segment.length, CyclicShiftAtMin(k.path)};
}

Polyline Vervaat(const Polyline& path) { return CyclicShiftAtMin(path); }

StickBreaking StickBreak(std::span<const double> v_seq, double horizon) {
  StickBreaking sb;
  sb.v_seq.assign(v_seq.begin(), v_seq.end());
  sb.points.push_back(0.0);
  double s = 0.0;
  for (double v : v_seq) {
    if (!(v > 0.0 && v < 1.0)) {
      throw InvalidArgument("stick-breaking uniforms must lie in (0,1)");
    }
    const double l = (horizon - s) * v;
    s += l;
    sb.lengths.push_back(l);
    sb.points.push_back(s);
  }
  return sb;
}

std::optional<Transform3214Result> Transform3214(
    const Polyline& path, std::span<const Jump> jumps,
    std::span<const ExcursionInterval> intervals, double u) {
  const std::size_t k = FindInterval(intervals, u);
  if (k == intervals.size()) return std::nullopt;
  const ExcursionInterval& iv = intervals[k];
  const double g = iv.g, d = iv.d;
  const double dc = iv.increment;  // C_d - C_g
  const Polyline p = path.WithKnot(u);
  const std::size_t ig = p.FindKnot(g);
  const std::size_t iu = p.FindKnot(u);
  const std::size_t id = p.FindKnot(d);
  if (ig == p.size() || id == p.size()) {
    throw InvalidArgument("excursion endpoints are not path knots");
  }
  const double xu = p.value(iu);
  const std::size_t n = p.size();

  Polyline out;
  // Piece 3 of the original: [u, d).
  out.Append(0.0, 0.0, 0.0);
  for (std::size_t j = iu + 1; j < id; ++j) {
    out.Append(p.time(j) - u, p.left(j) - xu, p.value(j) - xu);
  }
  const double s1 = d - u;
  out.Append(s1, p.left(id) - xu, dc + p.value(ig) - xu);
  // Piece 2: (g, u].
  for (std::size_t j = ig + 1; j < iu; ++j) {
    out.Append(p.time(j) - g + s1, dc + p.left(j) - xu,
               dc + p.value(j) - xu);
  }
  const double s2 = d - g;
  out.Append(s2, dc + p.left(iu) - xu, dc + p.value(0));
  // Piece 1: (0, g).
  for (std::size_t j = 1; j < ig; ++j) {
    out.Append(p.time(j) + s2, dc + p.left(j), dc + p.value(j));
  }
  out.Append(d, dc + p.left(ig), p.value(id));
  // Piece 4: (d, 1].
  for (std::size_t j = id + 1; j < n; ++j) {
    out.Append(p.time(j), p.left(j), p.value(j));
  }

  Transform3214Result res;
  res.u = u;
  res.g = g;
  res.d = d;
  res.path = std::move(out);
  res.jumps.reserve(jumps.size());
  for (const Jump& j : jumps) {
    const double x = j.location;
    double y;
    if (x > u && x < d) {
      y = x - u;
    } else if (x >= g && x <= u) {
      y = x - g + s1;
    } else if (x < g) {
      y = x + s2;
    } else {
      y = x;
    }
    res.jumps.push_back({y, j.size});
  }
  std::stable_sort(res.jumps.begin(), res.jumps.end(),
                   [](const Jump& a, const Jump& b) {
                     return a.location < b.location;
                   });
  return res;
}

}  // namespace eitk
