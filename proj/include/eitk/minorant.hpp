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

#ifndef EITK_MINORANT_HPP_
#define EITK_MINORANT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "eitk/polyline.hpp"
#include "eitk/rng.hpp"

namespace eitk {

// One linear piece of the convex minorant.
struct Face {
  double start_time = 0.0;
  double end_time = 0.0;
  double start_value = 0.0;
  double end_value = 0.0;
  double slope = 0.0;

  double increment() const { return end_value - start_value; }
  double length() const { return end_time - start_time; }
};

// Greatest convex function below a path, as an ordered list of faces tiling
// the path's domain with strictly increasing slopes.
class ConvexMinorant {
 public:
  ConvexMinorant() = default;
  explicit ConvexMinorant(std::vector<Face> faces);

  std::span<const Face> faces() const { return faces_; }
  std::size_t size() const { return faces_.size(); }

  double Eval(double t) const;
  // Slope of the face containing t (the right face at a vertex).
  double SlopeAt(double t) const;
  double Minimum() const;
  // Sum of the negative face increments.
  double NegativeIncrementSum() const;

 private:
  std::vector<Face> faces_;
};

// Lower convex hull of {(t_j, min(X_{t_j}, X_{t_j-}))} over all knots
// (monotone chain). Faces whose slopes agree within 1e-12 are merged.
ConvexMinorant ComputeMinorant(const Polyline& path);

struct ExcursionInterval {
  double g = 0.0;
  double d = 0.0;
  double length = 0.0;
  // Measured between the contact values min(X, X-) at g and d, which are the
  // minorant's values there.
  double increment = 0.0;
  double slope = 0.0;
  // e(t) = X_{g+t} - C_{g+t} on [0, d-g].
  Polyline excursion;

  bool Contains(double t) const { return g < t && t < d; }
};

// Default contact tolerance scale: one grid step.
double DefaultContactScale(int grid_level);

// Maximal intervals between consecutive contact knots on which the path rises
// above the minorant by more than contact_scale * (1 + |slope|). Ordered and
// disjoint.
std::vector<ExcursionInterval> ExcursionSet(const Polyline& path,
                                            const ConvexMinorant& minorant,
                                            double contact_scale);

struct Discovery {
  std::vector<ExcursionInterval> intervals;
  std::size_t draws = 0;
  std::size_t outside = 0;     // uniforms that fell outside every interval
  std::size_t duplicates = 0;  // uniforms landing in a known interval
};

// Orders excursion intervals by first discovery along `v_seq`.
Discovery DiscoverExcursions(std::span<const ExcursionInterval> intervals,
                             std::span<const double> v_seq);

// Draws uniforms from `rng` until `depth` distinct intervals are found or
// `max_draws` is reached.
Discovery DiscoverExcursions(std::span<const ExcursionInterval> intervals,
                             Rng& rng, std::size_t depth,
                             std::size_t max_draws = 100000);

// Index of the interval containing t, or intervals.size().
std::size_t FindInterval(std::span<const ExcursionInterval> intervals,
                         double t);

}  // namespace eitk

#endif  // EITK_MINORANT_HPP_
