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

#ifndef EITK_POLYLINE_HPP_
#define EITK_POLYLINE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace eitk {

// Location of the infimum of a cadlag path.
struct MinLocation {
  double min_value = 0.0;
  // First time t with min(X_t, X_{t-}) equal to the minimum.
  double rho = 0.0;
  // Last such time.
  double tau = 0.0;
  bool attained_from_left = false;
  // X_rho and X_{rho-}.
  double value_at_rho = 0.0;
  double left_at_rho = 0.0;
};

// Cadlag piecewise-linear function on [t_0, t_m]. Knot j carries the left
// limit and the value at t_j; on (t_j, t_{j+1}) the function is the straight
// line from value_j to left_{j+1}. At the first knot left == value.
//
// This is the common skeleton representation: an EIPath restricted to its
// bridge grid plus its jump times is exactly a Polyline, and every path
// transformation maps Polylines to Polylines without loss.
class Polyline {
 public:
  Polyline() = default;
  Polyline(std::vector<double> times, std::vector<double> lefts,
           std::vector<double> values);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  std::span<const double> times() const { return times_; }
  std::span<const double> lefts() const { return lefts_; }
  std::span<const double> values() const { return values_; }
  double time(std::size_t j) const { return times_[j]; }
  double left(std::size_t j) const { return lefts_[j]; }
  double value(std::size_t j) const { return values_[j]; }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }
  double length() const { return end() - start(); }

  // min(X_{t_j}, X_{t_j-}).
  double lower(std::size_t j) const {
    return lefts_[j] < values_[j] ? lefts_[j] : values_[j];
  }

  // Right-continuous value; throws InvalidArgument outside [start, end].
  double Eval(double t) const;
  // Left limit (equals Eval(start) at start).
  double EvalLeft(double t) const;

  // Index of the knot at exactly t, or size() if none.
  std::size_t FindKnot(double t) const;

  // Copy with a knot inserted at t (no-op if already a knot).
  Polyline WithKnot(double t) const;

  // Earliest minimum over values and left limits.
  MinLocation Min() const;
  double Max() const;
  // Earliest time at which sup is attained (by value or left limit).
  double ArgMax() const;

  // Appends a knot; times must be nondecreasing. Equal times are rejected.
  void Append(double t, double left, double value);

  // Pointwise shifts.
  Polyline Shifted(double dt, double dv) const;
  Polyline PlusLinear(double slope, double intercept) const;

 private:
  std::vector<double> times_;
  std::vector<double> lefts_;
  std::vector<double> values_;
};

}  // namespace eitk

#endif  // EITK_POLYLINE_HPP_
