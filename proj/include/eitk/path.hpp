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

#ifndef EITK_PATH_HPP_
#define EITK_PATH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "eitk/params.hpp"
#include "eitk/polyline.hpp"
#include "eitk/rng.hpp"

namespace eitk {

struct Jump {
  double location = 0.0;
  double size = 0.0;
};

// Brownian bridge on [0,1] sampled at knots. Starts as the dyadic grid
// k 2^-level built by midpoint refinement; extra knots may be inserted later by
// exact Gaussian conditioning on their neighbours.
class BrownianBridgeGrid {
 public:
  BrownianBridgeGrid() : times_{0.0, 1.0}, values_{0.0, 0.0} {}

  // Level-by-level midpoint refinement. The draws for level l are a prefix of
  // the draws for level l+1, so grids of different depth from the same stream
  // agree on their common knots.
  static BrownianBridgeGrid Sample(int level, Rng& rng);
  // Same knots, identically zero (used when sigma = 0).
  static BrownianBridgeGrid Zero(int level);

  int level() const { return level_; }
  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }

  // Linear interpolation between knots.
  double Eval(double t) const;

  // Inserts knots at the given times, sampling each from the bridge law
  // conditioned on its current neighbours.
  void Insert(std::span<const double> ts, Rng& rng);

  // t -> -b(1-t), again a standard bridge.
  BrownianBridgeGrid Reversed() const;

 private:
  int level_ = 0;
  std::vector<double> times_;
  std::vector<double> values_;
};

// A realized extremal EI path
//   X_t = alpha t + sigma b_t + sum_i beta_i (1{U_i <= t} - t)
// with the beta family truncated per CanonicalParams. Immutable once built.
class EIPath {
 public:
  EIPath(double alpha, double sigma, std::vector<Jump> jumps,
         BrownianBridgeGrid bridge);

  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  std::span<const Jump> jumps() const { return jumps_; }
  const BrownianBridgeGrid& bridge() const { return bridge_; }
  int grid_level() const { return bridge_.level(); }
  double jump_total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

  // Exact for the drift and jump part; the bridge is linearly interpolated.
  // Throws InvalidArgument for t outside [0,1].
  double Eval(double t) const;
  // Eval(t) minus the jumps located exactly at t.
  double EvalLeft(double t) const;

  // Skeleton: bridge knots plus jump times, carrying (left limit, value).
  Polyline ToPolyline() const;

  // Copy with extra bridge knots at `ts` (exact conditional sampling).
  EIPath WithBridgeKnots(std::span<const double> ts, Rng& rng) const;

  // t -> X_1 - X_{(1-t)-}: jumps move to 1 - U_i, bridge to -b(1-t).
  EIPath Reversed() const;

 private:
  double JumpSumUpTo(double t, bool inclusive) const;

  double alpha_;
  double sigma_;
  std::vector<Jump> jumps_;      // sorted by location
  std::vector<double> prefix_;   // prefix_[k] = sum of first k+1 sizes
  BrownianBridgeGrid bridge_;
};

// Jumps drawn iid uniform (one stream), bridge by midpoint refinement (another
// stream); deterministic in `seed`. grid_level >= 0.
EIPath SimulatePath(const CanonicalParams& params, int grid_level,
                    std::uint64_t seed);

// Same, with explicit jump locations (sizes from the params, in order).
EIPath PathWithJumpsAt(const CanonicalParams& params,
                       std::span<const double> locations,
                       BrownianBridgeGrid bridge = {});

// Evaluations on the whole skeleton.
MinLocation MinAndLocation(const EIPath& path);

// Exact draw of X_t for one fixed t (no grid): alpha t + sigma sqrt(t(1-t)) Z
// + sum beta_j (1{U_j <= t} - t).
double SampleValueAt(const CanonicalParams& params,
                     std::span<const double> betas, double t, Rng& rng);

// Exact draw of inf_{[0,1]} X given the skeleton: between knots the Brownian
// part is a bridge of variance rate sigma^2, whose minimum is sampled in closed
// form. Bridge knots are first inserted at jump times.
double SampleContinuousMinimum(const EIPath& path, Rng& rng);

// Exact draw of sup_{[start, upto]} of a skeleton whose knots include every
// jump time and whose Brownian part has variance rate sigma^2 between knots.
// `upto` must be a knot.
double SampleSkeletonMaximum(const Polyline& skeleton, double sigma,
                             double upto, Rng& rng);

// Probability that the continuous path stays above `level` given the skeleton
// (product of Brownian-bridge non-crossing probabilities between knots).
double ProbabilityAbove(const Polyline& skeleton, double sigma, double level);

}  // namespace eitk

#endif  // EITK_PATH_HPP_
