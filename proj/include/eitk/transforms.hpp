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

#ifndef EITK_TRANSFORMS_HPP_
#define EITK_TRANSFORMS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "eitk/minorant.hpp"
#include "eitk/path.hpp"
#include "eitk/polyline.hpp"

namespace eitk {

// Y_s = X_{a+s} - X_a on [0, length].
struct Segment {
  double origin = 0.0;
  double length = 0.0;
  Polyline path;
};

// Restricts a path to [a, a+length] and recenters it. Knots are inserted at
// both ends if needed. Throws InvalidArgument for length <= 0 or a range
// outside the path domain.
Segment SegmentOf(const Polyline& path, double a, double length);

// K_s = Y_s - (s/l) Y_l.
Segment KnightBridge(const Segment& segment);

// s -> K_{(rho+s) mod l} - (K_rho ^ K_{rho-}), with rho the earliest minimum
// of the Knight bridge K.
Segment KnightTransform(const Segment& segment);

// Cyclic shift of a path on [0,1] at its earliest minimum, recentered so that
// V_0 = 0. No bridge correction is applied.
Polyline Vervaat(const Polyline& path);

// Cyclic shift of `path` at its earliest minimum, minus the minimum. The
// common core of the Knight and Vervaat transforms.
Polyline CyclicShiftAtMin(const Polyline& path);

struct StickBreaking {
  std::vector<double> v_seq;
  std::vector<double> lengths;  // L_1, L_2, ...
  std::vector<double> points;   // S_0 = 0, S_1, S_2, ...
};

// L_{n+1} = (1 - S_n) V_{n+1}, S_{n+1} = S_n + L_{n+1}, scaled by `horizon`.
StickBreaking StickBreak(std::span<const double> v_seq, double horizon = 1.0);

struct Transform3214Result {
  double u = 0.0;
  double g = 0.0;
  double d = 0.0;
  Polyline path;
  // Jumps of the input relocated by the same reassembly, sizes untouched.
  std::vector<Jump> jumps;
};

// Reassembles the path around the excursion interval (g,d) containing u:
//   [0, d-u)     X_{u+t} - X_u
//   [d-u, d-g]   C_d - C_g + X_{g+t-(d-u)} - X_u
//   [d-g, d)     C_d - C_g + X_{t-(d-g)}
//   [d, 1]       X_t
// At each seam the knot carries the left limit of the piece on the left and
// the value of the piece on the right. Returns nullopt if u lies in no
// interval.
std::optional<Transform3214Result> Transform3214(
    const Polyline& path, std::span<const Jump> jumps,
    std::span<const ExcursionInterval> intervals, double u);

}  // namespace eitk

#endif  // EITK_TRANSFORMS_HPP_
