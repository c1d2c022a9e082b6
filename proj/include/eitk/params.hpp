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

#ifndef EITK_PARAMS_HPP_
#define EITK_PARAMS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace eitk {

// Raised for malformed parameters, configs and out-of-domain arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SignPattern { kAlternating, kPositive, kNegative };

// Explicit finite jump list.
struct BetaList {
  std::vector<double> values;
};

// beta_i = c * s_i * i^(-p), i >= 1. Alternating means s_i = (-1)^i.
struct PowerLawBetas {
  double c = 1.0;
  double p = 1.0;
  SignPattern signs = SignPattern::kPositive;

  double Term(std::size_t i) const;
};

using BetaSpec = std::variant<BetaList, PowerLawBetas>;

enum class Variation { kFinite, kInfinite };
enum class Spectral { kNone, kPositive, kNegative, kTwoSided };

struct Classification {
  Variation variation = Variation::kFinite;
  bool um = false;
  bool npl = false;
  Spectral spectral = Spectral::kNone;
};

// Canonical parameters (alpha, sigma, beta) of an extremal EI process
//   X_t = alpha t + sigma b_t + sum_i beta_i (1{U_i <= t} - t).
// Infinite beta families are truncated at the first N with
// sum_{i>N} beta_i^2 <= truncation_tol^2; the tail is dropped.
struct CanonicalParams {
  double alpha = 0.0;
  double sigma = 0.0;
  BetaSpec betas = BetaList{};
  double truncation_tol = 1e-2;
  // Overrides the tolerance-derived truncation index when set.
  std::optional<std::size_t> max_jumps;

  // Validates the invariants; throws InvalidArgument.
  void Validate() const;

  bool is_power_law() const {
    return std::holds_alternative<PowerLawBetas>(betas);
  }

  // Number of jumps kept after truncation.
  std::size_t TruncationIndex() const;

  // The kept jump sizes beta_1..beta_N.
  std::vector<double> MaterializeBetas() const;

  // Upper bound on sum_{i>n} beta_i^2 (exact zero for lists past their end).
  double TailSquareBound(std::size_t n) const;

  // drift of the finite-variation parametrization, alpha - sum beta_i.
  // Only meaningful when the kept family is the whole family.
  double FiniteVariationDrift() const;

  // Same process scaled by `factor` (alpha, sigma and every beta).
  CanonicalParams Scaled(double factor) const;

  CanonicalParams WithMaxJumps(std::size_t n) const {
    CanonicalParams out = *this;
    out.max_jumps = n;
    return out;
  }
};

// Hard cap on materialized jumps per path.
inline constexpr std::size_t kMaxMaterializedJumps = std::size_t{1} << 26;

Classification Classify(const CanonicalParams& params);

std::string ToString(Variation v);
std::string ToString(Spectral s);
std::string ToString(SignPattern s);
SignPattern ParseSignPattern(const std::string& s);

// JSON parameter documents. Accepts nested {"beta": {"kind": ...}} objects and
// flat dotted keys ("beta.kind"). Throws InvalidArgument.
CanonicalParams ParamsFromJson(const std::string& text,
                               int* grid_level = nullptr);
CanonicalParams ParamsFromFile(const std::string& path,
                               int* grid_level = nullptr);
std::string ParamsToJson(const CanonicalParams& params);

// FNV-1a over the canonical JSON serialization.
std::uint64_t ParamsHash(const CanonicalParams& params);

}  // namespace eitk

#endif  // EITK_PARAMS_HPP_
