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

#ifndef EITK_DINI_HPP_
#define EITK_DINI_HPP_

#include <cstdint>
#include <vector>

#include "eitk/params.hpp"
#include "eitk/report.hpp"

namespace eitk {

// Difference quotients X_h/h at h = 2^-k, k = 1..K, for one replication, from
// the right of 0 and from the left of 1 (the latter is the right-hand
// quotient of the reversed path).
struct DiniSample {
  std::vector<double> right;
  std::vector<double> left;
};

// Running sup and inf over k <= K of a quotient sequence.
struct DiniDiagnostics {
  int depth = 0;
  std::vector<double> running_sup;
  std::vector<double> running_inf;
};

DiniDiagnostics RunningExtremes(const std::vector<double>& quotients);

// Scales, truncation indices and compensators shared by every replication.
struct DiniPlan {
  int K = 0;
  std::vector<double> h;               // h[k] = 2^-k, k = 1..K (h[0] unused)
  std::vector<std::uint64_t> index;    // I(h[k])
  std::vector<double> compensator;     // sum_{i <= I(h[k])} beta_i
};

DiniPlan MakeDiniPlan(const CanonicalParams& params, int K, double eps);

// Samples the quotients jointly. Jump i enters the scale h only when
// i <= I(h), where I(h) is the least index with tail sum of beta^2 at most
// eps^2 h, so the dropped tail moves X_h/h by at most eps in standard
// deviation. Jumps 1..I(1/2) get exact uniforms; the rest are generated only
// where they land within h of 0 or of 1, by geometric skipping. The Brownian
// part is refined exactly from b_{1/2} toward both ends.
DiniSample SampleDiniQuotients(const CanonicalParams& params,
                               const DiniPlan& plan, std::uint64_t seed);
DiniSample SampleDiniQuotients(const CanonicalParams& params, int K,
                               double eps, std::uint64_t seed);

// sum_{i<=n} beta_i of the full (untruncated) family.
double BetaPartialSum(const CanonicalParams& params, std::uint64_t n);

// Least n with sum_{i>n} beta_i^2 <= bound, capped at 2^52.
std::uint64_t DiniTruncationIndex(const CanonicalParams& params, double bound);

struct DiniOptions {
  int K = 22;
  double eps = 0.1;
  std::vector<double> thresholds{10.0, 100.0};
  // Finite-variation control tolerance on |X_h/h - drift| at h = 2^-K.
  double control_tol = 1e-6;
};

// Fractions of replications whose running sup exceeds M and whose running inf
// falls below -M, per direction and threshold. Infinite variation passes when
// all four fractions at the first threshold are >= 0.99; finite variation
// passes when the final quotient is within control_tol of the drift in all
// but a 2^-19 share of replications in both directions.
ExperimentReport DiniDivergenceDiag(const CanonicalParams& params,
                                    const DiniOptions& dini,
                                    const ExperimentOptions& options);

}  // namespace eitk

#endif  // EITK_DINI_HPP_
