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

#ifndef EITK_RNG_HPP_
#define EITK_RNG_HPP_

#include <cstdint>
#include <random>

namespace eitk {

// Mixes a 64-bit key (SplitMix64 finalizer).
std::uint64_t MixKey(std::uint64_t x);

// Derives the seed of an independent stream identified by (seed, key).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t key);

// Keyed random stream. Every replication r of an experiment rooted at `seed`
// draws from Rng(DeriveSeed(seed, r)), so results never depend on which worker
// ran which replication.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent child stream; does not advance this stream.
  Rng Split(std::uint64_t key) const { return Rng(DeriveSeed(seed_, key)); }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double Uniform();

  // Standard normal (Marsaglia polar method).
  double Normal();

  // Number of failures before the first success of a Bernoulli(p) sequence.
  std::uint64_t Geometric(double p);

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eitk

#endif  // EITK_RNG_HPP_
