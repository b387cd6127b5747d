// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINTOMO_RNG_HPP_
#define SPINTOMO_RNG_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

// Deterministic random-number layer.
//
// Everything stochastic in this library draws from SplitMix64, a tiny
// counter-based generator whose whole state is one 64-bit word.  Two rules
// make results reproducible and order-independent:
//
//   * a master seed never feeds a generator directly; work unit k draws from
//     the substream generator Substream(seed, k), and
//   * each logical work unit (one measurement axis, one optimization
//     candidate) owns exactly one substream.
//
// Substreams with distinct indices are statistically independent for any
// master seed, so loops over work units can run in any order - or in
// parallel - without changing a single drawn value.

namespace spintomo {

// SplitMix64: state advances by the golden-ratio increment, outputs pass
// through a 3-round avalanche mix.  Satisfies the C++ URBG requirements.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with the full 53 bits of mantissa.
  double UniformDouble() {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// The generator of work-unit `index` under master seed `seed`: the seed is
// finalized through one SplitMix64 step, offset by the index, and finalized
// again, so neighboring indices land in unrelated regions of state space.
inline SplitMix64 Substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 outer(seed);
  SplitMix64 inner(outer() + index);
  return SplitMix64(inner());
}

// One multinomial draw: `shots` balls over bins with the given probability
// weights (nonnegative, summing to 1 up to rounding), via the chain rule -
// bin j receives a binomial share of what the earlier bins left over.
// Throws std::invalid_argument on negative weights, an empty vector, or
// shots < 0.
inline std::vector<std::int64_t> MultinomialSample(
    SplitMix64& rng, std::int64_t shots, const std::vector<double>& weights) {
  if (weights.empty()) {
    throw std::invalid_argument("multinomial needs at least one bin");
  }
  if (shots < 0) {
    throw std::invalid_argument("multinomial needs shots >= 0");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("multinomial weights must be >= 0");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("multinomial weights must not all vanish");
  }

  std::vector<std::int64_t> counts(weights.size(), 0);
  std::int64_t remaining = shots;
  double mass_left = total;
  for (std::size_t j = 0; j + 1 < weights.size() && remaining > 0; ++j) {
    const double p =
        mass_left > 0.0 ? std::min(1.0, std::max(0.0, weights[j] / mass_left))
                        : 0.0;
    std::binomial_distribution<std::int64_t> binomial(remaining, p);
    const std::int64_t take = binomial(rng);
    counts[j] = take;
    remaining -= take;
    mass_left -= weights[j];
  }
  counts.back() += remaining;
  return counts;
}

}  // namespace spintomo

#endif  // SPINTOMO_RNG_HPP_
