// Copyright 2026 The patrol Authors.
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

#ifndef PATROL_RNG_HPP
#define PATROL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace patrol {

// splitmix64 (Vigna). Used for seed derivation and stream splitting so that
// every (replication, station) pair gets an independent, platform-stable
// stream regardless of execution order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and up to three
/// stream coordinates (e.g. replication, station, purpose).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= 0x517cc1b727220a95ULL + a;
  splitmix64(s);
  s ^= 0x2545f4914f6cdd1dULL + b;
  splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL + c;
  return splitmix64(s);
}

// xoshiro256** (Blackman & Vigna). Distributions below are hand-rolled from
// the raw bits; std::<distribution> output is not specified bit-exactly by
// the standard and would break cross-platform reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate) {
    // 1 - uniform() is in (0, 1], keeping the log finite.
    return -std::log(1.0 - uniform()) / rate;
  }

  /// Uniform integer in [lo, hi] (small ranges; modulo bias is negligible
  /// for the burst-size draws this is used for).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace patrol

#endif  // PATROL_RNG_HPP
