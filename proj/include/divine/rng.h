// Copyright 2026 The Authors.
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

#ifndef DIVINE_RNG_H_
#define DIVINE_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace divine {

// FNV-1a, used for sub-seed derivation and config hashing.
inline std::uint64_t Fnv1a(std::string_view s,
                           std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// All randomness flows from one global seed through named sub-streams.
// Distributions are hand-rolled on top of raw mt19937_64 draws so output
// bytes do not depend on libstdc++ internals.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream)
      : gen_(seed ^ Fnv1a(stream)) {}
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, hi).
  int UniformInt(int hi) {
    return static_cast<int>(Uniform() * hi) % hi;
  }

  // Standard normal via Box-Muller; draws two uniforms per call pair.
  double Normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = Uniform(), u2 = Uniform();
    while (u1 <= 1e-300) u1 = Uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace divine

#endif  // DIVINE_RNG_H_
