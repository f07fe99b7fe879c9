// Copyright 2026 The bdris authors
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

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include <Eigen/Core>

namespace bdris {

// Seeding and stream derivation are fully specified here so that every draw
// is reproducible independently of thread scheduling: a stream id is the
// iterated splitmix64 absorption of (seed, word_0, word_1, ...), and each
// logical random object (one channel vector, one optimizer restart, ...)
// owns its own stream.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> words) {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t w : words) {
    state ^= w + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    h = splitmix64(state);
  }
  return h;
}

/// xoshiro256++ (Blackman & Vigna), seeded from a 64-bit stream id.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t stream_id) {
    std::uint64_t sm = stream_id;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on (0, 1]; strictly positive so logarithms are safe.
  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard real normal via Box-Muller.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    return r * std::cos(2.0 * std::numbers::pi * uniform01());
  }

  /// Standard circularly-symmetric complex normal, E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double r = std::sqrt(-std::log(uniform01()));
    const double phi = 2.0 * std::numbers::pi * uniform01();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  Eigen::VectorXcd complex_normal_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Stream tags used across the library; fixed values are part of the
// reproducibility contract.
namespace stream_tag {
inline constexpr std::uint64_t kRxChannel = 1;
inline constexpr std::uint64_t kTxChannel = 2;
inline constexpr std::uint64_t kTrainingSet = 3;
inline constexpr std::uint64_t kEvalSet = 4;
inline constexpr std::uint64_t kReactanceInit = 5;
}  // namespace stream_tag

}  // namespace bdris
