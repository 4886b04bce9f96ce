// Copyright 2026 The qkernel-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace qkl {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective 64-bit avalanche.
std::uint64_t splitmix64(std::uint64_t z) noexcept;

/// Derives a child seed from an ordered list of words.
///
/// The state starts at 0x6A09E667F3BCC909 and absorbs each word w as
/// `h = splitmix64(h ^ splitmix64(w + 0x9E3779B97F4A7C15))`. The result is
/// platform independent and order sensitive. Every per-entry, per-trial and
/// per-kernel seed in the library is derived through this function.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;
std::uint64_t derive_seed(std::span<const std::uint64_t> words) noexcept;

/// 64-bit FNV-1a over the bytes of s.
std::uint64_t hash_string(std::string_view s) noexcept;

/// Seeded generator with portable output.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// converts raw words itself instead of going through the implementation
/// defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (one value per call).
  double normal();

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qkl
