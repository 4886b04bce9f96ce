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

/**
 * @file simulator.hpp
 * @brief Dense statevector simulation of {H, RX, P, CX} circuits.
 *
 * Basis ordering is little-endian: qubit q is bit q of the amplitude index,
 * so qubit 0 is the least-significant bit.
 *
 * Gate matrices:
 *   H      = 1/sqrt2 [[1, 1], [1, -1]]
 *   RX(t)  = [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]]
 *   P(t)   = diag(1, e^{i t})
 *   CX     flips the target bit where the control bit is set
 */

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qkl/feature_map.hpp"

namespace qkl {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 16;

class Statevector {
 public:
  /// |0...0> on n qubits.
  explicit Statevector(int num_qubits);
  /// Takes ownership of amplitudes; size must be a power of two.
  explicit Statevector(std::vector<Amplitude> amplitudes);

  [[nodiscard]] int num_qubits() const { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return amps_.size(); }
  [[nodiscard]] std::span<const Amplitude> amplitudes() const { return amps_; }
  [[nodiscard]] const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  [[nodiscard]] double norm_squared() const;

  void apply(const Gate& gate);
  void apply(const Circuit& circuit);

 private:
  int num_qubits_;
  std::vector<Amplitude> amps_;
};

/// U_c |0...0>. Throws std::invalid_argument when the register is wider than
/// max_qubits.
Statevector simulate(const Circuit& c, int max_qubits = kDefaultMaxQubits);

/// <a|b>.
Amplitude inner_product(const Statevector& a, const Statevector& b);

/// |<0...0|psi>|^2.
double zero_probability(const Statevector& s);

struct ShotResult {
  std::uint32_t shots = 0;
  std::uint32_t zero_count = 0;

  [[nodiscard]] double frequency() const {
    return static_cast<double>(zero_count) / static_cast<double>(shots);
  }
};

/// Counts all-zeros outcomes over `shots` independent measurements. Each
/// shot is a Bernoulli draw `u < p` with u from Rng(seed).uniform().
ShotResult sample_zero_count(const Statevector& s, std::uint32_t shots, std::uint64_t seed);

/// Same sampler, starting from a known all-zeros probability.
ShotResult sample_bernoulli(double p, std::uint32_t shots, std::uint64_t seed);

}  // namespace qkl
