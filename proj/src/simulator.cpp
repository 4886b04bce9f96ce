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

#include "qkl/simulator.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qkl/random.hpp"

namespace qkl {

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30)
    throw std::invalid_argument("statevector qubit count out of range");
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2 || !std::has_single_bit(amps_.size()))
    throw std::invalid_argument("statevector length must be a power of two >= 2");
  num_qubits_ = std::countr_zero(amps_.size());
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void Statevector::apply(const Gate& gate) {
  gate.validate(num_qubits_);
  const std::size_t dim = amps_.size();
  const std::size_t bit = std::size_t{1} << gate.qubits[0];

  switch (gate.kind) {
    case GateKind::Hadamard: {
      const double r = std::numbers::sqrt2 / 2.0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | bit];
        amps_[i] = r * (a0 + a1);
        amps_[i | bit] = r * (a0 - a1);
      }
      break;
    }
    case GateKind::RotateX: {
      const double c = std::cos(gate.angle / 2.0);
      const Amplitude ms{0.0, -std::sin(gate.angle / 2.0)};
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | bit];
        amps_[i] = c * a0 + ms * a1;
        amps_[i | bit] = ms * a0 + c * a1;
      }
      break;
    }
    case GateKind::Phase: {
      const Amplitude w = std::polar(1.0, gate.angle);
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) amps_[i] *= w;
      }
      break;
    }
    case GateKind::ControlledNot: {
      const std::size_t target = std::size_t{1} << gate.qubits[1];
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & bit) && !(i & target)) std::swap(amps_[i], amps_[i | target]);
      }
      break;
    }
  }
}

void Statevector::apply(const Circuit& circuit) {
  if (circuit.num_qubits() != num_qubits_)
    throw std::invalid_argument("circuit and statevector widths differ");
  for (const auto& g : circuit.gates()) apply(g);
}

Statevector simulate(const Circuit& c, int max_qubits) {
  if (c.num_qubits() > max_qubits) {
    throw std::invalid_argument("circuit has " + std::to_string(c.num_qubits()) +
                                " qubits, simulator limit is " + std::to_string(max_qubits));
  }
  Statevector s(c.num_qubits());
  s.apply(c);
  return s;
}

Amplitude inner_product(const Statevector& a, const Statevector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("inner_product: width mismatch");
  Amplitude acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double zero_probability(const Statevector& s) { return std::norm(s[0]); }

ShotResult sample_bernoulli(double p, std::uint32_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shot count must be positive");
  Rng rng(seed);
  ShotResult r{shots, 0};
  for (std::uint32_t s = 0; s < shots; ++s) {
    if (rng.uniform() < p) ++r.zero_count;
  }
  return r;
}

ShotResult sample_zero_count(const Statevector& s, std::uint32_t shots, std::uint64_t seed) {
  return sample_bernoulli(zero_probability(s), shots, seed);
}

}  // namespace qkl
