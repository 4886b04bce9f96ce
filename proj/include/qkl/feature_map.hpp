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
 * @file feature_map.hpp
 * @brief Gate-level circuits and Pauli feature-map construction.
 *
 * Circuits use the restricted alphabet {H, RX(theta), P(theta), CX}. A Pauli
 * feature map applies, per repetition, a Hadamard layer, the single-qubit
 * terms of every "Z"/"Y" layer, and then the adjacent-pair terms of every
 * "ZZ"/"YY" layer (linear entanglement). Y-basis terms are conjugated by
 * RX(+pi/2) ... RX(-pi/2).
 *
 * Circuits remember how gates were grouped into layers. `block_depth()` is
 * the number of such layers: the builder emits pair blocks strictly in index
 * order, so it is the depth under sequential pair-block scheduling.
 * `dag_depth()` is the usual as-soon-as-possible depth and is informational.
 */

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qkl {

enum class GateKind { Hadamard, RotateX, Phase, ControlledNot };

std::string_view gate_mnemonic(GateKind kind);

struct Gate {
  GateKind kind = GateKind::Hadamard;
  double angle = 0.0;              ///< radians; RotateX and Phase only
  std::array<int, 2> qubits{0, 0};  ///< {target} or {control, target}

  static Gate h(int q) { return {GateKind::Hadamard, 0.0, {q, 0}}; }
  static Gate rx(double theta, int q) { return {GateKind::RotateX, theta, {q, 0}}; }
  static Gate phase(double theta, int q) { return {GateKind::Phase, theta, {q, 0}}; }
  static Gate cx(int control, int target) {
    return {GateKind::ControlledNot, 0.0, {control, target}};
  }

  [[nodiscard]] int arity() const { return kind == GateKind::ControlledNot ? 2 : 1; }
  [[nodiscard]] bool has_angle() const {
    return kind == GateKind::RotateX || kind == GateKind::Phase;
  }
  [[nodiscard]] std::span<const int> operands() const {
    return {qubits.data(), static_cast<std::size_t>(arity())};
  }

  /// Throws std::invalid_argument when the gate breaks an invariant on an
  /// n-qubit register.
  void validate(int num_qubits) const;

  bool operator==(const Gate&) const = default;
};

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  /// Appends one gate as its own layer.
  void append(const Gate& gate);
  /// Appends gates that act on pairwise disjoint qubits as a single layer.
  void append_layer(std::span<const Gate> layer);

  [[nodiscard]] int num_qubits() const { return num_qubits_; }
  [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
  [[nodiscard]] std::size_t size() const { return gates_.size(); }
  [[nodiscard]] bool empty() const { return gates_.empty(); }
  [[nodiscard]] int block_depth() const { return static_cast<int>(layer_sizes_.size()); }
  [[nodiscard]] const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  [[nodiscard]] int dag_depth() const;
  [[nodiscard]] std::size_t count(GateKind kind) const;

  /// Appends every layer of `other` (same register width) after this one.
  void extend(const Circuit& other);

  bool operator==(const Circuit&) const = default;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> layer_sizes_;
};

/// Reverses gate and layer order and negates every angle. H and CX are their
/// own inverses. adjoint(adjoint(c)) == c.
Circuit adjoint(const Circuit& c);

// Line format: "QUBITS n" header, then one gate per line:
//   H q0 | RX <angle> q0 | P <angle> q1 | CX q0 q1
// Angles are written with 17 significant digits. Layer grouping is not
// stored; a parsed circuit has one gate per layer.
void write_circuit(std::ostream& os, const Circuit& c);
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(std::string_view text);

// --- Pauli feature maps ----------------------------------------------------

enum class PauliTerm { Z, ZZ, Y, YY };

std::string_view pauli_term_name(PauliTerm t);
PauliTerm parse_pauli_term(std::string_view s);

enum class Preset { Z, ZZ, YYY, YZZ, ZZZ };

inline constexpr std::array<Preset, 5> kAllPresets{Preset::Z, Preset::ZZ, Preset::YYY,
                                                   Preset::YZZ, Preset::ZZZ};

/// Short CLI name: "z", "zz", "yyy", "yzz", "zzz".
std::string_view preset_name(Preset p);
/// Human-readable name, e.g. "Pauli Y YY".
std::string_view preset_title(Preset p);
Preset parse_preset(std::string_view name);
std::vector<PauliTerm> preset_layers(Preset p);

inline constexpr int kDefaultRepetitions = 2;

struct FeatureMapSpec {
  std::vector<PauliTerm> pauli_layers;
  int repetitions = kDefaultRepetitions;
  int num_features = 1;

  static FeatureMapSpec preset(Preset p, int num_features, int repetitions = kDefaultRepetitions);

  [[nodiscard]] bool has_pair_terms() const;
  void validate() const;

  bool operator==(const FeatureMapSpec&) const = default;
};

/// Phase angle of a single-qubit term: 2 * x[j].
double data_map_single(std::span<const double> x, int j);
/// Phase angle of a pair term: 2 * (pi - x[j]) * (pi - x[k]), j < k.
double data_map_pair(std::span<const double> x, int j, int k);

Circuit build_feature_map(const FeatureMapSpec& spec, std::span<const double> x);

}  // namespace qkl
