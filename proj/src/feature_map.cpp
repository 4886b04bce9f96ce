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

#include "qkl/feature_map.hpp"

#include <algorithm>
#include <charconv>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qkl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

bool is_two_qubit(PauliTerm t) { return t == PauliTerm::ZZ || t == PauliTerm::YY; }
bool is_y_basis(PauliTerm t) { return t == PauliTerm::Y || t == PauliTerm::YY; }

std::string format_angle(double a) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), a, std::chars_format::general, 17);
  return {buf, res.ptr};
}

}  // namespace

std::string_view gate_mnemonic(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard: return "H";
    case GateKind::RotateX: return "RX";
    case GateKind::Phase: return "P";
    case GateKind::ControlledNot: return "CX";
  }
  return "?";
}

void Gate::validate(int num_qubits) const {
  for (const int q : operands()) {
    if (q < 0 || q >= num_qubits) {
      throw std::invalid_argument("gate " + std::string(gate_mnemonic(kind)) + " qubit " +
                                  std::to_string(q) + " outside register of " +
                                  std::to_string(num_qubits));
    }
  }
  if (kind == GateKind::ControlledNot && qubits[0] == qubits[1])
    throw std::invalid_argument("CX control equals target");
  if (!has_angle() && angle != 0.0)
    throw std::invalid_argument(std::string(gate_mnemonic(kind)) + " carries no angle");
  if (arity() == 1 && qubits[1] != 0)
    throw std::invalid_argument("single-qubit gate with a second operand");
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
}

void Circuit::append(const Gate& gate) { append_layer(std::span<const Gate>(&gate, 1)); }

void Circuit::append_layer(std::span<const Gate> layer) {
  if (layer.empty()) return;
  std::vector<bool> used(static_cast<std::size_t>(num_qubits_), false);
  for (const auto& g : layer) {
    g.validate(num_qubits_);
    for (const int q : g.operands()) {
      if (used[static_cast<std::size_t>(q)])
        throw std::invalid_argument("layer touches qubit " + std::to_string(q) + " twice");
      used[static_cast<std::size_t>(q)] = true;
    }
  }
  gates_.insert(gates_.end(), layer.begin(), layer.end());
  layer_sizes_.push_back(layer.size());
}

void Circuit::extend(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("extend: register mismatch");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  layer_sizes_.insert(layer_sizes_.end(), other.layer_sizes_.begin(), other.layer_sizes_.end());
}

int Circuit::dag_depth() const {
  std::vector<int> frontier(static_cast<std::size_t>(num_qubits_), 0);
  int depth = 0;
  for (const auto& g : gates_) {
    int level = 0;
    for (const int q : g.operands()) level = std::max(level, frontier[static_cast<std::size_t>(q)]);
    ++level;
    for (const int q : g.operands()) frontier[static_cast<std::size_t>(q)] = level;
    depth = std::max(depth, level);
  }
  return depth;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

Circuit adjoint(const Circuit& c) {
  Circuit out(c.num_qubits());
  const auto& gates = c.gates();
  const auto& sizes = c.layer_sizes();
  std::size_t end = gates.size();
  std::vector<Gate> layer;
  for (auto it = sizes.rbegin(); it != sizes.rend(); ++it) {
    const std::size_t begin = end - *it;
    layer.assign(gates.begin() + static_cast<std::ptrdiff_t>(begin),
                 gates.begin() + static_cast<std::ptrdiff_t>(end));
    std::reverse(layer.begin(), layer.end());
    for (auto& g : layer) {
      if (g.has_angle()) g.angle = -g.angle;
    }
    out.append_layer(layer);
    end = begin;
  }
  return out;
}

void write_circuit(std::ostream& os, const Circuit& c) {
  os << "QUBITS " << c.num_qubits() << '\n';
  for (const auto& g : c.gates()) {
    os << gate_mnemonic(g.kind);
    if (g.has_angle()) os << ' ' << format_angle(g.angle);
    for (const int q : g.operands()) os << " q" << q;
    os << '\n';
  }
}

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  write_circuit(os, c);
  return os.str();
}

Circuit circuit_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) -> std::invalid_argument {
    return std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_qubit = [&](const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'q') throw fail("bad qubit token '" + tok + "'");
    int q = 0;
    auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
    if (ec != std::errc{} || p != tok.data() + tok.size()) throw fail("bad qubit token '" + tok + "'");
    return q;
  };
  auto parse_angle = [&](const std::string& tok) {
    double a = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), a);
    if (ec != std::errc{} || p != tok.data() + tok.size()) throw fail("bad angle '" + tok + "'");
    return a;
  };

  std::optional<Circuit> circuit;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!circuit) {
      if (tok.size() != 2 || tok[0] != "QUBITS") throw fail("expected 'QUBITS n' header");
      int n = 0;
      auto [p, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), n);
      if (ec != std::errc{} || p != tok[1].data() + tok[1].size()) throw fail("bad qubit count");
      circuit.emplace(n);
      continue;
    }
    const std::string& op = tok[0];
    Gate g;
    if (op == "H" && tok.size() == 2) {
      g = Gate::h(parse_qubit(tok[1]));
    } else if (op == "RX" && tok.size() == 3) {
      g = Gate::rx(parse_angle(tok[1]), parse_qubit(tok[2]));
    } else if (op == "P" && tok.size() == 3) {
      g = Gate::phase(parse_angle(tok[1]), parse_qubit(tok[2]));
    } else if (op == "CX" && tok.size() == 3) {
      g = Gate::cx(parse_qubit(tok[1]), parse_qubit(tok[2]));
    } else {
      throw fail("unrecognized gate line '" + line + "'");
    }
    try {
      circuit->append(g);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  if (!circuit) throw std::invalid_argument("circuit text: missing QUBITS header");
  return std::move(*circuit);
}

// --- Pauli feature maps ----------------------------------------------------

std::string_view pauli_term_name(PauliTerm t) {
  switch (t) {
    case PauliTerm::Z: return "Z";
    case PauliTerm::ZZ: return "ZZ";
    case PauliTerm::Y: return "Y";
    case PauliTerm::YY: return "YY";
  }
  return "?";
}

PauliTerm parse_pauli_term(std::string_view s) {
  if (s == "Z") return PauliTerm::Z;
  if (s == "ZZ") return PauliTerm::ZZ;
  if (s == "Y") return PauliTerm::Y;
  if (s == "YY") return PauliTerm::YY;
  throw std::invalid_argument("unsupported Pauli string '" + std::string(s) + "'");
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Z: return "z";
    case Preset::ZZ: return "zz";
    case Preset::YYY: return "yyy";
    case Preset::YZZ: return "yzz";
    case Preset::ZZZ: return "zzz";
  }
  return "?";
}

std::string_view preset_title(Preset p) {
  switch (p) {
    case Preset::Z: return "Pauli Z";
    case Preset::ZZ: return "Pauli ZZ";
    case Preset::YYY: return "Pauli Y YY";
    case Preset::YZZ: return "Pauli Y ZZ";
    case Preset::ZZZ: return "Pauli Z ZZ";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  for (const auto p : kAllPresets) {
    if (name == preset_name(p) || name == preset_title(p)) return p;
  }
  throw std::invalid_argument("unknown feature map '" + std::string(name) + "'");
}

std::vector<PauliTerm> preset_layers(Preset p) {
  switch (p) {
    case Preset::Z: return {PauliTerm::Z};
    case Preset::ZZ: return {PauliTerm::ZZ};
    case Preset::YYY: return {PauliTerm::Y, PauliTerm::YY};
    case Preset::YZZ: return {PauliTerm::Y, PauliTerm::ZZ};
    case Preset::ZZZ: return {PauliTerm::Z, PauliTerm::ZZ};
  }
  return {};
}

FeatureMapSpec FeatureMapSpec::preset(Preset p, int num_features, int repetitions) {
  FeatureMapSpec spec{preset_layers(p), repetitions, num_features};
  spec.validate();
  return spec;
}

bool FeatureMapSpec::has_pair_terms() const {
  return std::any_of(pauli_layers.begin(), pauli_layers.end(), is_two_qubit);
}

void FeatureMapSpec::validate() const {
  if (repetitions < 1) throw std::invalid_argument("feature map repetitions must be >= 1");
  if (num_features < 1) throw std::invalid_argument("feature map needs >= 1 feature");
  if (pauli_layers.empty()) throw std::invalid_argument("feature map has no Pauli layers");
  if (has_pair_terms() && num_features < 2)
    throw std::invalid_argument("two-qubit Pauli layers need >= 2 features");
}

double data_map_single(std::span<const double> x, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= x.size())
    throw std::out_of_range("data_map_single: index " + std::to_string(j) + " out of range");
  return 2.0 * x[static_cast<std::size_t>(j)];
}

double data_map_pair(std::span<const double> x, int j, int k) {
  if (j < 0 || k < 0 || static_cast<std::size_t>(j) >= x.size() ||
      static_cast<std::size_t>(k) >= x.size())
    throw std::out_of_range("data_map_pair: index out of range");
  if (j >= k) throw std::invalid_argument("data_map_pair: requires j < k");
  return 2.0 * (kPi - x[static_cast<std::size_t>(j)]) * (kPi - x[static_cast<std::size_t>(k)]);
}

Circuit build_feature_map(const FeatureMapSpec& spec, std::span<const double> x) {
  spec.validate();
  const int n = spec.num_features;
  if (x.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("feature vector has " + std::to_string(x.size()) +
                                " entries, feature map expects " + std::to_string(n));
  }

  Circuit c(n);
  std::vector<Gate> layer;
  layer.reserve(static_cast<std::size_t>(n));
  auto all_qubits = [&](auto&& make) {
    layer.clear();
    for (int q = 0; q < n; ++q) layer.push_back(make(q));
    c.append_layer(layer);
  };

  for (int rep = 0; rep < spec.repetitions; ++rep) {
    all_qubits([](int q) { return Gate::h(q); });

    for (const auto term : spec.pauli_layers) {
      if (is_two_qubit(term)) continue;
      const bool y = is_y_basis(term);
      if (y) all_qubits([](int q) { return Gate::rx(kHalfPi, q); });
      all_qubits([&](int q) { return Gate::phase(data_map_single(x, q), q); });
      if (y) all_qubits([](int q) { return Gate::rx(-kHalfPi, q); });
    }

    for (const auto term : spec.pauli_layers) {
      if (!is_two_qubit(term)) continue;
      const bool y = is_y_basis(term);
      for (int j = 0; j + 1 < n; ++j) {
        const int k = j + 1;
        if (y) {
          const Gate in[] = {Gate::rx(kHalfPi, j), Gate::rx(kHalfPi, k)};
          c.append_layer(in);
        }
        c.append(Gate::cx(j, k));
        c.append(Gate::phase(data_map_pair(x, j, k), k));
        c.append(Gate::cx(j, k));
        if (y) {
          const Gate out[] = {Gate::rx(-kHalfPi, j), Gate::rx(-kHalfPi, k)};
          c.append_layer(out);
        }
      }
    }
  }
  return c;
}

}  // namespace qkl
