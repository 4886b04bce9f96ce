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

#include "qkl/resources.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace qkl {

ResourceEstimate estimate(int features, int repetitions) {
  if (features < 2) throw std::invalid_argument("estimate: need F >= 2");
  if (repetitions < 1) throw std::invalid_argument("estimate: need R >= 1");
  const auto F = static_cast<std::size_t>(features);
  const auto R = static_cast<std::size_t>(repetitions);
  ResourceEstimate e;
  e.features = features;
  e.repetitions = repetitions;
  e.h = F * R;
  e.rx = (6 * F - 4) * R;
  e.p = (2 * F - 1) * R;
  e.cx = (2 * F - 2) * R;
  e.total = (11 * F - 7) * R;
  e.depth = (5 * F - 1) * R;
  e.qubits = features;
  return e;
}

ResourceEstimate tally(const Circuit& c, int repetitions) {
  ResourceEstimate e;
  e.features = c.num_qubits();
  e.repetitions = repetitions;
  e.h = c.count(GateKind::Hadamard);
  e.rx = c.count(GateKind::RotateX);
  e.p = c.count(GateKind::Phase);
  e.cx = c.count(GateKind::ControlledNot);
  e.total = c.size();
  e.depth = static_cast<std::size_t>(c.block_depth());
  e.qubits = c.num_qubits();
  return e;
}

ResourceReport verify_against_circuit(int features, int repetitions, std::span<const double> x) {
  ResourceReport r;
  r.formula = estimate(features, repetitions);
  if (x.size() != static_cast<std::size_t>(features))
    throw std::invalid_argument("verify_against_circuit: x must have F entries");
  const Circuit c = build_feature_map(FeatureMapSpec::preset(Preset::YYY, features, repetitions), x);
  r.measured = tally(c, repetitions);
  r.dag_depth = c.dag_depth();
  r.match = r.formula == r.measured;
  return r;
}

ResourceReport verify_against_circuit(int features, int repetitions) {
  if (features < 2) throw std::invalid_argument("estimate: need F >= 2");
  std::vector<double> x(static_cast<std::size_t>(features));
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = 0.1 * static_cast<double>(j + 1);
  return verify_against_circuit(features, repetitions, x);
}

void write_resource_table(std::ostream& os, std::span<const ResourceReport> reports) {
  os << "F\tR\tqubits\th\trx\tp\tcx\ttotal\tdepth\tmeasured_total\tmeasured_depth\tdag_depth\tmatch\n";
  for (const auto& r : reports) {
    const auto& f = r.formula;
    os << f.features << '\t' << f.repetitions << '\t' << f.qubits << '\t' << f.h << '\t' << f.rx
       << '\t' << f.p << '\t' << f.cx << '\t' << f.total << '\t' << f.depth << '\t'
       << r.measured.total << '\t' << r.measured.depth << '\t' << r.dag_depth << '\t'
       << "match=" << (r.match ? "true" : "false") << '\n';
  }
}

}  // namespace qkl
