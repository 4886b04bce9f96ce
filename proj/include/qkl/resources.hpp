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
 * @file resources.hpp
 * @brief Closed-form gate/depth counts for the Pauli Y YY map, checked
 *        against constructed circuits.
 *
 * For F features and R repetitions:
 *   H = F R, RX = (6F - 4) R, P = (2F - 1) R, CX = (2F - 2) R,
 *   total = (11F - 7) R, depth = (5F - 1) R, qubits = F.
 * Depth is the sequential pair-block layer count (Circuit::block_depth).
 */

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "qkl/feature_map.hpp"

namespace qkl {

struct ResourceEstimate {
  int features = 0;
  int repetitions = 0;
  std::size_t h = 0;
  std::size_t rx = 0;
  std::size_t p = 0;
  std::size_t cx = 0;
  std::size_t total = 0;
  std::size_t depth = 0;
  int qubits = 0;

  bool operator==(const ResourceEstimate&) const = default;
};

/// Throws std::invalid_argument for F < 2 or R < 1.
ResourceEstimate estimate(int features, int repetitions);

/// Tallies a built circuit. Works for any preset; `depth` is block_depth.
ResourceEstimate tally(const Circuit& c, int repetitions);

struct ResourceReport {
  ResourceEstimate formula;
  ResourceEstimate measured;
  int dag_depth = 0;  ///< informational, not compared
  bool match = false;
};

ResourceReport verify_against_circuit(int features, int repetitions, std::span<const double> x);

/// Same, with the feature vector fixed to x_j = 0.1 (j + 1).
ResourceReport verify_against_circuit(int features, int repetitions);

/// Tab-separated table, one row per report, with a header line.
void write_resource_table(std::ostream& os, std::span<const ResourceReport> reports);

}  // namespace qkl
