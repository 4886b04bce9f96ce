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

// Independent reference implementations used only by the tests. None of them
// call into the library code they check.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qkl/feature_map.hpp"

namespace qkl::oracle {

/// Full 2^n x 2^n unitary of one gate, qubit 0 least significant, built from
/// Kronecker products (single-qubit gates) or a basis permutation (CX).
Eigen::MatrixXcd gate_unitary(const Gate& g, int num_qubits);

/// U_last ... U_1 |0...0> by dense matrix-vector products.
Eigen::VectorXcd circuit_state(const Circuit& c);

/// Maximum of sum(a) - 1/2 a^T Q a over {0 <= a <= C, y^T a = 0}, Q_ij =
/// y_i y_j K_ij, by projected gradient ascent. The projection solves for the
/// multiplier of the equality constraint by bisection.
double dual_qp_optimum(const Eigen::MatrixXd& K, const std::vector<int>& y, double C,
                       int iterations = 200000);

/// Dense random matrix A A^T / n with entries of A uniform in [-1, 1).
Eigen::MatrixXd random_psd(int n, std::uint64_t seed);

}  // namespace qkl::oracle
