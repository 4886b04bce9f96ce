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
 * @file svm.hpp
 * @brief Soft-margin SVM on a precomputed Gram matrix, trained by SMO.
 *
 * Solves the dual
 *
 *   max  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
 *   s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0
 *
 * with maximal-violating-pair working-set selection. Training stops when the
 * KKT gap m(a) - M(a) drops to `tol`.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkl/kernel.hpp"

namespace qkl {

struct SvmParams {
  double C = 1.0;
  double tol = 1e-3;
  std::uint64_t seed = 0;  ///< permutes the scan order used to break ties
  std::size_t max_iterations = 10'000'000;
};

struct SvmModel {
  std::vector<double> alphas;
  double bias = 0.0;
  std::vector<int> labels;
  double C = 1.0;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  std::vector<std::size_t> support_indices;
  std::vector<std::string> train_ids;
  std::string kernel_fingerprint;

  bool operator==(const SvmModel&) const = default;
};

struct TrainingReport {
  std::size_t iterations = 0;
  double final_gap = 0.0;
  bool indefinite_curvature = false;  ///< some step saw K_ii + K_jj - 2K_ij <= 0
  bool converged = true;
  std::vector<double> objective_trace;  ///< filled only when requested
};

/// Dual objective sum(a) - 1/2 a^T Q a with Q_ij = y_i y_j K_ij.
double dual_objective(const Eigen::MatrixXd& gram, std::span<const int> labels,
                      std::span<const double> alphas);

/// Throws std::invalid_argument on a non-square or non-symmetric Gram,
/// mismatched labels, labels outside {-1, +1}, or a single class.
SvmModel train(const GramMatrix& gram, std::span<const int> labels, const SvmParams& params = {},
               TrainingReport* report = nullptr, bool trace_objective = false);

/// f_t = sum_i a_i y_i K[t][i] + b. The cross Gram's column ids must equal
/// the model's training ids.
std::vector<double> decision_values(const SvmModel& model, const GramMatrix& cross_gram);

/// +1 where f > 0, otherwise -1 (ties go to -1).
std::vector<int> labels_from_decisions(std::span<const double> decisions);

std::vector<int> predict(const SvmModel& model, const GramMatrix& cross_gram);

}  // namespace qkl
