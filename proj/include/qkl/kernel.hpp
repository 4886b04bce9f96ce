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
 * @file kernel.hpp
 * @brief Fidelity quantum kernels, the RBF baseline, and Gram matrices.
 *
 * The quantum kernel is k(x, y) = |<0| U(y)^dagger U(x) |0>|^2 for a Pauli
 * feature map U. Exact mode evaluates it from statevector overlaps. Shots
 * mode estimates it as the all-zeros frequency of the compute-uncompute
 * circuit over a bounded shot budget, seeded per entry so a Gram matrix is
 * bit-identical under any evaluation order or thread count:
 *
 *   symmetric entry (i, j):  derive_seed({master_seed, min(i,j), max(i,j)})
 *   cross entry (i, j):      derive_seed({master_seed, kCrossSeedTag, i, j})
 */

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkl/feature_map.hpp"
#include "qkl/sample.hpp"

namespace qkl {

enum class KernelKind { Quantum, Rbf };
enum class EstimationMode { Exact, Shots };
enum class PsdPolicy { Auto, Always, Never };

inline constexpr std::uint32_t kMaxShots = 1024;
inline constexpr std::uint64_t kCrossSeedTag = 0x43524F5353ULL;  // "CROSS"

struct KernelConfig {
  KernelKind kind = KernelKind::Quantum;
  std::string map_name = "yyy";  ///< preset short name, or "custom"
  std::vector<PauliTerm> pauli_layers = preset_layers(Preset::YYY);
  int repetitions = kDefaultRepetitions;
  double gamma = 0.0;  ///< RBF only; 0 means "derive from the training rows"
  EstimationMode mode = EstimationMode::Exact;
  std::uint32_t shots = kMaxShots;
  std::uint64_t master_seed = 0;
  PsdPolicy psd = PsdPolicy::Auto;
  bool allow_overshoot = false;  ///< lift the 1024-shot cap

  static KernelConfig quantum(Preset p, int repetitions = kDefaultRepetitions);
  static KernelConfig rbf(double gamma = 0.0);

  /// "rbf" or the feature-map name.
  [[nodiscard]] std::string name() const;
  [[nodiscard]] FeatureMapSpec feature_map(int num_features) const;
  /// True when a symmetric Gram built with this config should go through
  /// psd_clip: shots mode under Auto, or forced by policy.
  [[nodiscard]] bool wants_psd_clip() const;
  /// Canonical one-line description, stored in model files.
  [[nodiscard]] std::string fingerprint() const;

  void validate() const;
};

std::string_view mode_name(EstimationMode m);
EstimationMode parse_mode(std::string_view s);

/// Fidelity kernel value between two feature vectors.
///
/// In shots mode the compute-uncompute circuit adjoint(U(y)) . U(x) is
/// simulated and sampled `shots` times with `entry_seed`.
double quantum_kernel_entry(const FeatureMapSpec& spec, std::span<const double> x,
                            std::span<const double> y, EstimationMode mode = EstimationMode::Exact,
                            std::uint32_t shots = kMaxShots, std::uint64_t entry_seed = 0);

/// exp(-gamma * |x - y|^2).
double rbf_kernel_entry(std::span<const double> x, std::span<const double> y, double gamma);

/// 1 / (F * variance of all training feature values); 1 / F when that
/// variance is zero.
double default_rbf_gamma(std::span<const Sample> train);

struct GramMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  KernelConfig config;
  int num_features = 0;
  bool symmetric = false;

  [[nodiscard]] Eigen::Index rows() const { return values.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

/// Symmetric Gram over one sample list; each unordered pair evaluated once.
GramMatrix gram_matrix(std::span<const Sample> samples, const KernelConfig& config,
                       int threads = 1);

/// Gram of rows x cols. Falls back to the symmetric path when the two lists
/// carry identical ids and features.
GramMatrix gram_matrix(std::span<const Sample> rows, std::span<const Sample> cols,
                       const KernelConfig& config, int threads = 1);

double min_eigenvalue(const Eigen::MatrixXd& m);

/// Projects a symmetric Gram onto the PSD cone: negative eigenvalues are
/// zeroed and the result re-symmetrized. Matrices whose smallest eigenvalue
/// is >= -tolerance are returned unchanged.
GramMatrix psd_clip(const GramMatrix& g, double tolerance = 1e-8);

}  // namespace qkl
