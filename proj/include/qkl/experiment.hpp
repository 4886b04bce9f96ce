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
 * @file experiment.hpp
 * @brief Configuration-space sweeps, reference-trial selection, EQA
 *        differences, PTRI ruggedness surfaces and the variability study.
 *
 * Every (config, trial) pair draws one stratified subset with
 *
 *   trial_seed = derive_seed({master_seed, F, N, trial})
 *
 * and evaluates all kernels on that same subset (paired design). Features are
 * min-max scaled to [0, pi] with bounds fitted on the training split only.
 */

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkl/data.hpp"
#include "qkl/kernel.hpp"
#include "qkl/metrics.hpp"
#include "qkl/svm.hpp"

namespace qkl {

struct ConfigPoint {
  int features = 0;       ///< F
  std::size_t size = 0;   ///< N

  auto operator<=>(const ConfigPoint&) const = default;
};

std::uint64_t trial_seed(std::uint64_t master_seed, const ConfigPoint& point, std::size_t trial);

/// The 15-point default grid: sizes {200, 250, 300, 350, 400} x features {5, 6, 7}.
std::vector<ConfigPoint> default_grid();
std::vector<ConfigPoint> make_grid(std::span<const int> features, std::span<const std::size_t> sizes);

struct EvaluationResult {
  ConfusionMatrix confusion;
  double balanced_accuracy = 0.0;
  double f1 = 0.0;
  double gamma = 0.0;  ///< resolved RBF gamma, 0 for quantum kernels
  TrainingReport training;
};

/// Scales the split, builds train and cross Grams, trains and scores.
EvaluationResult evaluate_kernel(const Split& split, const KernelConfig& kernel,
                                 const SvmParams& svm, std::uint64_t trial_seed, int threads = 1);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::uint64_t subset_fingerprint = 0;
  double balanced_accuracy = 0.0;
  double f1 = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation (n - 1), 0 for one value

  bool operator==(const Aggregate&) const = default;
};

Aggregate aggregate(std::span<const double> values);

struct SweepCell {
  ConfigPoint point;
  std::string kernel;
  std::vector<TrialRecord> trials;
  Aggregate balanced_accuracy;
  Aggregate f1;

  bool operator==(const SweepCell&) const = default;
};

struct SweepOptions {
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  double split_ratio = 0.7;
  SvmParams svm;
  int threads = 1;  ///< never affects results
};

struct SweepResult {
  std::vector<ConfigPoint> configs;
  std::vector<KernelConfig> kernels;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  double split_ratio = 0.7;
  SvmParams svm;
  std::vector<SweepCell> cells;  ///< config-major, kernel-minor

  [[nodiscard]] std::vector<std::string> kernel_names() const;
  [[nodiscard]] bool has_kernel(std::string_view name) const;
  /// Throws std::out_of_range when absent.
  [[nodiscard]] const SweepCell& cell(const ConfigPoint& point, std::string_view kernel) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

SweepResult run_sweep(const Dataset& ds, std::span<const ConfigPoint> configs,
                      std::span<const KernelConfig> kernels, const SweepOptions& options,
                      const ProgressFn& progress = {});

struct ReferenceTrials {
  ConfigPoint point;
  std::size_t closest_to_mean = 0;
  std::size_t closest_to_min = 0;
  std::size_t closest_to_max = 0;
};

/// Per config, the trials whose baseline balanced accuracy is nearest the
/// mean, minimum and maximum. Ties go to the lowest trial index.
std::vector<ReferenceTrials> select_reference_trials(const SweepResult& sr,
                                                     std::string_view baseline);

/// Same selection over a bare list of metric values.
ReferenceTrials select_reference_trials(std::span<const double> values);

struct ConfigValue {
  ConfigPoint point;
  double value = 0.0;
};

/// mean BA(quantum) - mean BA(classical) per config. Positive values lie
/// above the zero-advantage line.
std::vector<ConfigValue> eqa_difference(const SweepResult& sr, std::string_view quantum,
                                        std::string_view classical);

enum class Metric { BalancedAccuracy, F1 };
std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view s);

/// How trial values are collapsed into one surface height per config.
enum class PtriAveraging {
  ReferencePair,  ///< mean over the baseline's closest-to-min and closest-to-max trials
  AllTrials,
};
std::string_view averaging_name(PtriAveraging a);
PtriAveraging parse_averaging(std::string_view s);

struct PtriGrid {
  std::string method;
  Metric metric = Metric::BalancedAccuracy;
  PtriAveraging averaging = PtriAveraging::ReferencePair;
  std::string baseline;
  std::vector<int> feature_axis;        ///< rows
  std::vector<std::size_t> size_axis;   ///< columns
  Eigen::MatrixXd heights;              ///< surface values z
  Eigen::MatrixXd scores;               ///< ruggedness per cell
};

/// Terrain ruggedness: score(c) = sqrt(sum over the up-to-8 neighbours n of
/// (z_n - z_c)^2). Edge and corner cells use the neighbours that exist.
Eigen::MatrixXd ptri_scores(const Eigen::MatrixXd& heights);

/// Throws std::invalid_argument when the sweep's configs do not form a full
/// rectangular grid, or when a named kernel is missing.
PtriGrid ptri(const SweepResult& sr, std::string_view method, std::string_view baseline,
              PtriAveraging averaging = PtriAveraging::ReferencePair,
              Metric metric = Metric::BalancedAccuracy);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

/// Fixed-width bins [k w, (k + 1) w) spanning the data.
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width);

struct VariabilityOptions {
  double split_ratio = 0.7;
  SvmParams svm;
  double bin_width = 0.01;
  std::optional<std::uint64_t> fixed_trial_seed;  ///< reuse one subset for every trial
  int threads = 1;
};

struct VariabilityResult {
  ConfigPoint point;
  KernelConfig kernel;
  std::uint64_t master_seed = 0;
  std::vector<TrialRecord> records;
  Aggregate balanced_accuracy;
  double bin_width = 0.01;
  std::vector<HistogramBin> histogram;
};

VariabilityResult variability_study(const Dataset& ds, const ConfigPoint& point,
                                    const KernelConfig& kernel, std::size_t trials,
                                    std::uint64_t master_seed, const VariabilityOptions& options = {});

/// Balanced dataset labelled by the sign of <Z> on qubit 0 of the
/// feature-map state of `preset`, a linear functional of the state's density
/// matrix. Points with |<Z>| below `margin` are rejected. Features are drawn
/// uniformly in [0, pi].
Dataset feature_space_dataset(std::uint64_t seed, std::size_t rows, int features, Preset preset,
                              int repetitions, double margin = 0.3);

}  // namespace qkl
