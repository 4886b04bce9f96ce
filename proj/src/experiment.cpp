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

#include "qkl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qkl/parallel.hpp"
#include "qkl/random.hpp"
#include "qkl/simulator.hpp"

namespace qkl {

std::uint64_t trial_seed(std::uint64_t master_seed, const ConfigPoint& point, std::size_t trial) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(point.features),
                      static_cast<std::uint64_t>(point.size), static_cast<std::uint64_t>(trial)});
}

std::vector<ConfigPoint> make_grid(std::span<const int> features,
                                   std::span<const std::size_t> sizes) {
  std::vector<ConfigPoint> grid;
  for (const int f : features)
    for (const std::size_t n : sizes) grid.push_back({f, n});
  return grid;
}

std::vector<ConfigPoint> default_grid() {
  const int features[] = {5, 6, 7};
  const std::size_t sizes[] = {200, 250, 300, 350, 400};
  return make_grid(features, sizes);
}

EvaluationResult evaluate_kernel(const Split& split, const KernelConfig& kernel,
                                 const SvmParams& svm, std::uint64_t seed, int threads) {
  const Scaling scaling = fit_scale(split.train);
  const std::vector<Sample> train = apply_scale(scaling, split.train);
  const std::vector<Sample> test = apply_scale(scaling, split.test);

  KernelConfig config = kernel;
  EvaluationResult out;
  if (config.kind == KernelKind::Rbf && config.gamma == 0.0) {
    config.gamma = default_rbf_gamma(train);
  }
  if (config.kind == KernelKind::Rbf) out.gamma = config.gamma;
  if (config.mode == EstimationMode::Shots)
    config.master_seed = derive_seed({seed, hash_string(config.name())});

  GramMatrix gram = gram_matrix(train, config, threads);
  if (config.wants_psd_clip()) gram = psd_clip(gram);

  std::vector<int> train_labels;
  std::vector<int> test_labels;
  for (const auto& s : train) train_labels.push_back(s.label);
  for (const auto& s : test) test_labels.push_back(s.label);

  SvmParams params = svm;
  params.seed = derive_seed({seed, hash_string("svm")});
  const SvmModel model = qkl::train(gram, train_labels, params, &out.training);

  const GramMatrix cross = gram_matrix(test, train, config, threads);
  const std::vector<int> predicted = predict(model, cross);
  out.confusion = confusion(test_labels, predicted);
  out.balanced_accuracy = balanced_accuracy(out.confusion);
  out.f1 = f1(out.confusion);
  return out;
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  for (const double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

namespace {

void fill_aggregates(SweepCell& cell) {
  std::vector<double> ba;
  std::vector<double> f;
  for (const auto& t : cell.trials) {
    ba.push_back(t.balanced_accuracy);
    f.push_back(t.f1);
  }
  cell.balanced_accuracy = aggregate(ba);
  cell.f1 = aggregate(f);
}

}  // namespace

std::vector<std::string> SweepResult::kernel_names() const {
  std::vector<std::string> names;
  for (const auto& k : kernels) names.push_back(k.name());
  return names;
}

bool SweepResult::has_kernel(std::string_view name) const {
  return std::any_of(kernels.begin(), kernels.end(),
                     [name](const KernelConfig& k) { return k.name() == name; });
}

const SweepCell& SweepResult::cell(const ConfigPoint& point, std::string_view kernel) const {
  for (const auto& c : cells) {
    if (c.point == point && c.kernel == kernel) return c;
  }
  throw std::out_of_range("sweep has no cell for kernel '" + std::string(kernel) + "' at F=" +
                          std::to_string(point.features) + ", N=" + std::to_string(point.size));
}

SweepResult run_sweep(const Dataset& ds, std::span<const ConfigPoint> configs,
                      std::span<const KernelConfig> kernels, const SweepOptions& options,
                      const ProgressFn& progress) {
  if (options.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (configs.empty() || kernels.empty())
    throw std::invalid_argument("run_sweep: need at least one config and one kernel");
  std::set<std::string> names;
  for (const auto& k : kernels) {
    k.validate();
    if (!names.insert(k.name()).second)
      throw std::invalid_argument("run_sweep: duplicate kernel name '" + k.name() + "'");
  }
  for (const auto& c : configs) {
    if (c.size > ds.size() || c.features < 1 || static_cast<std::size_t>(c.features) > ds.width())
      throw std::invalid_argument("run_sweep: config F=" + std::to_string(c.features) +
                                  ", N=" + std::to_string(c.size) + " does not fit the dataset");
  }

  SweepResult sr;
  sr.configs.assign(configs.begin(), configs.end());
  sr.kernels.assign(kernels.begin(), kernels.end());
  sr.trials = options.trials;
  sr.master_seed = options.master_seed;
  sr.split_ratio = options.split_ratio;
  sr.svm = options.svm;
  sr.svm.seed = 0;  // per-trial seeds are derived
  for (const auto& c : configs) {
    for (const auto& k : kernels) {
      SweepCell cell;
      cell.point = c;
      cell.kernel = k.name();
      cell.trials.resize(options.trials);
      sr.cells.push_back(std::move(cell));
    }
  }

  const std::size_t items = configs.size() * options.trials;
  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(items, options.threads, [&](std::size_t item) {
    const std::size_t ci = item / options.trials;
    const std::size_t t = item % options.trials;
    const ConfigPoint& point = configs[ci];
    const std::uint64_t seed = trial_seed(options.master_seed, point, t);
    try {
      const Split split = sample_subset(
          ds, {point.size, static_cast<std::size_t>(point.features), seed, options.split_ratio});
      for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
        const EvaluationResult r = evaluate_kernel(split, kernels[ki], options.svm, seed);
        sr.cells[ci * kernels.size() + ki].trials[t] =
            TrialRecord{t, seed, split.fingerprint, r.balanced_accuracy, r.f1};
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep F=" + std::to_string(point.features) + ", N=" +
                               std::to_string(point.size) + ", trial " + std::to_string(t) +
                               ": " + e.what());
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, items);
    }
  });

  for (auto& cell : sr.cells) fill_aggregates(cell);
  return sr;
}

ReferenceTrials select_reference_trials(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("select_reference_trials: no trials");
  const Aggregate agg = aggregate(values);
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  auto closest = [&](double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (std::abs(values[i] - target) < std::abs(values[best] - target)) best = i;
    }
    return best;
  };
  ReferenceTrials r;
  r.closest_to_mean = closest(agg.mean);
  r.closest_to_min = closest(lo);
  r.closest_to_max = closest(hi);
  return r;
}

std::vector<ReferenceTrials> select_reference_trials(const SweepResult& sr,
                                                     std::string_view baseline) {
  if (!sr.has_kernel(baseline))
    throw std::invalid_argument("baseline kernel '" + std::string(baseline) + "' not in sweep");
  std::vector<ReferenceTrials> out;
  for (const auto& point : sr.configs) {
    const SweepCell& cell = sr.cell(point, baseline);
    std::vector<double> ba;
    for (const auto& t : cell.trials) ba.push_back(t.balanced_accuracy);
    ReferenceTrials r = select_reference_trials(ba);
    r.point = point;
    out.push_back(r);
  }
  return out;
}

std::vector<ConfigValue> eqa_difference(const SweepResult& sr, std::string_view quantum,
                                        std::string_view classical) {
  for (const auto name : {quantum, classical}) {
    if (!sr.has_kernel(name))
      throw std::invalid_argument("kernel '" + std::string(name) + "' not in sweep");
  }
  std::vector<ConfigValue> out;
  for (const auto& point : sr.configs) {
    out.push_back({point, sr.cell(point, quantum).balanced_accuracy.mean -
                              sr.cell(point, classical).balanced_accuracy.mean});
  }
  return out;
}

std::string_view metric_name(Metric m) {
  return m == Metric::BalancedAccuracy ? "balanced_accuracy" : "f1";
}

Metric parse_metric(std::string_view s) {
  if (s == "balanced_accuracy" || s == "ba") return Metric::BalancedAccuracy;
  if (s == "f1") return Metric::F1;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

std::string_view averaging_name(PtriAveraging a) {
  return a == PtriAveraging::ReferencePair ? "reference" : "all";
}

PtriAveraging parse_averaging(std::string_view s) {
  if (s == "reference") return PtriAveraging::ReferencePair;
  if (s == "all") return PtriAveraging::AllTrials;
  throw std::invalid_argument("unknown PTRI averaging '" + std::string(s) + "'");
}

Eigen::MatrixXd ptri_scores(const Eigen::MatrixXd& z) {
  const Eigen::Index rows = z.rows();
  const Eigen::Index cols = z.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Eigen::Index dr = -1; dr <= 1; ++dr) {
        for (Eigen::Index dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const Eigen::Index nr = r + dr;
          const Eigen::Index nc = c + dc;
          if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
          const double d = z(nr, nc) - z(r, c);
          acc += d * d;
        }
      }
      s(r, c) = std::sqrt(acc);
    }
  }
  return s;
}

PtriGrid ptri(const SweepResult& sr, std::string_view method, std::string_view baseline,
              PtriAveraging averaging, Metric metric) {
  if (!sr.has_kernel(method))
    throw std::invalid_argument("kernel '" + std::string(method) + "' not in sweep");
  if (averaging == PtriAveraging::ReferencePair && !sr.has_kernel(baseline))
    throw std::invalid_argument("baseline kernel '" + std::string(baseline) + "' not in sweep");

  std::set<int> fs;
  std::set<std::size_t> ns;
  std::set<ConfigPoint> present(sr.configs.begin(), sr.configs.end());
  for (const auto& p : sr.configs) {
    fs.insert(p.features);
    ns.insert(p.size);
  }
  if (present.size() != fs.size() * ns.size())
    throw std::invalid_argument("ptri: ragged grid (configs do not cover every F x N pair)");

  PtriGrid grid;
  grid.method = std::string(method);
  grid.metric = metric;
  grid.averaging = averaging;
  grid.baseline = averaging == PtriAveraging::ReferencePair ? std::string(baseline) : "";
  grid.feature_axis.assign(fs.begin(), fs.end());
  grid.size_axis.assign(ns.begin(), ns.end());
  grid.heights.resize(static_cast<Eigen::Index>(fs.size()), static_cast<Eigen::Index>(ns.size()));

  auto value = [metric](const TrialRecord& t) {
    return metric == Metric::BalancedAccuracy ? t.balanced_accuracy : t.f1;
  };
  for (std::size_t r = 0; r < grid.feature_axis.size(); ++r) {
    for (std::size_t c = 0; c < grid.size_axis.size(); ++c) {
      const ConfigPoint point{grid.feature_axis[r], grid.size_axis[c]};
      const SweepCell& cell = sr.cell(point, method);
      double z = 0.0;
      if (averaging == PtriAveraging::AllTrials) {
        std::vector<double> v;
        for (const auto& t : cell.trials) v.push_back(value(t));
        z = aggregate(v).mean;
      } else {
        std::vector<double> base;
        for (const auto& t : sr.cell(point, baseline).trials) base.push_back(t.balanced_accuracy);
        const ReferenceTrials ref = select_reference_trials(base);
        z = 0.5 * (value(cell.trials[ref.closest_to_min]) + value(cell.trials[ref.closest_to_max]));
      }
      grid.heights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = z;
    }
  }
  grid.scores = ptri_scores(grid.heights);
  return grid;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
  if (values.empty()) return {};
  auto index = [bin_width](double v) { return static_cast<long long>(std::floor(v / bin_width)); };
  long long lo = index(values[0]);
  long long hi = lo;
  for (const double v : values) {
    lo = std::min(lo, index(v));
    hi = std::max(hi, index(v));
  }
  std::vector<HistogramBin> bins;
  for (long long k = lo; k <= hi; ++k) {
    bins.push_back({static_cast<double>(k) * bin_width, static_cast<double>(k + 1) * bin_width, 0});
  }
  for (const double v : values) ++bins[static_cast<std::size_t>(index(v) - lo)].count;
  return bins;
}

VariabilityResult variability_study(const Dataset& ds, const ConfigPoint& point,
                                    const KernelConfig& kernel, std::size_t trials,
                                    std::uint64_t master_seed, const VariabilityOptions& options) {
  if (trials < 2) throw std::invalid_argument("variability_study: need at least 2 trials");
  kernel.validate();
  VariabilityResult out;
  out.point = point;
  out.kernel = kernel;
  out.master_seed = master_seed;
  out.bin_width = options.bin_width;
  out.records.resize(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    const std::uint64_t seed =
        options.fixed_trial_seed ? *options.fixed_trial_seed : trial_seed(master_seed, point, t);
    try {
      const Split split = sample_subset(
          ds, {point.size, static_cast<std::size_t>(point.features), seed, options.split_ratio});
      const EvaluationResult r = evaluate_kernel(split, kernel, options.svm, seed);
      out.records[t] = TrialRecord{t, seed, split.fingerprint, r.balanced_accuracy, r.f1};
    } catch (const std::exception& e) {
      throw std::runtime_error("variability trial " + std::to_string(t) + ": " + e.what());
    }
  });
  std::vector<double> ba;
  for (const auto& r : out.records) ba.push_back(r.balanced_accuracy);
  out.balanced_accuracy = aggregate(ba);
  out.histogram = histogram(ba, options.bin_width);
  return out;
}

Dataset feature_space_dataset(std::uint64_t seed, std::size_t rows, int features, Preset preset,
                              int repetitions, double margin) {
  if (rows < 2) throw std::invalid_argument("feature_space_dataset: need >= 2 rows");
  const FeatureMapSpec spec = FeatureMapSpec::preset(preset, features, repetitions);
  Rng rng(derive_seed({seed, hash_string("feature-space-dataset")}));

  Dataset ds;
  for (int j = 0; j < features; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  const std::size_t per_class = rows / 2;
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t attempts = 0;
  while (pos + neg < 2 * per_class) {
    if (++attempts > 10'000'000)
      throw std::runtime_error("feature_space_dataset: margin rejects too many points");
    std::vector<double> x(static_cast<std::size_t>(features));
    for (auto& v : x) v = rng.uniform() * std::numbers::pi;
    const Statevector psi = simulate(build_feature_map(spec, x));
    double z0 = 0.0;
    for (std::size_t i = 0; i < psi.dimension(); ++i)
      z0 += (i & 1u) ? -std::norm(psi[i]) : std::norm(psi[i]);
    if (std::abs(z0) < margin) continue;
    const int label = z0 > 0.0 ? 1 : -1;
    std::size_t& count = label == 1 ? pos : neg;
    if (count >= per_class) continue;
    ++count;
    char id[32];
    std::snprintf(id, sizeof(id), "s%05zu", pos + neg - 1);
    ds.samples.push_back({id, "", std::move(x), label});
  }
  return ds;
}

}  // namespace qkl
