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

#include "qkl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qkl/parallel.hpp"
#include "qkl/random.hpp"
#include "qkl/simulator.hpp"

namespace qkl {

KernelConfig KernelConfig::quantum(Preset p, int repetitions) {
  KernelConfig c;
  c.kind = KernelKind::Quantum;
  c.map_name = std::string(preset_name(p));
  c.pauli_layers = preset_layers(p);
  c.repetitions = repetitions;
  return c;
}

KernelConfig KernelConfig::rbf(double gamma) {
  KernelConfig c;
  c.kind = KernelKind::Rbf;
  c.map_name = "rbf";
  c.pauli_layers.clear();
  c.repetitions = 0;
  c.gamma = gamma;
  return c;
}

std::string KernelConfig::name() const { return kind == KernelKind::Rbf ? "rbf" : map_name; }

FeatureMapSpec KernelConfig::feature_map(int num_features) const {
  if (kind != KernelKind::Quantum) throw std::logic_error("RBF kernel has no feature map");
  FeatureMapSpec spec{pauli_layers, repetitions, num_features};
  spec.validate();
  return spec;
}

bool KernelConfig::wants_psd_clip() const {
  switch (psd) {
    case PsdPolicy::Always: return true;
    case PsdPolicy::Never: return false;
    case PsdPolicy::Auto: return mode == EstimationMode::Shots;
  }
  return false;
}

std::string KernelConfig::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == KernelKind::Rbf) {
    os << "rbf;gamma=" << gamma;
  } else {
    os << "quantum;map=" << map_name << ";layers=";
    for (std::size_t i = 0; i < pauli_layers.size(); ++i)
      os << (i ? "," : "") << pauli_term_name(pauli_layers[i]);
    os << ";R=" << repetitions;
  }
  os << ";mode=" << mode_name(mode);
  if (mode == EstimationMode::Shots) os << ";shots=" << shots << ";seed=" << master_seed;
  return os.str();
}

void KernelConfig::validate() const {
  if (kind == KernelKind::Rbf) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("RBF gamma must be positive (or 0 for the default)");
  } else {
    if (repetitions < 1) throw std::invalid_argument("feature map repetitions must be >= 1");
    if (pauli_layers.empty()) throw std::invalid_argument("feature map has no Pauli layers");
  }
  if (mode == EstimationMode::Shots) {
    if (shots < 1) throw std::invalid_argument("shot count must be >= 1");
    if (shots > kMaxShots && !allow_overshoot) {
      throw std::invalid_argument("shot count " + std::to_string(shots) +
                                  " exceeds the shot cap of " + std::to_string(kMaxShots));
    }
  }
}

std::string_view mode_name(EstimationMode m) {
  return m == EstimationMode::Exact ? "exact" : "shots";
}

EstimationMode parse_mode(std::string_view s) {
  if (s == "exact") return EstimationMode::Exact;
  if (s == "shots") return EstimationMode::Shots;
  throw std::invalid_argument("unknown estimation mode '" + std::string(s) + "'");
}

double quantum_kernel_entry(const FeatureMapSpec& spec, std::span<const double> x,
                            std::span<const double> y, EstimationMode mode, std::uint32_t shots,
                            std::uint64_t entry_seed) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel entry: dimension mismatch");
  const Circuit ux = build_feature_map(spec, x);
  const Circuit uy = build_feature_map(spec, y);
  if (mode == EstimationMode::Exact) {
    return std::norm(inner_product(simulate(uy), simulate(ux)));
  }
  Circuit overlap = ux;
  overlap.extend(adjoint(uy));
  return sample_zero_count(simulate(overlap), shots, entry_seed).frequency();
}

double rbf_kernel_entry(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) throw std::invalid_argument("rbf kernel: dimension mismatch");
  if (!(gamma > 0.0)) throw std::invalid_argument("rbf kernel: gamma must be positive");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double default_rbf_gamma(std::span<const Sample> train) {
  if (train.empty()) throw std::invalid_argument("default_rbf_gamma: empty training set");
  const std::size_t f = train.front().features.size();
  if (f == 0) throw std::invalid_argument("default_rbf_gamma: zero-width features");
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& s : train) {
    for (const double v : s.features) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  return var > 0.0 ? 1.0 / (static_cast<double>(f) * var) : 1.0 / static_cast<double>(f);
}

namespace {

std::size_t feature_width(std::span<const Sample> a, std::span<const Sample> b) {
  const std::size_t f = !a.empty() ? a.front().features.size() : 0;
  auto check = [f](std::span<const Sample> list) {
    for (const auto& s : list) {
      if (s.features.size() != f)
        throw std::invalid_argument("gram_matrix: inconsistent feature dimensions (sample '" +
                                    s.id + "')");
    }
  };
  check(a);
  check(b);
  return f;
}

bool same_samples(std::span<const Sample> a, std::span<const Sample> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || a[i].features != b[i].features) return false;
  }
  return true;
}

std::vector<Statevector> embed(const FeatureMapSpec& spec, std::span<const Sample> list,
                               int threads) {
  std::vector<Statevector> out(list.size(), Statevector(spec.num_features));
  parallel_for(list.size(), threads, [&](std::size_t i) {
    out[i] = simulate(build_feature_map(spec, list[i].features));
  });
  return out;
}

std::vector<std::string> ids_of(std::span<const Sample> list) {
  std::vector<std::string> ids;
  ids.reserve(list.size());
  for (const auto& s : list) ids.push_back(s.id);
  return ids;
}

}  // namespace

GramMatrix gram_matrix(std::span<const Sample> samples, const KernelConfig& config, int threads) {
  return gram_matrix(samples, samples, config, threads);
}

GramMatrix gram_matrix(std::span<const Sample> rows, std::span<const Sample> cols,
                       const KernelConfig& config, int threads) {
  config.validate();
  const std::size_t f = feature_width(rows, cols);
  const bool symmetric = same_samples(rows, cols);

  GramMatrix g;
  g.config = config;
  g.num_features = static_cast<int>(f);
  g.symmetric = symmetric;
  g.row_ids = ids_of(rows);
  g.col_ids = ids_of(cols);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(cols.size());
  g.values = Eigen::MatrixXd::Zero(n, m);
  if (n == 0 || m == 0) return g;

  std::vector<Statevector> row_states;
  std::vector<Statevector> col_states;
  if (config.kind == KernelKind::Quantum) {
    const FeatureMapSpec spec = config.feature_map(static_cast<int>(f));
    row_states = embed(spec, rows, threads);
    if (!symmetric) col_states = embed(spec, cols, threads);
  } else if (!(config.gamma > 0.0)) {
    throw std::invalid_argument("gram_matrix: RBF gamma unresolved (call default_rbf_gamma)");
  }
  const auto& cstates = symmetric ? row_states : col_states;

  // Each unordered pair is evaluated once and mirrored, so symmetry is exact.
  auto entry = [&](std::size_t i, std::size_t j) -> double {
    if (config.kind == KernelKind::Rbf)
      return rbf_kernel_entry(rows[i].features, cols[j].features, config.gamma);
    if (config.mode == EstimationMode::Exact && rows[i].features == cols[j].features) return 1.0;
    const double p = std::norm(inner_product(cstates[j], row_states[i]));
    if (config.mode == EstimationMode::Exact) return p;
    const std::uint64_t seed =
        symmetric ? derive_seed({config.master_seed, std::min(i, j), std::max(i, j)})
                  : derive_seed({config.master_seed, kCrossSeedTag, i, j});
    return sample_bernoulli(p, config.shots, seed).frequency();
  };

  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const std::size_t j0 = symmetric ? i : 0;
    for (std::size_t j = j0; j < cols.size(); ++j) {
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j);
    }
  });
  if (symmetric) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) g.values(i, j) = g.values(j, i);
  }
  return g;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

GramMatrix psd_clip(const GramMatrix& g, double tolerance) {
  if (g.rows() != g.cols() || !g.symmetric || g.values != g.values.transpose())
    throw std::invalid_argument("psd_clip: Gram matrix is not symmetric");
  GramMatrix out = g;
  if (g.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values);
  if (es.eigenvalues().minCoeff() >= -tolerance) return out;
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::MatrixXd rebuilt = v * clipped.asDiagonal() * v.transpose();
  out.values = 0.5 * (rebuilt + rebuilt.transpose());
  return out;
}

}  // namespace qkl
