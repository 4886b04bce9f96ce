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

#include "qkl/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qkl/diagnostics.hpp"
#include "qkl/random.hpp"

namespace qkl {

double dual_objective(const Eigen::MatrixXd& gram, std::span<const int> labels,
                      std::span<const double> alphas) {
  const std::size_t n = alphas.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alphas[i];
    if (alphas[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      quad += alphas[i] * alphas[j] * labels[i] * labels[j] *
              gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return linear - 0.5 * quad;
}

namespace {

void check_inputs(const GramMatrix& gram, std::span<const int> labels, const SvmParams& params) {
  const auto n = static_cast<std::size_t>(gram.rows());
  if (gram.rows() != gram.cols()) throw std::invalid_argument("svm: Gram matrix is not square");
  if (gram.values != gram.values.transpose())
    throw std::invalid_argument("svm: Gram matrix is not symmetric");
  if (labels.size() != n) {
    throw std::invalid_argument("svm: " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(n) + " Gram rows");
  }
  bool pos = false;
  bool neg = false;
  for (const int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw std::invalid_argument("svm: labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw std::invalid_argument("svm: single-class labels");
  if (!(params.C > 0.0)) throw std::invalid_argument("svm: C must be positive");
  if (!(params.tol > 0.0)) throw std::invalid_argument("svm: tol must be positive");
}

}  // namespace

SvmModel train(const GramMatrix& gram, std::span<const int> labels, const SvmParams& params,
               TrainingReport* report, bool trace_objective) {
  check_inputs(gram, labels, params);
  const auto n = static_cast<std::size_t>(gram.rows());
  const double C = params.C;
  const Eigen::MatrixXd& K = gram.values;
  auto k = [&K](std::size_t a, std::size_t b) {
    return K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  auto y = [&labels](std::size_t a) { return static_cast<double>(labels[a]); };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a^T Q a - e^T a
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);
  rng.shuffle(std::span<std::size_t>(order));

  auto in_up = [&](std::size_t t) {
    return (labels[t] == 1 && alpha[t] < C) || (labels[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (labels[t] == 1 && alpha[t] > 0.0) || (labels[t] == -1 && alpha[t] < C);
  };

  TrainingReport local;
  TrainingReport& rep = report ? *report : local;
  rep = TrainingReport{};
  auto objective = [&] {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += alpha[t] * (1.0 - grad[t]);
    return 0.5 * s;
  };
  if (trace_objective) rep.objective_trace.push_back(0.0);

  double m_up = 0.0;
  double m_low = 0.0;
  for (;;) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    m_up = -kInf;
    m_low = kInf;
    std::size_t i = n;
    std::size_t j = n;
    for (const std::size_t t : order) {
      const double v = -y(t) * grad[t];
      if (in_up(t) && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low(t) && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    rep.final_gap = m_up - m_low;
    if (i == n || j == n || m_up - m_low <= params.tol) break;
    if (rep.iterations >= params.max_iterations) {
      rep.converged = false;
      warn("svm: iteration limit reached with KKT gap " + std::to_string(m_up - m_low));
      break;
    }
    ++rep.iterations;

    // Move a_i += y_i * step, a_j -= y_j * step; the dual rises along step > 0.
    const double slack_i = labels[i] == 1 ? C - alpha[i] : alpha[i];
    const double slack_j = labels[j] == 1 ? alpha[j] : C - alpha[j];
    const double max_step = std::min(slack_i, slack_j);
    const double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
    double step = max_step;
    if (eta > 0.0) {
      step = std::min(max_step, (m_up - m_low) / eta);
    } else if (!rep.indefinite_curvature) {
      rep.indefinite_curvature = true;
      warn("svm: non-positive curvature in an SMO step; Gram matrix is not PSD");
    }

    alpha[i] = step == slack_i ? (labels[i] == 1 ? C : 0.0) : alpha[i] + y(i) * step;
    alpha[j] = step == slack_j ? (labels[j] == 1 ? 0.0 : C) : alpha[j] - y(j) * step;
    for (std::size_t t = 0; t < n; ++t) grad[t] += y(t) * step * (k(t, i) - k(t, j));
    if (trace_objective) rep.objective_trace.push_back(objective());
  }

  SvmModel model;
  model.alphas = alpha;
  model.labels.assign(labels.begin(), labels.end());
  model.C = C;
  model.tol = params.tol;
  model.seed = params.seed;
  model.train_ids = gram.row_ids;
  model.kernel_fingerprint = gram.config.fingerprint();

  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < C) {
      free_sum += -y(t) * grad[t];
      ++free_count;
    }
    if (alpha[t] > 1e-12) model.support_indices.push_back(t);
  }
  if (free_count > 0) {
    model.bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(m_up) && std::isfinite(m_low)) {
    model.bias = 0.5 * (m_up + m_low);
  } else {
    model.bias = std::isfinite(m_up) ? m_up : (std::isfinite(m_low) ? m_low : 0.0);
  }
  return model;
}

std::vector<double> decision_values(const SvmModel& model, const GramMatrix& cross_gram) {
  if (cross_gram.col_ids != model.train_ids)
    throw std::invalid_argument("decision_values: Gram columns do not match training ids");
  const Eigen::Index rows = cross_gram.rows();
  std::vector<double> f(static_cast<std::size_t>(rows), model.bias);
  for (std::size_t i = 0; i < model.alphas.size(); ++i) {
    if (model.alphas[i] == 0.0) continue;
    const double w = model.alphas[i] * model.labels[i];
    for (Eigen::Index t = 0; t < rows; ++t)
      f[static_cast<std::size_t>(t)] += w * cross_gram(t, static_cast<Eigen::Index>(i));
  }
  return f;
}

std::vector<int> labels_from_decisions(std::span<const double> decisions) {
  std::vector<int> out;
  out.reserve(decisions.size());
  for (const double f : decisions) out.push_back(f > 0.0 ? 1 : -1);
  return out;
}

std::vector<int> predict(const SvmModel& model, const GramMatrix& cross_gram) {
  return labels_from_decisions(decision_values(model, cross_gram));
}

}  // namespace qkl
