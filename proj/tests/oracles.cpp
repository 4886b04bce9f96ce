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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace qkl::oracle {

namespace {

using C = std::complex<double>;

Eigen::Matrix2cd single_qubit(const Gate& g) {
  Eigen::Matrix2cd m;
  const double h = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::Hadamard:
      m << h, h, h, -h;
      break;
    case GateKind::RotateX: {
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      m << C(c, 0), C(0, -s), C(0, -s), C(c, 0);
      break;
    }
    case GateKind::Phase:
      m << 1, 0, 0, std::polar(1.0, g.angle);
      break;
    default:
      m.setIdentity();
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Eigen::MatrixXcd gate_unitary(const Gate& g, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (g.kind == GateKind::ControlledNot) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const bool control = (col >> g.qubits[0]) & 1;
      const Eigen::Index row = control ? (col ^ (Eigen::Index{1} << g.qubits[1])) : col;
      u(row, col) = 1.0;
    }
    return u;
  }
  // Kronecker order: most significant qubit leftmost.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const Eigen::MatrixXcd factor =
        q == g.qubits[0] ? Eigen::MatrixXcd(single_qubit(g)) : Eigen::MatrixXcd::Identity(2, 2);
    u = kron(u, factor);
  }
  return u;
}

Eigen::VectorXcd circuit_state(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1.0;
  for (const auto& g : c.gates()) psi = gate_unitary(g, c.num_qubits()) * psi;
  return psi;
}

namespace {

// Euclidean projection onto {0 <= a <= C, y^T a = 0}: a = clip(v - lambda y).
Eigen::VectorXd project(const Eigen::VectorXd& v, const Eigen::VectorXd& y, double C) {
  auto at = [&](double lambda) {
    return (v - lambda * y).cwiseMax(0.0).cwiseMin(C).eval();
  };
  double lo = -1.0;
  double hi = 1.0;
  // y^T a(lambda) is non-increasing in lambda.
  while (y.dot(at(lo)) < 0.0) lo *= 2.0;
  while (y.dot(at(hi)) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (y.dot(at(mid)) > 0.0) lo = mid;
    else hi = mid;
  }
  return at(0.5 * (lo + hi));
}

}  // namespace

double dual_qp_optimum(const Eigen::MatrixXd& K, const std::vector<int>& labels, double C,
                       int iterations) {
  const Eigen::Index n = K.rows();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd Q = y.asDiagonal() * K * y.asDiagonal();
  const double L = std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().maxCoeff(), 1e-12);
  auto objective = [&](const Eigen::VectorXd& a) { return a.sum() - 0.5 * a.dot(Q * a); };

  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = a;
  double t = 1.0;
  double best = objective(a);
  for (int it = 0; it < iterations; ++it) {
    // Accelerated projected gradient (FISTA) with step 1/L.
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(n) - Q * z;
    const Eigen::VectorXd next = project(z + grad / L, y, C);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / t_next) * (next - a);
    if (objective(next) < objective(a)) {
      z = next;
      t = 1.0;
    } else {
      t = t_next;
    }
    a = next;
    best = std::max(best, objective(a));
    if (it % 100 == 99) {
      // a is optimal when it is a fixed point of the projected gradient step.
      const Eigen::VectorXd step = project(a + (Eigen::VectorXd::Ones(n) - Q * a) / L, y, C);
      if ((step - a).lpNorm<Eigen::Infinity>() <= 1e-13) break;
    }
  }
  return best;
}

Eigen::MatrixXd random_psd(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(gen);
  Eigen::MatrixXd K = A * A.transpose() / n;
  return 0.5 * (K + K.transpose());
}

}  // namespace qkl::oracle
