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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qkl/kernel.hpp"
#include "qkl/random.hpp"
#include "qkl/simulator.hpp"

using namespace qkl;
using std::numbers::pi;

namespace {

std::vector<Sample> random_samples(Rng& rng, std::size_t n, int f) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.id = "r" + std::to_string(i);
    for (int j = 0; j < f; ++j) s.features.push_back(rng.uniform() * pi);
    s.label = i % 2 ? 1 : -1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("exact entries") {
    const FeatureMapSpec yyy = FeatureMapSpec::preset(Preset::YYY, 3);
    const std::vector<double> x{0.3, 1.1, 2.0};
    CHECK(quantum_kernel_entry(yyy, x, x) == doctest::Approx(1.0).epsilon(1e-12));

    const FeatureMapSpec z1 = FeatureMapSpec::preset(Preset::Z, 1, 1);
    CHECK(quantum_kernel_entry(z1, std::vector<double>{0.0}, std::vector<double>{pi / 2}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quantum_kernel_entry(z1, std::vector<double>{0.0}, std::vector<double>{pi / 4}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(quantum_kernel_entry(yyy, x, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
  }

  TEST_CASE("Z preset F=1 closed form cos^2(y - x)") {
    const FeatureMapSpec z1 = FeatureMapSpec::preset(Preset::Z, 1, 1);
    for (int i = 0; i < 20; ++i) {
      const double x = 0.15 * i;
      const double y = pi - 0.11 * i;
      const double expected = std::pow(std::cos(y - x), 2);
      CHECK(std::abs(quantum_kernel_entry(z1, std::vector<double>{x}, std::vector<double>{y}) -
                     expected) < 1e-9);
    }
  }

  TEST_CASE("rbf entries") {
    CHECK(rbf_kernel_entry(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 0.7) == 1.0);
    CHECK(rbf_kernel_entry(std::vector<double>{0}, std::vector<double>{1}, 1.0) ==
          doctest::Approx(0.3679).epsilon(1e-4));
    CHECK(rbf_kernel_entry(std::vector<double>{1, 2}, std::vector<double>{2, 4}, 0.5) ==
          doctest::Approx(std::exp(-2.5)));
    CHECK(std::exp(-2.5) == doctest::Approx(0.0821).epsilon(1e-3));
    CHECK_THROWS_AS(rbf_kernel_entry(std::vector<double>{0}, std::vector<double>{1, 2}, 1.0),
                    std::invalid_argument);
  }

  TEST_CASE("default rbf gamma") {
    std::vector<Sample> rows(2);
    rows[0].features = {0.0, 2.0};
    rows[1].features = {2.0, 0.0};
    // pooled values {0, 2, 2, 0}: variance 1
    CHECK(default_rbf_gamma(rows) == doctest::Approx(0.5));
    rows[1].features = {0.0, 2.0};
    rows[0].features = {0.0, 2.0};
    CHECK(default_rbf_gamma(rows) > 0.0);
  }

  TEST_CASE("small Gram matrices") {
    const KernelConfig cfg = KernelConfig::quantum(Preset::YYY);
    std::vector<Sample> one{{"a", "", {0.3, 0.9}, 1}};
    const GramMatrix g1 = gram_matrix(one, cfg);
    CHECK(g1.rows() == 1);
    CHECK(g1(0, 0) == 1.0);

    std::vector<Sample> twins{{"a", "", {0.3, 0.9}, 1}, {"b", "", {0.3, 0.9}, -1}};
    const GramMatrix g2 = gram_matrix(twins, cfg);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) CHECK(g2(i, j) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g2.symmetric);
    CHECK(g2.row_ids == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("YYY F=2 Gram equals dense-matrix overlap oracle") {
    Rng rng(17);
    const auto rows = random_samples(rng, 4, 2);
    const KernelConfig cfg = KernelConfig::quantum(Preset::YYY);
    const GramMatrix g = gram_matrix(rows, cfg);
    const FeatureMapSpec spec = cfg.feature_map(2);
    for (std::size_t i = 0; i < 4; ++i) {
      const Eigen::VectorXcd a = oracle::circuit_state(build_feature_map(spec, rows[i].features));
      for (std::size_t j = 0; j < 4; ++j) {
        const Eigen::VectorXcd b = oracle::circuit_state(build_feature_map(spec, rows[j].features));
        const double k = std::norm(a.dot(b));
        CHECK(std::abs(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - k) < 1e-9);
      }
    }
  }

  TEST_CASE("exact Grams are symmetric, unit-diagonal and PSD for every preset") {
    Rng rng(3);
    for (const auto p : kAllPresets) {
      for (int t = 0; t < 10; ++t) {
        const auto rows = random_samples(rng, 8, 3);
        const GramMatrix g = gram_matrix(rows, KernelConfig::quantum(p));
        CHECK(g.values == g.values.transpose());
        for (Eigen::Index i = 0; i < 8; ++i) CHECK(std::abs(g(i, i) - 1.0) < 1e-12);
        CHECK(min_eigenvalue(g.values) >= -1e-8);
        CHECK(g.values.maxCoeff() <= 1.0 + 1e-9);
        CHECK(g.values.minCoeff() >= 0.0);
      }
    }
  }

  TEST_CASE("cross Gram matches entries and symmetric detection") {
    Rng rng(8);
    const auto rows = random_samples(rng, 3, 3);
    const auto cols = random_samples(rng, 5, 3);
    const KernelConfig cfg = KernelConfig::quantum(Preset::YZZ);
    const GramMatrix g = gram_matrix(rows, cols, cfg);
    CHECK_FALSE(g.symmetric);
    CHECK(g.rows() == 3);
    CHECK(g.cols() == 5);
    const FeatureMapSpec spec = cfg.feature_map(3);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 5; ++j)
        CHECK(g(i, j) == doctest::Approx(quantum_kernel_entry(
                             spec, rows[static_cast<std::size_t>(i)].features,
                             cols[static_cast<std::size_t>(j)].features)).epsilon(1e-12));
    CHECK(gram_matrix(rows, rows, cfg).symmetric);
    CHECK_THROWS_AS(gram_matrix(rows, random_samples(rng, 2, 4), cfg), std::invalid_argument);
  }

  TEST_CASE("Gram is bit-identical across thread counts") {
    Rng rng(12);
    const auto rows = random_samples(rng, 12, 4);
    for (const auto mode : {EstimationMode::Exact, EstimationMode::Shots}) {
      KernelConfig cfg = KernelConfig::quantum(Preset::YYY);
      cfg.mode = mode;
      cfg.shots = 256;
      cfg.master_seed = 99;
      const GramMatrix a = gram_matrix(rows, cfg, 1);
      const GramMatrix b = gram_matrix(rows, cfg, 4);
      CHECK(a.values == b.values);
      const GramMatrix c = gram_matrix(rows, std::span(rows).first(5), cfg, 1);
      const GramMatrix d = gram_matrix(rows, std::span(rows).first(5), cfg, 3);
      CHECK(c.values == d.values);
    }
  }

  TEST_CASE("shots mode") {
    Rng rng(4);
    const auto rows = random_samples(rng, 6, 3);
    KernelConfig cfg = KernelConfig::quantum(Preset::ZZZ);
    cfg.mode = EstimationMode::Shots;
    cfg.master_seed = 1;
    const GramMatrix g = gram_matrix(rows, cfg);
    CHECK(g.values == g.values.transpose());
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 6; ++j) {
        const double scaled = g(i, j) * 1024.0;
        CHECK(scaled == std::round(scaled));
      }
    cfg.master_seed = 2;
    CHECK(gram_matrix(rows, cfg).values != g.values);

    const FeatureMapSpec spec = cfg.feature_map(3);
    const double exact = quantum_kernel_entry(spec, rows[0].features, rows[1].features);
    double sum = 0.0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s)
      sum += quantum_kernel_entry(spec, rows[0].features, rows[1].features, EstimationMode::Shots,
                                  1024, derive_seed({77, static_cast<std::uint64_t>(s)}));
    const double se = std::sqrt(exact * (1 - exact) / (1024.0 * seeds));
    CHECK(std::abs(sum / seeds - exact) <= 3 * se);
  }

  TEST_CASE("shot cap") {
    KernelConfig cfg = KernelConfig::quantum(Preset::YYY);
    cfg.mode = EstimationMode::Shots;
    cfg.shots = 2000;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("exceeds the shot cap"),
                         std::invalid_argument);
    cfg.allow_overshoot = true;
    CHECK_NOTHROW(cfg.validate());
    cfg.shots = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("psd_clip") {
    GramMatrix id;
    id.values = Eigen::MatrixXd::Identity(3, 3);
    id.row_ids = id.col_ids = {"a", "b", "c"};
    id.symmetric = true;
    CHECK(psd_clip(id).values == id.values);

    GramMatrix g;
    g.values.resize(2, 2);
    g.values << 1.0, 1.2, 1.2, 1.0;
    g.row_ids = g.col_ids = {"a", "b"};
    g.symmetric = true;
    const GramMatrix c = psd_clip(g);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) CHECK(c(i, j) == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(c.values == c.values.transpose());
    CHECK(min_eigenvalue(c.values) >= -1e-12);

    GramMatrix rect;
    rect.values = Eigen::MatrixXd::Ones(2, 3);
    CHECK_THROWS_AS(psd_clip(rect), std::invalid_argument);
  }

  TEST_CASE("config names and fingerprints") {
    CHECK(KernelConfig::rbf().name() == "rbf");
    CHECK(KernelConfig::quantum(Preset::YZZ).name() == "yzz");
    CHECK(KernelConfig::quantum(Preset::YYY, 1).fingerprint() !=
          KernelConfig::quantum(Preset::YYY, 2).fingerprint());
    CHECK(parse_mode("shots") == EstimationMode::Shots);
    CHECK_THROWS_AS(parse_mode("noisy"), std::invalid_argument);
  }
}
