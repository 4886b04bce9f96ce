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

#include <stdexcept>
#include <string>
#include <vector>

#include "qkl/diagnostics.hpp"
#include "qkl/metrics.hpp"

using namespace qkl;

TEST_SUITE("metrics") {
  TEST_CASE("confusion counts") {
    const std::vector<int> t{1, 1, -1, -1};
    const std::vector<int> p{1, -1, -1, 1};
    CHECK(confusion(t, p) == ConfusionMatrix{1, 1, 1, 1});
    const ConfusionMatrix same = confusion(t, t);
    CHECK(same.fp == 0);
    CHECK(same.fn == 0);
    const std::vector<int> inv{-1, -1, 1, 1};
    const ConfusionMatrix flipped = confusion(t, inv);
    CHECK(flipped.tp == 0);
    CHECK(flipped.tn == 0);
    CHECK_THROWS_AS(confusion(t, std::vector<int>{1}), std::invalid_argument);
    CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(confusion(std::vector<int>{2}, std::vector<int>{1}), std::invalid_argument);
  }

  TEST_CASE("balanced accuracy") {
    CHECK(balanced_accuracy({3, 2, 2, 1}) == doctest::Approx(0.625));
    CHECK(balanced_accuracy({5, 0, 4, 0}) == 1.0);
    CHECK(balanced_accuracy({5, 5, 0, 0}) == 0.5);
    CHECK_THROWS_AS(balanced_accuracy({3, 0, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(balanced_accuracy({0, 2, 1, 0}), std::invalid_argument);
  }

  TEST_CASE("f1") {
    CHECK(f1({3, 2, 0, 1}) == doctest::Approx(6.0 / 9.0));
    CHECK(f1({4, 0, 3, 0}) == 1.0);
    std::vector<std::string> warnings;
    const auto previous = set_warning_sink([&](std::string_view w) { warnings.emplace_back(w); });
    CHECK(f1({0, 0, 5, 0}) == 0.0);
    set_warning_sink(previous);
    CHECK(warnings.size() == 1);
  }

  TEST_CASE("exhaustive sweep of small confusion matrices") {
    const auto previous = set_warning_sink(nullptr);
    int checked = 0;
    for (std::size_t tp = 0; tp <= 4; ++tp)
      for (std::size_t fp = 0; fp <= 4; ++fp)
        for (std::size_t tn = 0; tn <= 4; ++tn)
          for (std::size_t fn = 0; fn <= 4; ++fn) {
            const ConfusionMatrix cm{tp, fp, tn, fn};
            const ConfusionMatrix swapped{tn, fn, tp, fp};
            // Integer cross-multiplication keeps the reference free of rounding.
            const double f = f1(cm);
            const std::size_t den = 2 * tp + fp + fn;
            if (den == 0) CHECK(f == 0.0);
            else CHECK(f == doctest::Approx(static_cast<double>(2 * tp) / static_cast<double>(den)));
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            const std::size_t pos = tp + fn;
            const std::size_t neg = tn + fp;
            if (pos == 0 || neg == 0) {
              CHECK_THROWS(balanced_accuracy(cm));
              continue;
            }
            const double ba = balanced_accuracy(cm);
            const double expected = static_cast<double>(tp * neg + tn * pos) /
                                    static_cast<double>(2 * pos * neg);
            CHECK(ba == doctest::Approx(expected).epsilon(1e-15));
            CHECK(ba == balanced_accuracy(swapped));
            if (pos == neg)
              CHECK(ba == doctest::Approx(static_cast<double>(tp + tn) / static_cast<double>(cm.total())));
            ++checked;
          }
    set_warning_sink(previous);
    CHECK(checked > 300);
  }

  TEST_CASE("merged counts equal concatenated evaluations") {
    const std::vector<int> t1{1, -1, 1};
    const std::vector<int> p1{1, 1, -1};
    const std::vector<int> t2{-1, -1, 1, 1};
    const std::vector<int> p2{-1, 1, 1, 1};
    ConfusionMatrix merged = confusion(t1, p1);
    merged += confusion(t2, p2);
    std::vector<int> t(t1);
    t.insert(t.end(), t2.begin(), t2.end());
    std::vector<int> p(p1);
    p.insert(p.end(), p2.begin(), p2.end());
    CHECK(merged == confusion(t, p));
    CHECK(balanced_accuracy(merged) == balanced_accuracy(confusion(t, p)));
  }
}
