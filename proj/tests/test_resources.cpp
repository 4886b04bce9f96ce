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

#include <sstream>
#include <vector>

#include "qkl/resources.hpp"

using namespace qkl;

TEST_SUITE("resources") {
  TEST_CASE("closed forms") {
    const ResourceEstimate a = estimate(4, 1);
    CHECK(a.total == 37);
    CHECK(a.h == 4);
    CHECK(a.rx == 20);
    CHECK(a.p == 7);
    CHECK(a.cx == 6);
    CHECK(a.depth == 19);
    CHECK(a.qubits == 4);

    const ResourceEstimate b = estimate(7, 1);
    CHECK(b.total == 70);
    CHECK(b.h == 7);
    CHECK(b.rx == 38);
    CHECK(b.p == 13);
    CHECK(b.cx == 12);
    CHECK(b.depth == 34);
    CHECK(b.qubits == 7);

    const ResourceEstimate c = estimate(4, 2);
    CHECK(c.total == 74);
    CHECK(c.depth == 38);
    CHECK(c.h == 8);
    CHECK(c.qubits == 4);

    CHECK_THROWS_AS(estimate(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate(3, 0), std::invalid_argument);
  }

  TEST_CASE("formula and circuit agree over F in [2,10], R in [1,3]") {
    for (int f = 2; f <= 10; ++f) {
      const ResourceEstimate one = estimate(f, 1);
      for (int r = 1; r <= 3; ++r) {
        const ResourceReport rep = verify_against_circuit(f, r);
        CHECK(rep.match);
        CHECK(rep.formula == rep.measured);
        CHECK(rep.formula.total == rep.formula.h + rep.formula.rx + rep.formula.p + rep.formula.cx);
        CHECK(rep.measured.total ==
              rep.measured.h + rep.measured.rx + rep.measured.p + rep.measured.cx);
        CHECK(rep.formula.total == one.total * static_cast<std::size_t>(r));
        CHECK(rep.formula.depth == one.depth * static_cast<std::size_t>(r));
        CHECK(rep.dag_depth <= static_cast<int>(rep.measured.depth));
      }
    }
  }

  TEST_CASE("F=2 R=1 tally") {
    const ResourceReport rep = verify_against_circuit(2, 1);
    CHECK(rep.match);
    CHECK(rep.measured.total == 15);
    CHECK(rep.measured.depth == 9);
  }

  TEST_CASE("counts do not depend on the feature values") {
    const std::vector<double> x1{0.1, 0.2, 0.3, 0.4, 0.5};
    const std::vector<double> x2{3.0, 0.0, 1.7, 2.2, 0.9};
    CHECK(verify_against_circuit(5, 2, x1).measured == verify_against_circuit(5, 2, x2).measured);
  }

  TEST_CASE("table row") {
    const std::vector<ResourceReport> reps{verify_against_circuit(4, 1)};
    std::ostringstream os;
    write_resource_table(os, reps);
    const std::string text = os.str();
    CHECK(text.find("4\t1\t4\t4\t20\t7\t6\t37\t19\t37\t19\t") != std::string::npos);
    CHECK(text.find("match=true") != std::string::npos);
  }
}
