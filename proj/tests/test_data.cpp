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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qkl/data.hpp"

using namespace qkl;
using std::numbers::pi;

namespace {

const char* kIndex =
    "\"Date\",\"Price\",\"Open\",\"High\",\"Low\",\"Vol.\",\"Change %\"\n"
    "\"01/05/2020\",\"5,100.50\",\"5,000.00\",\"5,120.00\",\"4,990.00\",\"1.2M\",\"2.01%\"\n"
    "\"01/02/2020\",\"5,000.00\",\"4,950.00\",\"5,010.00\",\"4,940.00\",\"85.32K\",\"1.00%\"\n"
    "\"01/01/2020\",\"4,950.50\",\"4,900.00\",\"4,960.00\",\"4,890.00\",\"-\",\"-0.50%\"\n";

const char* kGoldCsv =
    "Date,Price\n"
    "01/01/2020,1500.0\n"
    "01/05/2020,1520.0\n";

RawSeries series_with_closes(const std::vector<double>& closes) {
  RawSeries s;
  s.columns = {"price", "open", "high", "low", "volume", "change_pct", "gold"};
  for (std::size_t i = 0; i < closes.size(); ++i) {
    RawRow r;
    r.date = std::chrono::year{2021} / std::chrono::January / static_cast<unsigned>(i + 1);
    r.values = {closes[i], closes[i] - 1, closes[i] + 1, closes[i] - 2, 1000.0, 0.1, 1800.0 + static_cast<double>(i)};
    s.rows.push_back(r);
  }
  return s;
}

Dataset toy_dataset(std::size_t n, std::size_t positives) {
  Dataset ds;
  ds.feature_names = {"a", "b", "c"};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = static_cast<double>(i);
    ds.samples.push_back({"id" + std::to_string(i), "", {v, 2 * v, -v}, i < positives ? 1 : -1});
  }
  return ds;
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("number and volume parsing") {
    CHECK(parse_volume("1.2M") == doctest::Approx(1'200'000));
    CHECK(parse_volume("85.32K") == doctest::Approx(85'320));
    CHECK(parse_volume("3B") == doctest::Approx(3e9));
    CHECK(parse_volume("-") == 0.0);
    CHECK(parse_volume("") == 0.0);
    CHECK(parse_number("6,142.33") == doctest::Approx(6142.33));
    CHECK(parse_number("0.36%") == doctest::Approx(0.36));
    CHECK(parse_number("-1.5%") == doctest::Approx(-1.5));
    CHECK_THROWS_AS(parse_number("abc"), std::invalid_argument);
  }

  TEST_CASE("dates") {
    CHECK(format_date(parse_date("03/07/2021")) == "2021-03-07");
    CHECK(format_date(parse_date("2021-03-07")) == "2021-03-07");
    CHECK_THROWS_AS(parse_date("02/30/2021"), std::invalid_argument);
    CHECK_THROWS_AS(parse_date("yesterday"), std::invalid_argument);
  }

  TEST_CASE("csv line splitting") {
    CHECK(split_csv_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(split_csv_line("\"x\"\"y\",") == std::vector<std::string>{"x\"y", ""});
  }

  TEST_CASE("ingest merges and forward-fills gold") {
    std::istringstream index(kIndex);
    std::istringstream gold(kGoldCsv);
    const RawSeries s = ingest(index, gold);
    REQUIRE(s.rows.size() == 3);
    CHECK(format_date(s.rows[0].date) == "2020-01-01");
    CHECK(format_date(s.rows[2].date) == "2020-01-05");
    const auto g = s.column(qkl::kGold);
    CHECK(s.rows[0].values[g] == 1500.0);
    CHECK(s.rows[1].values[g] == 1500.0);
    CHECK(s.rows[2].values[g] == 1520.0);
    CHECK(s.rows[2].values[s.column(kVolume)] == doctest::Approx(1.2e6));
    CHECK(s.rows[0].values[s.column(kVolume)] == 0.0);
    CHECK(s.rows[2].values[s.column(kPrice)] == doctest::Approx(5100.5));
  }

  TEST_CASE("ingest errors") {
    {
      std::istringstream index(kIndex);
      std::istringstream gold("Date,Price\n01/01/2019,1.0\n01/02/2019,2.0\n");
      // the gold range ends before the index starts
      CHECK_THROWS_WITH_AS(ingest(index, gold), doctest::Contains("empty join"), ParseError);
    }
    {
      std::istringstream index(
          "Date,Price,Open,High,Low,Vol.\n01/01/2020,1,1,1,1,1K\n01/02/2020,abc,1,1,1,1K\n");
      std::istringstream gold(kGoldCsv);
      try {
        ingest(index, gold, "idx.csv");
        FAIL("expected a parse error");
      } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("idx.csv:3") != std::string::npos);
      }
    }
    {
      std::istringstream index("Date,Price,Open,High,Low,Vol.\n01/01/2020,1,1,1,1,1K\n01/01/2020,1,1,1,1,1K\n");
      std::istringstream gold(kGoldCsv);
      CHECK_THROWS_WITH(ingest(index, gold), doctest::Contains("duplicate date"));
    }
    CHECK_THROWS_WITH(ingest(std::filesystem::path("/nonexistent/a.csv"),
                             std::filesystem::path("/nonexistent/b.csv")),
                      doctest::Contains("file not found"));
  }

  TEST_CASE("direction labels") {
    const Dataset ds = label_direction(series_with_closes({100, 101, 101, 99}));
    REQUIRE(ds.size() == 3);
    CHECK(ds.samples[0].label == 1);
    CHECK(ds.samples[1].label == -1);
    CHECK(ds.samples[2].label == -1);
    CHECK(ds.feature_names == default_feature_order());
    // features come from the predecessor row
    CHECK(ds.samples[0].features[0] == 99.0);
    CHECK(ds.samples[0].date == "2021-01-02");

    const Dataset rising = label_direction(series_with_closes({1, 2, 3, 4, 5}));
    CHECK(rising.count_label(1) == 4);
    CHECK(rising.count_label(1) + rising.count_label(-1) == 4);
    CHECK_THROWS_AS(label_direction(series_with_closes({1})), std::invalid_argument);
    CHECK_THROWS_AS(label_direction(series_with_closes({1, 2}), "close"), std::invalid_argument);
  }

  TEST_CASE("scaling") {
    std::vector<Sample> rows{{"a", "", {2, 5}, 1}, {"b", "", {4, 5}, -1}, {"c", "", {6, 5}, 1}};
    const Scaling s = fit_scale(rows);
    const auto scaled = apply_scale(s, rows);
    CHECK(scaled[0].features[0] == 0.0);
    CHECK(scaled[1].features[0] == doctest::Approx(pi / 2));
    CHECK(scaled[2].features[0] == doctest::Approx(pi));
    for (const auto& r : scaled) CHECK(r.features[1] == doctest::Approx(pi / 2));
    std::vector<Sample> test{{"d", "", {1, 7}, 1}, {"e", "", {9, 5}, 1}};
    const auto t = apply_scale(s, test);
    CHECK(t[0].features[0] == 0.0);
    CHECK(t[1].features[0] == pi);
    CHECK(fit_scale(rows) == s);  // test rows never feed the fit
    CHECK_THROWS_AS(fit_scale(std::vector<Sample>{}), std::invalid_argument);
  }

  TEST_CASE("subset sampling") {
    const Dataset ds = toy_dataset(460, 253);
    const Split full = sample_subset(ds, {460, 3, 1, 0.7});
    std::set<std::string> ids;
    for (const auto& s : full.train) ids.insert(s.id);
    for (const auto& s : full.test) ids.insert(s.id);
    CHECK(ids.size() == 460);

    const Split a = sample_subset(ds, {200, 2, 42, 0.7});
    const Split b = sample_subset(ds, {200, 2, 42, 0.7});
    CHECK(a.fingerprint == b.fingerprint);
    CHECK(a.train.size() + a.test.size() == 200);
    CHECK(a.train.front().features.size() == 2);
    CHECK(sample_subset(ds, {200, 2, 43, 0.7}).fingerprint != a.fingerprint);
    CHECK(a.fingerprint == subset_fingerprint(a.train, a.test));

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Split s = sample_subset(ds, {200, 3, seed, 0.7});
      const auto pos = std::count_if(s.train.begin(), s.train.end(),
                                     [](const Sample& r) { return r.label == 1; });
      const double frac = static_cast<double>(pos) / static_cast<double>(s.train.size());
      CHECK(std::abs(frac - 0.55) <= 0.02);
    }
    CHECK_THROWS_AS(sample_subset(ds, {461, 3, 1, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(sample_subset(ds, {100, 4, 1, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(sample_subset(ds, {100, 3, 1, 1.0}), std::invalid_argument);
  }

  TEST_CASE("feature reordering and validation") {
    const Dataset ds = toy_dataset(10, 5);
    const std::vector<std::string> order{"c", "a"};
    const Dataset r = ds.with_feature_order(order);
    CHECK(r.feature_names == order);
    CHECK(r.samples[3].features == std::vector<double>{-3.0, 3.0});
    CHECK_THROWS_AS((void)ds.with_feature_order(std::vector<std::string>{"z"}), std::invalid_argument);
    CHECK_THROWS_AS(toy_dataset(10, 10).validate(), std::invalid_argument);
  }

  TEST_CASE("synthetic market") {
    const Dataset a = synthetic_dataset(7);
    const Dataset b = synthetic_dataset(7);
    CHECK(a == b);
    CHECK(a.size() == 459);
    CHECK(a.width() == 7);
    CHECK(a.count_label(1) > 150);
    CHECK(a.count_label(-1) > 150);
    CHECK_FALSE(synthetic_dataset(8) == a);
    const SyntheticMarket m = synthetic_market(7);
    CHECK(m.index_csv.rfind("\"Date\"", 0) == 0);
  }
}
