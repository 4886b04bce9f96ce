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
 * @file data.hpp
 * @brief Market-data ingestion, direction labelling, scaling and subsetting.
 *
 * Index CSV (header row, comma separated, fields may be quoted):
 *
 *   "Date","Price","Open","High","Low","Vol.","Change %"
 *   "03/14/2024","6,142.33","6,120.10","6,150.00","6,101.25","85.32M","0.36%"
 *
 * Gold CSV:
 *
 *   Date,Price
 *   03/14/2024,2162.40
 *
 * Dates are MM/DD/YYYY (ISO YYYY-MM-DD is also accepted). Numbers may carry
 * thousands separators; volumes may carry K/M/B suffixes, and "-" or an empty
 * volume reads as 0. Change % is optional; when absent it is derived from
 * consecutive prices.
 */

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qkl/sample.hpp"

namespace qkl {

using Date = std::chrono::year_month_day;

std::string format_date(const Date& d);  ///< yyyy-mm-dd
Date parse_date(std::string_view s);     ///< MM/DD/YYYY or YYYY-MM-DD

/// Raised for malformed input; `line()` is 1-based, 0 when not line specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// "1.2M" -> 1200000, "85.32K" -> 85320, "-" -> 0.
double parse_volume(std::string_view s);
/// "6,142.33" -> 6142.33, "0.36%" -> 0.36.
double parse_number(std::string_view s);

std::vector<std::string> split_csv_line(std::string_view line);

struct RawRow {
  Date date;
  std::vector<double> values;  ///< parallel to RawSeries::columns
};

struct RawSeries {
  std::vector<std::string> columns;
  std::vector<RawRow> rows;  ///< strictly increasing dates

  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const;
};

/// Column names produced by ingest().
inline constexpr std::string_view kPrice = "price";
inline constexpr std::string_view kOpen = "open";
inline constexpr std::string_view kHigh = "high";
inline constexpr std::string_view kLow = "low";
inline constexpr std::string_view kVolume = "volume";
inline constexpr std::string_view kChangePct = "change_pct";
inline constexpr std::string_view kGold = "gold";

/// Parses both files, forward-fills gold prices onto every calendar date
/// within the gold file's range, and inner-joins on the index trading dates.
RawSeries ingest(std::istream& index_csv, std::istream& gold_csv,
                 std::string_view index_name = "index", std::string_view gold_name = "gold");
RawSeries ingest(const std::filesystem::path& index_csv, const std::filesystem::path& gold_csv);

struct Scaling {
  std::vector<double> min;
  std::vector<double> max;

  [[nodiscard]] bool empty() const { return min.empty(); }
  bool operator==(const Scaling&) const = default;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Sample> samples;
  Scaling scaling;  ///< empty for unscaled data

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  [[nodiscard]] std::size_t width() const { return feature_names.size(); }
  [[nodiscard]] std::size_t count_label(int label) const;

  /// Keeps and reorders columns by name.
  [[nodiscard]] Dataset with_feature_order(std::span<const std::string> names) const;

  /// Throws std::invalid_argument unless every row has width() features and
  /// both labels occur.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// Default model inputs, in order.
const std::vector<std::string>& default_feature_order();

/// Labels each row t >= 1 with +1 if close[t] > close[t-1], else -1. The
/// features of that sample are the observations of row t-1:
/// open, high, low, volume, change_pct, gold, gold_change_pct. The first row
/// only serves as a predecessor.
Dataset label_direction(const RawSeries& series, std::string_view close_column = kPrice);

/// Per-feature min/max over the given rows. Throws on an empty list.
Scaling fit_scale(std::span<const Sample> train);

/// Min-max maps each feature onto [0, pi] using `scaling`; constant features
/// map to pi/2 and out-of-range values clamp to [0, pi].
std::vector<Sample> apply_scale(const Scaling& scaling, std::span<const Sample> rows);

struct SubsetSpec {
  std::size_t size = 0;          ///< N
  std::size_t num_features = 0;  ///< F, taken from the front of the column order
  std::uint64_t trial_seed = 0;
  double split_ratio = 0.7;
};

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::uint64_t fingerprint = 0;  ///< hash of the ordered train and test ids
};

/// Stratified draw of N rows without replacement, truncated to the first F
/// features, then a stratified train/test split. Deterministic per seed.
Split sample_subset(const Dataset& ds, const SubsetSpec& spec);

/// fingerprint of a train/test id sequence.
std::uint64_t subset_fingerprint(std::span<const Sample> train, std::span<const Sample> test);

struct SyntheticMarket {
  std::string index_csv;
  std::string gold_csv;
};

/// Seeded synthetic market in the two CSV schemas above: an index on a
/// Sunday-Thursday calendar whose log returns follow a weakly persistent
/// random walk coupled to the previous day's gold return, and a gold series
/// on a Monday-Friday calendar.
SyntheticMarket synthetic_market(std::uint64_t seed, std::size_t trading_days = 460);

/// ingest() + label_direction() over synthetic_market().
Dataset synthetic_dataset(std::uint64_t seed, std::size_t trading_days = 460);

}  // namespace qkl
