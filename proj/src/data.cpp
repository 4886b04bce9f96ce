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

#include "qkl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qkl/random.hpp"

namespace qkl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date parse_date(std::string_view s) {
  s = trim(s);
  int y = 0;
  int m = 0;
  int d = 0;
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    y = parse_int(s.substr(0, 4));
    m = parse_int(s.substr(5, 2));
    d = parse_int(s.substr(8, 2));
  } else {
    const auto a = s.find('/');
    const auto b = a == std::string_view::npos ? a : s.find('/', a + 1);
    if (b == std::string_view::npos) throw std::invalid_argument("bad date '" + std::string(s) + "'");
    m = parse_int(s.substr(0, a));
    d = parse_int(s.substr(a + 1, b - a - 1));
    y = parse_int(s.substr(b + 1));
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(s) + "'");
  return date;
}

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " +
                         what),
      line_(line) {}

double parse_number(std::string_view s) {
  s = trim(s);
  std::string clean;
  clean.reserve(s.size());
  for (const char c : s) {
    if (c != ',') clean.push_back(c);
  }
  if (!clean.empty() && clean.back() == '%') clean.pop_back();
  if (!clean.empty() && clean.front() == '+') clean.erase(clean.begin());
  double v = 0.0;
  auto [p, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), v);
  if (clean.empty() || ec != std::errc{} || p != clean.data() + clean.size() || !std::isfinite(v))
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

double parse_volume(std::string_view s) {
  s = trim(s);
  if (s.empty() || s == "-") return 0.0;
  double scale = 1.0;
  switch (s.back()) {
    case 'K': case 'k': scale = 1e3; break;
    case 'M': case 'm': scale = 1e6; break;
    case 'B': case 'b': scale = 1e9; break;
    default: break;
  }
  if (scale != 1.0) s.remove_suffix(1);
  // snap to 1e-6
  return std::round(parse_number(s) * scale * 1e6) / 1e6;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted field");
  out.push_back(std::move(field));
  return out;
}

std::size_t RawSeries::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool RawSeries::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

namespace {

struct ColumnRule {
  std::string_view header;  // lower-case CSV header
  std::string_view name;    // RawSeries column name
  bool required;
  bool volume;
};

RawSeries read_table(std::istream& in, std::string_view source, std::span<const ColumnRule> rules) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(std::string(source), 0, "empty file");

  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) pos[lower(trim(header[i]))] = i;
  auto find_col = [&](std::string_view h) -> std::ptrdiff_t {
    const auto it = pos.find(std::string(h));
    return it == pos.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  };
  const auto date_col = find_col("date");
  if (date_col < 0) throw ParseError(std::string(source), line_no, "missing 'Date' column");

  RawSeries out;
  std::vector<std::ptrdiff_t> src;
  std::vector<const ColumnRule*> used;
  for (const auto& rule : rules) {
    const auto c = find_col(rule.header);
    if (c < 0) {
      if (rule.required)
        throw ParseError(std::string(source), line_no,
                         "missing '" + std::string(rule.header) + "' column");
      continue;
    }
    out.columns.emplace_back(rule.name);
    src.push_back(c);
    used.push_back(&rule);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto fields = split_csv_line(line);
      if (fields.size() < header.size())
        throw std::invalid_argument("expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
      RawRow row;
      row.date = parse_date(fields[static_cast<std::size_t>(date_col)]);
      for (std::size_t k = 0; k < src.size(); ++k) {
        const auto& cell = fields[static_cast<std::size_t>(src[k])];
        row.values.push_back(used[k]->volume ? parse_volume(cell) : parse_number(cell));
      }
      out.rows.push_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string(source), line_no, e.what());
    }
  }

  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const RawRow& a, const RawRow& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].date == out.rows[i - 1].date)
      throw ParseError(std::string(source), 0, "duplicate date " + format_date(out.rows[i].date));
  }
  return out;
}

constexpr ColumnRule kIndexRules[] = {
    {"price", kPrice, true, false},  {"open", kOpen, true, false},
    {"high", kHigh, true, false},    {"low", kLow, true, false},
    {"vol.", kVolume, true, true},   {"change %", kChangePct, false, false},
};
constexpr ColumnRule kGoldRules[] = {{"price", kGold, true, false}};

}  // namespace

RawSeries ingest(std::istream& index_csv, std::istream& gold_csv, std::string_view index_name,
                 std::string_view gold_name) {
  RawSeries index = read_table(index_csv, index_name, kIndexRules);
  const RawSeries gold = read_table(gold_csv, gold_name, kGoldRules);

  if (!index.has_column(kChangePct)) {
    const std::size_t p = index.column(kPrice);
    index.columns.emplace_back(kChangePct);
    for (std::size_t i = 0; i < index.rows.size(); ++i) {
      const double prev = i ? index.rows[i - 1].values[p] : 0.0;
      index.rows[i].values.push_back(i && prev != 0.0
                                         ? 100.0 * (index.rows[i].values[p] / prev - 1.0)
                                         : 0.0);
    }
  }

  RawSeries joined;
  joined.columns = index.columns;
  joined.columns.emplace_back(kGold);
  std::size_t g = 0;
  const Date last_gold = gold.rows.empty() ? Date{} : gold.rows.back().date;
  for (const auto& row : index.rows) {
    while (g < gold.rows.size() && gold.rows[g].date <= row.date) ++g;
    if (g == 0 || row.date > last_gold) continue;  // outside the gold range
    RawRow merged = row;
    merged.values.push_back(gold.rows[g - 1].values[0]);
    joined.rows.push_back(std::move(merged));
  }
  if (joined.rows.empty())
    throw ParseError(std::string(index_name), 0, "empty join: no trading date overlaps the gold series");
  return joined;
}

RawSeries ingest(const std::filesystem::path& index_csv, const std::filesystem::path& gold_csv) {
  auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError(p.string(), 0, "file not found");
    return in;
  };
  std::ifstream index = open(index_csv);
  std::ifstream gold = open(gold_csv);
  return ingest(index, gold, index_csv.string(), gold_csv.string());
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [label](const Sample& s) { return s.label == label; }));
}

Dataset Dataset::with_feature_order(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    const auto it = std::find(feature_names.begin(), feature_names.end(), n);
    if (it == feature_names.end()) throw std::invalid_argument("unknown feature '" + n + "'");
    idx.push_back(static_cast<std::size_t>(it - feature_names.begin()));
  }
  Dataset out;
  out.feature_names.assign(names.begin(), names.end());
  for (const auto& s : samples) {
    Sample t = s;
    t.features.clear();
    for (const auto k : idx) t.features.push_back(s.features[k]);
    out.samples.push_back(std::move(t));
  }
  if (!scaling.empty()) {
    for (const auto k : idx) {
      out.scaling.min.push_back(scaling.min[k]);
      out.scaling.max.push_back(scaling.max[k]);
    }
  }
  return out;
}

void Dataset::validate() const {
  for (const auto& s : samples) {
    if (s.features.size() != width())
      throw std::invalid_argument("sample '" + s.id + "' has " + std::to_string(s.features.size()) +
                                  " features, dataset declares " + std::to_string(width()));
    if (s.label != 1 && s.label != -1)
      throw std::invalid_argument("sample '" + s.id + "' label must be +1 or -1");
  }
  if (count_label(1) == 0 || count_label(-1) == 0)
    throw std::invalid_argument("dataset must contain both labels");
  if (!scaling.empty() && (scaling.min.size() != width() || scaling.max.size() != width()))
    throw std::invalid_argument("dataset scaling width mismatch");
}

const std::vector<std::string>& default_feature_order() {
  static const std::vector<std::string> order{"open",       "high", "low",
                                              "volume",     "change_pct", "gold",
                                              "gold_change_pct"};
  return order;
}

Dataset label_direction(const RawSeries& series, std::string_view close_column) {
  if (!series.has_column(close_column))
    throw std::invalid_argument("label_direction: missing close column '" +
                                std::string(close_column) + "'");
  if (series.rows.size() < 2) throw std::invalid_argument("label_direction: need at least 2 rows");
  const std::size_t close = series.column(close_column);
  std::vector<std::size_t> cols;
  for (const auto name : {kOpen, kHigh, kLow, kVolume, kChangePct, kGold})
    cols.push_back(series.column(name));
  const std::size_t gold = series.column(kGold);

  Dataset ds;
  ds.feature_names = default_feature_order();
  for (std::size_t t = 1; t < series.rows.size(); ++t) {
    const auto& prev = series.rows[t - 1].values;
    Sample s;
    s.date = format_date(series.rows[t].date);
    s.id = s.date;
    for (const auto c : cols) s.features.push_back(prev[c]);
    double gold_change = 0.0;
    if (t >= 2) {
      const double before = series.rows[t - 2].values[gold];
      if (before != 0.0) gold_change = 100.0 * (prev[gold] / before - 1.0);
    }
    s.features.push_back(gold_change);
    s.label = series.rows[t].values[close] > prev[close] ? 1 : -1;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

Scaling fit_scale(std::span<const Sample> train) {
  if (train.empty()) throw std::invalid_argument("fit_scale: empty fit split");
  Scaling sc;
  sc.min = train.front().features;
  sc.max = train.front().features;
  for (const auto& s : train) {
    if (s.features.size() != sc.min.size())
      throw std::invalid_argument("fit_scale: inconsistent feature widths");
    for (std::size_t k = 0; k < s.features.size(); ++k) {
      sc.min[k] = std::min(sc.min[k], s.features[k]);
      sc.max[k] = std::max(sc.max[k], s.features[k]);
    }
  }
  return sc;
}

std::vector<Sample> apply_scale(const Scaling& scaling, std::span<const Sample> rows) {
  constexpr double kPi = std::numbers::pi;
  std::vector<Sample> out(rows.begin(), rows.end());
  for (auto& s : out) {
    if (s.features.size() != scaling.min.size())
      throw std::invalid_argument("apply_scale: width mismatch");
    for (std::size_t k = 0; k < s.features.size(); ++k) {
      const double lo = scaling.min[k];
      const double hi = scaling.max[k];
      if (hi == lo) {
        s.features[k] = kPi / 2.0;
      } else {
        s.features[k] = std::clamp((s.features[k] - lo) / (hi - lo) * kPi, 0.0, kPi);
      }
    }
  }
  return out;
}

std::uint64_t subset_fingerprint(std::span<const Sample> train, std::span<const Sample> test) {
  std::vector<std::uint64_t> words;
  words.reserve(train.size() + test.size() + 1);
  for (const auto& s : train) words.push_back(hash_string(s.id));
  words.push_back(train.size());
  for (const auto& s : test) words.push_back(hash_string(s.id));
  return derive_seed(words);
}

Split sample_subset(const Dataset& ds, const SubsetSpec& spec) {
  if (spec.size < 2 || spec.size > ds.size())
    throw std::invalid_argument("sample_subset: N=" + std::to_string(spec.size) +
                                " outside [2, " + std::to_string(ds.size()) + "]");
  if (spec.num_features < 1 || spec.num_features > ds.width())
    throw std::invalid_argument("sample_subset: F=" + std::to_string(spec.num_features) +
                                " outside [1, " + std::to_string(ds.width()) + "]");
  if (!(spec.split_ratio > 0.0 && spec.split_ratio < 1.0))
    throw std::invalid_argument("sample_subset: split ratio must lie in (0, 1)");

  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < ds.size(); ++i) (ds.samples[i].label == 1 ? pos : neg).push_back(i);

  Rng rng(spec.trial_seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));

  const double frac = static_cast<double>(pos.size()) / static_cast<double>(ds.size());
  auto k_pos = static_cast<std::size_t>(std::llround(frac * static_cast<double>(spec.size)));
  k_pos = std::min(k_pos, pos.size());
  std::size_t k_neg = spec.size - k_pos;
  if (k_neg > neg.size()) {
    k_neg = neg.size();
    k_pos = spec.size - k_neg;
  }

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  auto split_class = [&](const std::vector<std::size_t>& members, std::size_t k) {
    const auto n_train = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * spec.split_ratio));
    for (std::size_t i = 0; i < k; ++i) (i < n_train ? train_idx : test_idx).push_back(members[i]);
  };
  split_class(pos, k_pos);
  split_class(neg, k_neg);
  rng.shuffle(std::span<std::size_t>(train_idx));
  rng.shuffle(std::span<std::size_t>(test_idx));

  auto take = [&](const std::vector<std::size_t>& idx) {
    std::vector<Sample> out;
    out.reserve(idx.size());
    for (const auto i : idx) {
      Sample s = ds.samples[i];
      s.features.resize(spec.num_features);
      out.push_back(std::move(s));
    }
    return out;
  };
  Split split{take(train_idx), take(test_idx), 0};
  auto both = [](const std::vector<Sample>& v) {
    bool p = false;
    bool n = false;
    for (const auto& s : v) (s.label == 1 ? p : n) = true;
    return p && n;
  };
  if (!both(split.train) || !both(split.test))
    throw std::invalid_argument("sample_subset: a class is absent from the train or test split");
  split.fingerprint = subset_fingerprint(split.train, split.test);
  return split;
}

// --- synthetic market ------------------------------------------------------

namespace {

std::string with_thousands(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  const auto dot = s.find('.');
  std::string head = s.substr(0, dot);
  const std::string tail = s.substr(dot);
  const bool negative = !head.empty() && head[0] == '-';
  if (negative) head.erase(0, 1);
  std::string grouped;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (i && (head.size() - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(head[i]);
  }
  return (negative ? "-" : "") + grouped + tail;
}

std::string us_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02u/%02u/%04d", static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()), static_cast<int>(d.year()));
  return buf;
}

}  // namespace

SyntheticMarket synthetic_market(std::uint64_t seed, std::size_t trading_days) {
  using namespace std::chrono;
  Rng rng(derive_seed({seed, hash_string("synthetic-market")}));

  const sys_days start = sys_days{year{2014} / January / 1};
  // Gold covers the index range with a margin on both sides.
  const auto calendar_days = static_cast<int>(trading_days * 7 / 5 + 30);

  std::vector<double> gold_price(static_cast<std::size_t>(calendar_days) + 1, 0.0);
  std::vector<double> gold_ret(gold_price.size(), 0.0);
  double g = 1250.0;
  for (std::size_t d = 0; d < gold_price.size(); ++d) {
    const weekday wd{start + days{static_cast<int>(d)}};
    const bool open_day = wd != Saturday && wd != Sunday;
    const double r = open_day ? 0.0001 + 0.009 * rng.normal() : 0.0;
    g *= std::exp(r);
    gold_price[d] = std::round(g * 100.0) / 100.0;
    gold_ret[d] = r;
  }

  std::ostringstream gold_csv;
  gold_csv << "Date,Price\n";
  for (int d = 0; d <= calendar_days; ++d) {
    const sys_days day = start + days{d};
    const weekday wd{day};
    if (wd == Saturday || wd == Sunday) continue;
    gold_csv << us_date(year_month_day{day}) << ',' << std::fixed;
    gold_csv.precision(2);
    gold_csv << gold_price[static_cast<std::size_t>(d)] << '\n';
  }

  struct Bar {
    Date date;
    double close, open, high, low, volume, change;
  };
  std::vector<Bar> bars;
  double close = 4200.0;
  double prev_ret = 0.0;
  double prev_gold_ret = 0.0;
  for (int d = 10; static_cast<int>(bars.size()) < static_cast<int>(trading_days); ++d) {
    const sys_days day = start + days{d};
    const weekday wd{day};
    if (wd == Friday || wd == Saturday) continue;
    const double ret = 0.0002 + 0.18 * prev_ret - 0.25 * prev_gold_ret + 0.008 * rng.normal();
    const double open = close * std::exp(0.002 * rng.normal());
    const double next = close * std::exp(ret);
    const double high = std::max(open, next) * (1.0 + 0.003 * std::abs(rng.normal()));
    const double low = std::min(open, next) * (1.0 - 0.003 * std::abs(rng.normal()));
    const double volume = std::exp(18.0 + 0.4 * rng.normal() + 20.0 * std::abs(ret));
    const double rounded = std::round(next * 100.0) / 100.0;
    const double prev_rounded = std::round(close * 100.0) / 100.0;
    bars.push_back({year_month_day{day}, rounded, open, high, low, volume,
                    100.0 * (rounded / prev_rounded - 1.0)});
    close = next;
    prev_ret = ret;
    prev_gold_ret = gold_ret[static_cast<std::size_t>(d)];
  }

  // Newest first, as exported by the usual quote sites.
  std::ostringstream index_csv;
  index_csv << "\"Date\",\"Price\",\"Open\",\"High\",\"Low\",\"Vol.\",\"Change %\"\n";
  for (auto it = bars.rbegin(); it != bars.rend(); ++it) {
    char vol[32];
    std::snprintf(vol, sizeof(vol), "%.2fM", it->volume / 1e6);
    char change[32];
    std::snprintf(change, sizeof(change), "%.2f%%", it->change);
    index_csv << '"' << us_date(it->date) << "\",\"" << with_thousands(it->close) << "\",\""
              << with_thousands(it->open) << "\",\"" << with_thousands(it->high) << "\",\""
              << with_thousands(it->low) << "\",\"" << vol << "\",\"" << change << "\"\n";
  }
  return {index_csv.str(), gold_csv.str()};
}

Dataset synthetic_dataset(std::uint64_t seed, std::size_t trading_days) {
  const SyntheticMarket m = synthetic_market(seed, trading_days);
  std::istringstream index(m.index_csv);
  std::istringstream gold(m.gold_csv);
  return label_direction(ingest(index, gold, "synthetic-index", "synthetic-gold"));
}

}  // namespace qkl
