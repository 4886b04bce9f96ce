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

#include "qkl/serialization.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace qkl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json header(std::string_view kind) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  return j;
}

void emit(std::ostream& os, const ordered_json& j) { os << j.dump(1) << '\n'; }

int major_of(std::string_view version) {
  int major = 0;
  const auto [ptr, ec] = std::from_chars(version.data(), version.data() + version.size(), major);
  if (ec != std::errc() || ptr == version.data())
    throw FormatError("malformed format_version '" + std::string(version) + "'");
  return major;
}

json parse_document(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j.contains("kind"))
    throw FormatError("document lacks format_version or kind");
  const std::string version = j.at("format_version").get<std::string>();
  if (major_of(version) != major_of(kFormatVersion))
    throw FormatError("unsupported format_version " + version + " (expected major " +
                      std::to_string(major_of(kFormatVersion)) + ")");
  return j;
}

json expect(std::istream& is, std::string_view kind) {
  json j = parse_document(is);
  const std::string got = j.at("kind").get<std::string>();
  if (got != kind)
    throw FormatError("expected a " + std::string(kind) + " document, got " + got);
  return j;
}

template <typename F>
auto guarded(std::string_view kind, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string(kind) + " document: " + e.what());
  }
}

std::string_view kind_name(KernelKind k) { return k == KernelKind::Rbf ? "rbf" : "quantum"; }

KernelKind parse_kind(std::string_view s) {
  if (s == "quantum") return KernelKind::Quantum;
  if (s == "rbf") return KernelKind::Rbf;
  throw FormatError("unknown kernel_kind '" + std::string(s) + "'");
}

ordered_json config_json(const KernelConfig& c) {
  ordered_json j;
  j["kernel_kind"] = kind_name(c.kind);
  j["feature_map"] = c.map_name;
  std::vector<std::string> layers;
  for (const auto t : c.pauli_layers) layers.emplace_back(pauli_term_name(t));
  j["pauli_layers"] = layers;
  j["repetitions"] = c.repetitions;
  j["gamma"] = c.gamma;
  j["mode"] = mode_name(c.mode);
  j["shots"] = c.shots;
  j["master_seed"] = c.master_seed;
  j["psd"] = psd_policy_name(c.psd);
  j["allow_overshoot"] = c.allow_overshoot;
  return j;
}

KernelConfig config_from(const json& j) {
  KernelConfig c;
  c.kind = parse_kind(j.at("kernel_kind").get<std::string>());
  c.map_name = j.at("feature_map").get<std::string>();
  c.pauli_layers.clear();
  for (const auto& t : j.at("pauli_layers")) c.pauli_layers.push_back(parse_pauli_term(t.get<std::string>()));
  c.repetitions = j.at("repetitions").get<int>();
  c.gamma = j.at("gamma").get<double>();
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.shots = j.at("shots").get<std::uint32_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.psd = parse_psd_policy(j.at("psd").get<std::string>());
  c.allow_overshoot = j.at("allow_overshoot").get<bool>();
  return c;
}

ordered_json svm_json(const SvmParams& p) {
  ordered_json j;
  j["C"] = p.C;
  j["tol"] = p.tol;
  j["seed"] = p.seed;
  j["max_iterations"] = p.max_iterations;
  return j;
}

SvmParams svm_from(const json& j) {
  SvmParams p;
  p.C = j.at("C").get<double>();
  p.tol = j.at("tol").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.max_iterations = j.at("max_iterations").get<std::size_t>();
  return p;
}

ordered_json record_json(const TrialRecord& r) {
  ordered_json j;
  j["trial"] = r.trial;
  j["trial_seed"] = r.trial_seed;
  j["subset_fingerprint"] = r.subset_fingerprint;
  j["balanced_accuracy"] = r.balanced_accuracy;
  j["f1"] = r.f1;
  return j;
}

TrialRecord record_from(const json& j) {
  return {j.at("trial").get<std::size_t>(), j.at("trial_seed").get<std::uint64_t>(),
          j.at("subset_fingerprint").get<std::uint64_t>(),
          j.at("balanced_accuracy").get<double>(), j.at("f1").get<double>()};
}

ordered_json aggregate_json(const Aggregate& a) {
  ordered_json j;
  j["mean"] = a.mean;
  j["std"] = a.std;
  return j;
}

Aggregate aggregate_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

ordered_json point_json(const ConfigPoint& p) {
  ordered_json j;
  j["F"] = p.features;
  j["N"] = p.size;
  return j;
}

ConfigPoint point_from(const json& j) {
  return {j.at("F").get<int>(), j.at("N").get<std::size_t>()};
}

ordered_json matrix_rows(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& rows, Eigen::Index nr, Eigen::Index nc) {
  if (static_cast<Eigen::Index>(rows.size()) != nr) throw FormatError("matrix row count mismatch");
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const json& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != nc) throw FormatError("matrix column count mismatch");
    for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

ordered_json report_json(const ResourceEstimate& e) {
  ordered_json j;
  j["F"] = e.features;
  j["R"] = e.repetitions;
  j["qubits"] = e.qubits;
  j["h"] = e.h;
  j["rx"] = e.rx;
  j["p"] = e.p;
  j["cx"] = e.cx;
  j["total"] = e.total;
  j["depth"] = e.depth;
  return j;
}

ResourceEstimate estimate_from(const json& j) {
  ResourceEstimate e;
  e.features = j.at("F").get<int>();
  e.repetitions = j.at("R").get<int>();
  e.qubits = j.at("qubits").get<int>();
  e.h = j.at("h").get<std::size_t>();
  e.rx = j.at("rx").get<std::size_t>();
  e.p = j.at("p").get<std::size_t>();
  e.cx = j.at("cx").get<std::size_t>();
  e.total = j.at("total").get<std::size_t>();
  e.depth = j.at("depth").get<std::size_t>();
  return e;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_records(std::ostream& os, const ConfigPoint& p, std::string_view kernel,
                   std::span<const TrialRecord> records) {
  for (const auto& r : records) {
    os << p.features << ',' << p.size << ',' << csv_field(kernel) << ',' << r.trial << ','
       << r.trial_seed << ',' << r.subset_fingerprint << ',' << format_double(r.balanced_accuracy)
       << ',' << format_double(r.f1) << '\n';
  }
}

constexpr std::string_view kRecordHeader =
    "F,N,kernel,trial,trial_seed,subset_fingerprint,balanced_accuracy,f1\n";

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view psd_policy_name(PsdPolicy p) {
  switch (p) {
    case PsdPolicy::Auto: return "auto";
    case PsdPolicy::Always: return "always";
    case PsdPolicy::Never: return "never";
  }
  return "auto";
}

PsdPolicy parse_psd_policy(std::string_view s) {
  if (s == "auto") return PsdPolicy::Auto;
  if (s == "always") return PsdPolicy::Always;
  if (s == "never") return PsdPolicy::Never;
  throw std::invalid_argument("unknown psd policy '" + std::string(s) + "'");
}

// --- dataset -----------------------------------------------------------------

void write_dataset(std::ostream& os, const Dataset& ds) {
  ordered_json j = header("dataset");
  j["feature_names"] = ds.feature_names;
  j["scaling"] = {{"min", ds.scaling.min}, {"max", ds.scaling.max}};
  ordered_json rows = ordered_json::array();
  for (const auto& s : ds.samples) {
    ordered_json r;
    r["id"] = s.id;
    r["date"] = s.date;
    r["features"] = s.features;
    r["label"] = s.label;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  emit(os, j);
}

Dataset read_dataset(std::istream& is) {
  const json j = expect(is, "dataset");
  return guarded("dataset", [&] {
    Dataset ds;
    ds.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    ds.scaling.min = j.at("scaling").at("min").get<std::vector<double>>();
    ds.scaling.max = j.at("scaling").at("max").get<std::vector<double>>();
    for (const auto& r : j.at("rows")) {
      ds.samples.push_back({r.at("id").get<std::string>(), r.at("date").get<std::string>(),
                            r.at("features").get<std::vector<double>>(), r.at("label").get<int>()});
    }
    ds.validate();
    return ds;
  });
}

// --- kernel ------------------------------------------------------------------

void write_kernel(std::ostream& os, const GramMatrix& g) {
  ordered_json j = header("kernel");
  const ordered_json config = config_json(g.config);
  for (const auto& [k, v] : config.items()) j[k] = v;
  j["features"] = g.num_features;
  j["symmetric"] = g.symmetric;
  j["rows"] = g.rows();
  j["cols"] = g.cols();
  j["row_ids"] = g.row_ids;
  j["col_ids"] = g.col_ids;
  ordered_json values = ordered_json::array();
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c) values.push_back(g.values(r, c));
  j["values"] = std::move(values);
  emit(os, j);
}

GramMatrix read_kernel(std::istream& is) {
  const json j = expect(is, "kernel");
  return guarded("kernel", [&] {
    GramMatrix g;
    g.config = config_from(j);
    g.num_features = j.at("features").get<int>();
    g.symmetric = j.at("symmetric").get<bool>();
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    g.row_ids = j.at("row_ids").get<std::vector<std::string>>();
    g.col_ids = j.at("col_ids").get<std::vector<std::string>>();
    const json& values = j.at("values");
    if (static_cast<Eigen::Index>(g.row_ids.size()) != rows ||
        static_cast<Eigen::Index>(g.col_ids.size()) != cols ||
        static_cast<Eigen::Index>(values.size()) != rows * cols)
      throw FormatError("kernel document: shape does not match ids and values");
    g.values.resize(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) g.values(r, c) = values.at(k++).get<double>();
    return g;
  });
}

// --- model -------------------------------------------------------------------

void write_model(std::ostream& os, const SvmModel& m) {
  ordered_json j = header("model");
  j["kernel"] = m.kernel_fingerprint;
  j["C"] = m.C;
  j["tol"] = m.tol;
  j["seed"] = m.seed;
  j["bias"] = m.bias;
  j["train_ids"] = m.train_ids;
  j["labels"] = m.labels;
  j["alphas"] = m.alphas;
  j["support_indices"] = m.support_indices;
  emit(os, j);
}

SvmModel read_model(std::istream& is) {
  const json j = expect(is, "model");
  return guarded("model", [&] {
    SvmModel m;
    m.kernel_fingerprint = j.at("kernel").get<std::string>();
    m.C = j.at("C").get<double>();
    m.tol = j.at("tol").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.bias = j.at("bias").get<double>();
    m.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    m.labels = j.at("labels").get<std::vector<int>>();
    m.alphas = j.at("alphas").get<std::vector<double>>();
    m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
    if (m.labels.size() != m.alphas.size() || m.train_ids.size() != m.alphas.size())
      throw FormatError("model document: alphas, labels and train_ids differ in length");
    return m;
  });
}

// --- sweep -------------------------------------------------------------------

void write_sweep(std::ostream& os, const SweepResult& sr) {
  ordered_json j = header("sweep");
  j["master_seed"] = sr.master_seed;
  j["trials"] = sr.trials;
  j["split_ratio"] = sr.split_ratio;
  j["svm"] = svm_json(sr.svm);
  ordered_json configs = ordered_json::array();
  for (const auto& p : sr.configs) configs.push_back(point_json(p));
  j["configs"] = std::move(configs);
  ordered_json kernels = ordered_json::array();
  for (const auto& k : sr.kernels) kernels.push_back(config_json(k));
  j["kernels"] = std::move(kernels);
  ordered_json cells = ordered_json::array();
  for (const auto& c : sr.cells) {
    ordered_json cell = point_json(c.point);
    cell["kernel"] = c.kernel;
    cell["balanced_accuracy"] = aggregate_json(c.balanced_accuracy);
    cell["f1"] = aggregate_json(c.f1);
    ordered_json trials = ordered_json::array();
    for (const auto& t : c.trials) trials.push_back(record_json(t));
    cell["records"] = std::move(trials);
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  emit(os, j);
}

SweepResult read_sweep(std::istream& is) {
  const json j = expect(is, "sweep");
  return guarded("sweep", [&] {
    SweepResult sr;
    sr.master_seed = j.at("master_seed").get<std::uint64_t>();
    sr.trials = j.at("trials").get<std::size_t>();
    sr.split_ratio = j.at("split_ratio").get<double>();
    sr.svm = svm_from(j.at("svm"));
    for (const auto& p : j.at("configs")) sr.configs.push_back(point_from(p));
    for (const auto& k : j.at("kernels")) sr.kernels.push_back(config_from(k));
    for (const auto& c : j.at("cells")) {
      SweepCell cell;
      cell.point = point_from(c);
      cell.kernel = c.at("kernel").get<std::string>();
      cell.balanced_accuracy = aggregate_from(c.at("balanced_accuracy"));
      cell.f1 = aggregate_from(c.at("f1"));
      for (const auto& t : c.at("records")) cell.trials.push_back(record_from(t));
      if (cell.trials.size() != sr.trials)
        throw FormatError("sweep document: cell trial count differs from 'trials'");
      sr.cells.push_back(std::move(cell));
    }
    if (sr.cells.size() != sr.configs.size() * sr.kernels.size())
      throw FormatError("sweep document: cell count does not match configs x kernels");
    return sr;
  });
}

// --- ptri --------------------------------------------------------------------

void write_ptri(std::ostream& os, std::span<const PtriGrid> grids) {
  ordered_json j = header("ptri");
  ordered_json list = ordered_json::array();
  for (const auto& g : grids) {
    ordered_json e;
    e["method"] = g.method;
    e["metric"] = metric_name(g.metric);
    e["averaging"] = averaging_name(g.averaging);
    e["baseline"] = g.baseline;
    e["feature_axis"] = g.feature_axis;
    e["size_axis"] = g.size_axis;
    e["heights"] = matrix_rows(g.heights);
    e["scores"] = matrix_rows(g.scores);
    list.push_back(std::move(e));
  }
  j["grids"] = std::move(list);
  emit(os, j);
}

std::vector<PtriGrid> read_ptri(std::istream& is) {
  const json j = expect(is, "ptri");
  return guarded("ptri", [&] {
    std::vector<PtriGrid> out;
    for (const auto& e : j.at("grids")) {
      PtriGrid g;
      g.method = e.at("method").get<std::string>();
      g.metric = parse_metric(e.at("metric").get<std::string>());
      g.averaging = parse_averaging(e.at("averaging").get<std::string>());
      g.baseline = e.at("baseline").get<std::string>();
      g.feature_axis = e.at("feature_axis").get<std::vector<int>>();
      g.size_axis = e.at("size_axis").get<std::vector<std::size_t>>();
      const auto nr = static_cast<Eigen::Index>(g.feature_axis.size());
      const auto nc = static_cast<Eigen::Index>(g.size_axis.size());
      g.heights = matrix_from(e.at("heights"), nr, nc);
      g.scores = matrix_from(e.at("scores"), nr, nc);
      out.push_back(std::move(g));
    }
    return out;
  });
}

// --- variability -------------------------------------------------------------

void write_variability(std::ostream& os, const VariabilityResult& v) {
  ordered_json j = header("variability");
  j["point"] = point_json(v.point);
  j["kernel"] = config_json(v.kernel);
  j["master_seed"] = v.master_seed;
  j["balanced_accuracy"] = aggregate_json(v.balanced_accuracy);
  j["bin_width"] = v.bin_width;
  ordered_json bins = ordered_json::array();
  for (const auto& b : v.histogram) {
    ordered_json e;
    e["lower"] = b.lower;
    e["upper"] = b.upper;
    e["count"] = b.count;
    bins.push_back(std::move(e));
  }
  j["histogram"] = std::move(bins);
  ordered_json records = ordered_json::array();
  for (const auto& r : v.records) records.push_back(record_json(r));
  j["records"] = std::move(records);
  emit(os, j);
}

VariabilityResult read_variability(std::istream& is) {
  const json j = expect(is, "variability");
  return guarded("variability", [&] {
    VariabilityResult v;
    v.point = point_from(j.at("point"));
    v.kernel = config_from(j.at("kernel"));
    v.master_seed = j.at("master_seed").get<std::uint64_t>();
    v.balanced_accuracy = aggregate_from(j.at("balanced_accuracy"));
    v.bin_width = j.at("bin_width").get<double>();
    for (const auto& b : j.at("histogram")) {
      v.histogram.push_back({b.at("lower").get<double>(), b.at("upper").get<double>(),
                             b.at("count").get<std::size_t>()});
    }
    for (const auto& r : j.at("records")) v.records.push_back(record_from(r));
    return v;
  });
}

// --- resources ---------------------------------------------------------------

void write_resources(std::ostream& os, std::span<const ResourceReport> reports) {
  ordered_json j = header("resources");
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json e;
    e["formula"] = report_json(r.formula);
    e["measured"] = report_json(r.measured);
    e["dag_depth"] = r.dag_depth;
    e["match"] = r.match;
    list.push_back(std::move(e));
  }
  j["reports"] = std::move(list);
  emit(os, j);
}

std::vector<ResourceReport> read_resources(std::istream& is) {
  const json j = expect(is, "resources");
  return guarded("resources", [&] {
    std::vector<ResourceReport> out;
    for (const auto& e : j.at("reports")) {
      out.push_back({estimate_from(e.at("formula")), estimate_from(e.at("measured")),
                     e.at("dag_depth").get<int>(), e.at("match").get<bool>()});
    }
    return out;
  });
}

std::string document_kind(std::istream& is) {
  return parse_document(is).at("kind").get<std::string>();
}

// --- tables ------------------------------------------------------------------

void write_sweep_table(std::ostream& os, const SweepResult& sr) {
  os << kRecordHeader;
  for (const auto& c : sr.cells) write_records(os, c.point, c.kernel, c.trials);
}

void write_ptri_table(std::ostream& os, std::span<const PtriGrid> grids) {
  os << "method,metric,averaging,F,N,height,ptri\n";
  for (const auto& g : grids) {
    for (std::size_t r = 0; r < g.feature_axis.size(); ++r) {
      for (std::size_t c = 0; c < g.size_axis.size(); ++c) {
        const auto ri = static_cast<Eigen::Index>(r);
        const auto ci = static_cast<Eigen::Index>(c);
        os << csv_field(g.method) << ',' << metric_name(g.metric) << ','
           << averaging_name(g.averaging) << ',' << g.feature_axis[r] << ',' << g.size_axis[c]
           << ',' << format_double(g.heights(ri, ci)) << ',' << format_double(g.scores(ri, ci))
           << '\n';
      }
    }
  }
}

void write_variability_table(std::ostream& os, const VariabilityResult& v) {
  os << kRecordHeader;
  write_records(os, v.point, v.kernel.name(), v.records);
}

void write_histogram_table(std::ostream& os, std::span<const HistogramBin> bins) {
  os << "lower,upper,count\n";
  for (const auto& b : bins)
    os << format_double(b.lower) << ',' << format_double(b.upper) << ',' << b.count << '\n';
}

void write_kernel_table(std::ostream& os, const GramMatrix& g) {
  os << "row_id,col_id,value\n";
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      os << csv_field(g.row_ids[static_cast<std::size_t>(r)]) << ','
         << csv_field(g.col_ids[static_cast<std::size_t>(c)]) << ','
         << format_double(g.values(r, c)) << '\n';
    }
  }
}

void write_dataset_table(std::ostream& os, const Dataset& ds) {
  os << "id,date";
  for (const auto& n : ds.feature_names) os << ',' << csv_field(n);
  os << ",label\n";
  for (const auto& s : ds.samples) {
    os << csv_field(s.id) << ',' << csv_field(s.date);
    for (const double v : s.features) os << ',' << format_double(v);
    os << ',' << s.label << '\n';
  }
}

void write_model_table(std::ostream& os, const SvmModel& m) {
  os << "index,train_id,label,alpha\n";
  for (std::size_t i = 0; i < m.alphas.size(); ++i) {
    os << i << ',' << csv_field(m.train_ids[i]) << ',' << m.labels[i] << ','
       << format_double(m.alphas[i]) << '\n';
  }
}

void flatten_to_table(std::istream& is, std::ostream& os) {
  const std::string text(std::istreambuf_iterator<char>(is), {});
  std::istringstream probe(text);
  const std::string kind = document_kind(probe);
  std::istringstream in(text);
  if (kind == "dataset") {
    write_dataset_table(os, read_dataset(in));
  } else if (kind == "kernel") {
    write_kernel_table(os, read_kernel(in));
  } else if (kind == "model") {
    write_model_table(os, read_model(in));
  } else if (kind == "sweep") {
    write_sweep_table(os, read_sweep(in));
  } else if (kind == "ptri") {
    write_ptri_table(os, read_ptri(in));
  } else if (kind == "variability") {
    write_variability_table(os, read_variability(in));
  } else if (kind == "resources") {
    write_resource_table(os, read_resources(in));
  } else {
    throw FormatError("no table form for document kind '" + kind + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file not found: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace qkl
