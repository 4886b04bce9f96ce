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

#include "qkl/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "qkl/data.hpp"
#include "qkl/experiment.hpp"
#include "qkl/manifest.hpp"
#include "qkl/resources.hpp"
#include "qkl/serialization.hpp"
#include "qkl/svm.hpp"

namespace qkl {

namespace {

struct Output {
  std::string role;
  std::string path;
};

struct RunResult {
  std::uint64_t master_seed = 0;
  std::vector<Output> outputs;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  int threads = 1;
};

// --- helpers -----------------------------------------------------------------

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string_view item =
        s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_integer(std::string_view s, std::string_view what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

/// "2-4,7" -> {2, 3, 4, 7}
template <typename T>
std::vector<T> parse_int_list(std::string_view s, std::string_view what) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    const std::size_t dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_integer<T>(item, what));
    } else {
      const T lo = parse_integer<T>(std::string_view(item).substr(0, dash), what);
      const T hi = parse_integer<T>(std::string_view(item).substr(dash + 1), what);
      if (hi < lo) throw std::invalid_argument("empty range '" + item + "' for " + std::string(what));
      for (T v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list for " + std::string(what));
  return out;
}

Dataset load_dataset(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_dataset(in);
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

template <typename Writer>
void save(const std::string& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_file(path, os.str());
}

std::vector<Sample> truncate_features(std::span<const Sample> rows, std::size_t f) {
  std::vector<Sample> out(rows.begin(), rows.end());
  for (auto& s : out) s.features.resize(f);
  return out;
}

std::size_t resolve_features(const Dataset& ds, int requested) {
  if (requested <= 0) return ds.width();
  if (static_cast<std::size_t>(requested) > ds.width())
    throw std::invalid_argument("--features " + std::to_string(requested) + " exceeds the " +
                                std::to_string(ds.width()) + " dataset columns");
  return static_cast<std::size_t>(requested);
}

std::vector<int> labels_of(std::span<const Sample> rows) {
  std::vector<int> y;
  for (const auto& s : rows) y.push_back(s.label);
  return y;
}

// --- shared kernel flags -------------------------------------------------------

struct KernelFlags {
  std::string map = "yyy";
  int reps = kDefaultRepetitions;
  std::string mode = "exact";
  std::uint32_t shots = kMaxShots;
  bool allow_overshoot = false;
  double gamma = 0.0;
  std::string psd = "auto";

  void add(CLI::App* app, bool with_map) {
    if (with_map) {
      app->add_option("--map", map, "Feature map preset or rbf")
          ->check(CLI::IsMember({"z", "zz", "yyy", "yzz", "zzz", "rbf"}));
    }
    app->add_option("--reps", reps, "Feature-map repetitions R")->check(CLI::PositiveNumber);
    app->add_option("--mode", mode, "Kernel estimation mode")->check(CLI::IsMember({"exact", "shots"}));
    app->add_option("--shots", shots, "Shots per kernel entry in shots mode");
    app->add_flag("--allow-overshoot", allow_overshoot, "Permit more than 1024 shots");
    app->add_option("--gamma", gamma, "RBF gamma (0 derives it from the training rows)");
    app->add_option("--psd", psd, "PSD clipping of training Grams")
        ->check(CLI::IsMember({"auto", "always", "never"}));
  }

  [[nodiscard]] KernelConfig config(std::string_view name, std::uint64_t seed) const {
    KernelConfig c = name == "rbf" ? KernelConfig::rbf(gamma)
                                   : KernelConfig::quantum(parse_preset(name), reps);
    c.mode = parse_mode(mode);
    c.shots = shots;
    c.allow_overshoot = allow_overshoot;
    c.master_seed = seed;
    c.psd = parse_psd_policy(psd);
    c.validate();
    return c;
  }
};

struct SvmFlags {
  double C = 1.0;
  double tol = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--C", C, "SVM regularization")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "SMO stopping tolerance")->check(CLI::PositiveNumber);
  }

  [[nodiscard]] SvmParams params() const {
    SvmParams p;
    p.C = C;
    p.tol = tol;
    return p;
  }
};

// --- ingest --------------------------------------------------------------------

struct IngestFlags {
  std::string index;
  std::string gold;
  std::optional<std::uint64_t> synthetic;
  std::size_t days = 460;
  std::optional<std::uint64_t> separable;
  std::size_t rows = 600;
  int width = 7;
  std::string map = "yyy";
  int reps = kDefaultRepetitions;
  double margin = 0.3;
  std::string columns;
  std::string emit_csv;
  std::string out;
};

RunResult cmd_ingest(const IngestFlags& f, Context& ctx) {
  const int sources = (!f.index.empty() || !f.gold.empty()) + f.synthetic.has_value() +
                      f.separable.has_value();
  if (sources != 1)
    throw std::invalid_argument("choose exactly one source: --index/--gold, --synthetic or --separable");

  RunResult result;
  Dataset ds;
  if (f.synthetic) {
    result.master_seed = *f.synthetic;
    const SyntheticMarket m = synthetic_market(*f.synthetic, f.days);
    if (!f.emit_csv.empty()) {
      write_file(std::filesystem::path(f.emit_csv) / "index.csv", m.index_csv);
      write_file(std::filesystem::path(f.emit_csv) / "gold.csv", m.gold_csv);
      result.outputs.push_back({"index_csv", (std::filesystem::path(f.emit_csv) / "index.csv").string()});
      result.outputs.push_back({"gold_csv", (std::filesystem::path(f.emit_csv) / "gold.csv").string()});
    }
    std::istringstream index(m.index_csv);
    std::istringstream gold(m.gold_csv);
    ds = label_direction(ingest(index, gold, "synthetic-index", "synthetic-gold"));
  } else if (f.separable) {
    result.master_seed = *f.separable;
    if (f.map == "rbf") throw std::invalid_argument("--separable needs a quantum --map");
    ds = feature_space_dataset(*f.separable, f.rows, f.width, parse_preset(f.map), f.reps, f.margin);
  } else {
    if (f.index.empty() || f.gold.empty())
      throw std::invalid_argument("--index and --gold are both required");
    ds = label_direction(ingest(std::filesystem::path(f.index), std::filesystem::path(f.gold)));
  }
  if (!f.columns.empty()) {
    const std::vector<std::string> names = split_list(f.columns);
    ds = ds.with_feature_order(names);
  }
  ds.validate();
  save(f.out, [&](std::ostream& os) { write_dataset(os, ds); });
  result.outputs.push_back({"out", f.out});
  ctx.out << "rows=" << ds.size() << " up=" << ds.count_label(1) << " down=" << ds.count_label(-1)
          << " features=" << ds.width() << '\n';
  return result;
}

// --- kernel --------------------------------------------------------------------

struct KernelCmdFlags {
  std::string dataset;
  KernelFlags kernel;
  int features = 0;
  std::uint64_t seed = 0;
  std::string rows = "all";
  std::size_t size = 0;
  double split = 0.7;
  std::string out;
  std::string table;
};

RunResult cmd_kernel(const KernelCmdFlags& f, Context& ctx) {
  const Dataset ds = load_dataset(f.dataset);
  const std::size_t width = resolve_features(ds, f.features);
  KernelConfig config = f.kernel.config(f.kernel.map, f.seed);

  std::vector<Sample> rows;
  std::vector<Sample> cols;
  if (f.rows == "all") {
    const std::size_t n = f.size == 0 ? ds.size() : std::min(f.size, ds.size());
    rows = truncate_features(std::span(ds.samples).first(n), width);
    rows = apply_scale(fit_scale(rows), rows);
    cols = rows;
  } else {
    const Split split =
        sample_subset(ds, {f.size == 0 ? ds.size() : f.size, width, f.seed, f.split});
    const Scaling scaling = fit_scale(split.train);
    cols = apply_scale(scaling, split.train);
    rows = f.rows == "train" ? cols : apply_scale(scaling, split.test);
  }
  if (config.kind == KernelKind::Rbf && config.gamma == 0.0) config.gamma = default_rbf_gamma(cols);

  GramMatrix g = gram_matrix(rows, cols, config, ctx.threads);
  if (g.symmetric && config.wants_psd_clip()) g = psd_clip(g);
  save(f.out, [&](std::ostream& os) { write_kernel(os, g); });
  RunResult result{f.seed, {{"out", f.out}}};
  if (!f.table.empty()) {
    save(f.table, [&](std::ostream& os) { write_kernel_table(os, g); });
    result.outputs.push_back({"table", f.table});
  }
  ctx.out << "kernel=" << config.name() << " F=" << width << " shape=" << g.rows() << 'x'
          << g.cols() << (g.symmetric ? " symmetric" : "") << " mode=" << mode_name(config.mode);
  if (g.symmetric) ctx.out << " min_eigenvalue=" << format_double(min_eigenvalue(g.values));
  ctx.out << '\n';
  return result;
}

// --- train ---------------------------------------------------------------------

struct TrainFlags {
  std::string dataset;
  KernelFlags kernel;
  SvmFlags svm;
  int features = 0;
  std::size_t size = 0;
  double split = 0.7;
  std::uint64_t seed = 0;
  std::string out;
};

RunResult cmd_train(const TrainFlags& f, Context& ctx) {
  const Dataset ds = load_dataset(f.dataset);
  const std::size_t width = resolve_features(ds, f.features);
  KernelConfig config = f.kernel.config(f.kernel.map, f.seed);
  const Split split = sample_subset(ds, {f.size == 0 ? ds.size() : f.size, width, f.seed, f.split});
  const Scaling scaling = fit_scale(split.train);
  const std::vector<Sample> train_rows = apply_scale(scaling, split.train);
  const std::vector<Sample> test_rows = apply_scale(scaling, split.test);
  if (config.kind == KernelKind::Rbf && config.gamma == 0.0)
    config.gamma = default_rbf_gamma(train_rows);

  GramMatrix g = gram_matrix(train_rows, config, ctx.threads);
  if (config.wants_psd_clip()) g = psd_clip(g);
  SvmParams params = f.svm.params();
  params.seed = f.seed;
  TrainingReport report;
  const SvmModel model = train(g, labels_of(train_rows), params, &report);
  const GramMatrix self = gram_matrix(train_rows, train_rows, config, ctx.threads);
  const GramMatrix cross = gram_matrix(test_rows, train_rows, config, ctx.threads);
  const double train_ba = balanced_accuracy(confusion(labels_of(train_rows), predict(model, self)));
  const ConfusionMatrix cm = confusion(labels_of(test_rows), predict(model, cross));

  save(f.out, [&](std::ostream& os) { write_model(os, model); });
  ctx.out << "kernel=" << config.name() << " F=" << width << " train=" << train_rows.size()
          << " test=" << test_rows.size() << " support=" << model.support_indices.size()
          << " iterations=" << report.iterations << '\n'
          << "train_balanced_accuracy=" << fixed(train_ba)
          << " test_balanced_accuracy=" << fixed(balanced_accuracy(cm))
          << " test_f1=" << fixed(f1(cm)) << '\n';
  return {f.seed, {{"out", f.out}}};
}

// --- sweep ---------------------------------------------------------------------

struct SweepFlags {
  std::string dataset;
  std::string kernels = "z,zz,yyy,yzz,zzz,rbf";
  std::string features = "5,6,7";
  std::string sizes = "200,250,300,350,400";
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double split = 0.7;
  KernelFlags kernel;
  SvmFlags svm;
  std::string out;
  std::string table;
};

RunResult cmd_sweep(const SweepFlags& f, Context& ctx) {
  const Dataset ds = load_dataset(f.dataset);
  std::vector<KernelConfig> kernels;
  for (const auto& name : split_list(f.kernels)) kernels.push_back(f.kernel.config(name, 0));
  const auto fs = parse_int_list<int>(f.features, "--features");
  const auto ns = parse_int_list<std::size_t>(f.sizes, "--sizes");
  const std::vector<ConfigPoint> grid = make_grid(fs, ns);

  SweepOptions options;
  options.trials = f.trials;
  options.master_seed = f.seed;
  options.split_ratio = f.split;
  options.svm = f.svm.params();
  options.threads = ctx.threads;
  const SweepResult sr = run_sweep(ds, grid, kernels, options);

  save(f.out, [&](std::ostream& os) { write_sweep(os, sr); });
  RunResult result{f.seed, {{"out", f.out}}};
  if (!f.table.empty()) {
    save(f.table, [&](std::ostream& os) { write_sweep_table(os, sr); });
    result.outputs.push_back({"table", f.table});
  }

  ctx.out << "mean balanced accuracy over " << f.trials << " trials\n";
  ctx.out << std::left << std::setw(6) << "F" << std::setw(6) << "N";
  for (const auto& k : kernels) ctx.out << std::setw(16) << k.name();
  ctx.out << '\n';
  for (const auto& p : grid) {
    ctx.out << std::setw(6) << p.features << std::setw(6) << p.size;
    for (const auto& k : kernels) {
      const auto& a = sr.cell(p, k.name()).balanced_accuracy;
      ctx.out << std::setw(16) << (fixed(a.mean) + " +- " + fixed(a.std, 3));
    }
    ctx.out << '\n';
  }
  if (sr.has_kernel("rbf")) {
    for (const auto& k : kernels) {
      if (k.kind == KernelKind::Rbf) continue;
      const auto diff = eqa_difference(sr, k.name(), "rbf");
      const auto above = std::count_if(diff.begin(), diff.end(),
                                       [](const ConfigValue& v) { return v.value > 0.0; });
      ctx.out << "EQA " << k.name() << " - rbf: above zero at " << above << '/' << diff.size()
              << " configs\n";
    }
  }
  return result;
}

// --- ptri ----------------------------------------------------------------------

struct PtriFlags {
  std::string sweep;
  std::string methods;
  std::string baseline = "rbf";
  std::string averaging = "reference";
  std::string metric = "balanced_accuracy";
  std::string out;
  std::string table;
};

RunResult cmd_ptri(const PtriFlags& f, Context& ctx) {
  std::istringstream in(read_file(f.sweep));
  const SweepResult sr = read_sweep(in);
  std::vector<std::string> methods = f.methods.empty() ? sr.kernel_names() : split_list(f.methods);
  const PtriAveraging averaging = parse_averaging(f.averaging);
  const Metric metric = parse_metric(f.metric);
  std::vector<PtriGrid> grids;
  for (const auto& m : methods) grids.push_back(ptri(sr, m, f.baseline, averaging, metric));

  save(f.out, [&](std::ostream& os) { write_ptri(os, grids); });
  RunResult result{sr.master_seed, {{"out", f.out}}};
  if (!f.table.empty()) {
    save(f.table, [&](std::ostream& os) { write_ptri_table(os, grids); });
    result.outputs.push_back({"table", f.table});
  }
  for (const auto& g : grids) {
    ctx.out << "PTRI " << g.method << " (" << metric_name(g.metric) << ", "
            << averaging_name(g.averaging) << ")\n"
            << std::left << std::setw(6) << "F";
    for (const auto n : g.size_axis) ctx.out << std::setw(9) << ("N=" + std::to_string(n));
    ctx.out << '\n';
    for (std::size_t r = 0; r < g.feature_axis.size(); ++r) {
      ctx.out << std::setw(6) << g.feature_axis[r];
      for (std::size_t c = 0; c < g.size_axis.size(); ++c)
        ctx.out << std::setw(9)
                << fixed(g.scores(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      ctx.out << '\n';
    }
  }
  return result;
}

// --- variability ---------------------------------------------------------------

struct VariabilityFlags {
  std::string dataset;
  KernelFlags kernel;
  SvmFlags svm;
  int features = 5;
  std::size_t size = 200;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double split = 0.7;
  double bin_width = 0.01;
  bool fixed_subset = false;
  std::string out;
  std::string table;
  std::string histogram;
};

RunResult cmd_variability(const VariabilityFlags& f, Context& ctx) {
  const Dataset ds = load_dataset(f.dataset);
  const KernelConfig config = f.kernel.config(f.kernel.map, 0);
  const ConfigPoint point{f.features, f.size};
  VariabilityOptions options;
  options.split_ratio = f.split;
  options.svm = f.svm.params();
  options.bin_width = f.bin_width;
  options.threads = ctx.threads;
  if (f.fixed_subset) options.fixed_trial_seed = trial_seed(f.seed, point, 0);
  const VariabilityResult v = variability_study(ds, point, config, f.trials, f.seed, options);

  save(f.out, [&](std::ostream& os) { write_variability(os, v); });
  RunResult result{f.seed, {{"out", f.out}}};
  if (!f.table.empty()) {
    save(f.table, [&](std::ostream& os) { write_variability_table(os, v); });
    result.outputs.push_back({"table", f.table});
  }
  if (!f.histogram.empty()) {
    save(f.histogram, [&](std::ostream& os) { write_histogram_table(os, v.histogram); });
    result.outputs.push_back({"histogram", f.histogram});
  }
  ctx.out << "kernel=" << config.name() << " F=" << f.features << " N=" << f.size
          << " trials=" << f.trials << " mean_balanced_accuracy=" << fixed(v.balanced_accuracy.mean)
          << " std=" << fixed(v.balanced_accuracy.std) << '\n';
  for (const auto& b : v.histogram) {
    ctx.out << '[' << fixed(b.lower, 2) << ", " << fixed(b.upper, 2) << ") "
            << std::string(b.count, '#') << ' ' << b.count << '\n';
  }
  return result;
}

// --- resources -----------------------------------------------------------------

struct ResourcesFlags {
  std::string features = "4";
  std::string reps = "1";
  bool verify = false;
  std::string out;
  std::string table;
};

RunResult cmd_resources(const ResourcesFlags& f, Context& ctx) {
  std::vector<ResourceReport> reports;
  for (const int r : parse_int_list<int>(f.reps, "--reps"))
    for (const int n : parse_int_list<int>(f.features, "--features"))
      reports.push_back(verify_against_circuit(n, r));

  RunResult result;
  if (f.verify) {
    write_resource_table(ctx.out, reports);
  } else {
    ctx.out << "F\tR\tqubits\th\trx\tp\tcx\ttotal\tdepth\n";
    for (const auto& rep : reports) {
      const auto& e = rep.formula;
      ctx.out << e.features << '\t' << e.repetitions << '\t' << e.qubits << '\t' << e.h << '\t'
              << e.rx << '\t' << e.p << '\t' << e.cx << '\t' << e.total << '\t' << e.depth << '\n';
    }
  }
  if (!f.out.empty()) {
    save(f.out, [&](std::ostream& os) { write_resources(os, reports); });
    result.outputs.push_back({"out", f.out});
  }
  if (!f.table.empty()) {
    save(f.table, [&](std::ostream& os) { write_resource_table(os, reports); });
    result.outputs.push_back({"table", f.table});
  }
  if (f.verify) {
    for (const auto& rep : reports) {
      if (!rep.match)
        throw std::runtime_error("formula and circuit disagree at F=" +
                                 std::to_string(rep.formula.features) +
                                 ", R=" + std::to_string(rep.formula.repetitions));
    }
  }
  return result;
}

// --- report --------------------------------------------------------------------

struct ReportFlags {
  std::string in;
  std::string out;
};

RunResult cmd_report(const ReportFlags& f, Context& ctx) {
  std::istringstream in(read_file(f.in));
  std::ostringstream table;
  flatten_to_table(in, table);
  write_file(f.out, table.str());
  ctx.out << "wrote " << f.out << '\n';
  return {0, {{"out", f.out}}};
}

// --- manifest plumbing ---------------------------------------------------------

std::vector<std::pair<std::string, std::string>> collect_flags(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> flags;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    std::string value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    flags.emplace_back(name, value);
  }
  return flags;
}

const std::map<std::string, std::vector<std::string>>& input_roles() {
  static const std::map<std::string, std::vector<std::string>> roles{
      {"ingest", {"index", "gold"}},   {"kernel", {"dataset"}},      {"train", {"dataset"}},
      {"sweep", {"dataset"}},          {"ptri", {"sweep"}},          {"variability", {"dataset"}},
      {"resources", {}},               {"report", {"in"}}};
  return roles;
}

void write_run_manifest(const CLI::App* sub, const RunResult& result) {
  if (result.outputs.empty()) return;
  RunManifest m;
  m.command = sub->get_name();
  m.flags = collect_flags(sub);
  m.master_seed = result.master_seed;
  m.tool_version = QKL_VERSION;
  for (const auto& role : input_roles().at(m.command)) {
    const std::string path = sub->get_option("--" + role)->as<std::string>();
    if (!path.empty()) m.inputs.push_back({role, path, sha256_file(path)});
  }
  std::string primary;
  for (const auto& o : result.outputs) {
    m.outputs.push_back({o.role, o.path, sha256_file(o.path)});
    if (o.role == "out") primary = o.path;
  }
  if (primary.empty()) primary = result.outputs.front().path;
  save(manifest_path(primary).string(), [&](std::ostream& os) { write_manifest(os, m); });
}

std::vector<std::string> replay_args(const RunManifest& m, const std::string& out_override) {
  std::vector<std::string> args{m.command};
  bool replaced = false;
  for (const auto& [name, value] : m.flags) {
    std::string v = value;
    if (name == "out" && !out_override.empty()) {
      v = out_override;
      replaced = true;
    }
    if (v == "true" || v == "false") {
      // boolean flag
      if (v == "true") args.push_back("--" + name);
      continue;
    }
    if (v.empty()) continue;
    args.push_back("--" + name);
    args.push_back(v);
  }
  if (!out_override.empty() && !replaced) {
    args.push_back("--out");
    args.push_back(out_override);
  }
  return args;
}

int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-kernel SVM experiments on tabular market data", "qkl"};
  app.set_version_flag("--version", std::string(QKL_VERSION));
  app.option_defaults()->always_capture_default();
  app.require_subcommand(0, 1);
  app.fallthrough();

  int threads = 0;
  std::string replay;
  std::string replay_out;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); never changes results");
  app.add_option("--replay", replay, "Re-run the command recorded in a manifest");
  app.add_option("--out", replay_out, "With --replay: write the primary output here instead");

  IngestFlags ingest_f;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "Merge index and gold CSVs into a labelled dataset");
  ingest_cmd->add_option("--index", ingest_f.index, "Index price CSV");
  ingest_cmd->add_option("--gold", ingest_f.gold, "Gold price CSV");
  ingest_cmd->add_option("--synthetic", ingest_f.synthetic, "Generate a synthetic market with this seed");
  ingest_cmd->add_option("--days", ingest_f.days, "Trading days of the synthetic market");
  ingest_cmd->add_option("--separable", ingest_f.separable,
                         "Generate a dataset separable in a quantum feature space with this seed");
  ingest_cmd->add_option("--rows", ingest_f.rows, "Rows of the separable dataset");
  ingest_cmd->add_option("--width", ingest_f.width, "Features of the separable dataset");
  ingest_cmd->add_option("--map", ingest_f.map, "Feature map of the separable dataset")
      ->check(CLI::IsMember({"z", "zz", "yyy", "yzz", "zzz"}));
  ingest_cmd->add_option("--reps", ingest_f.reps, "Repetitions of the separable dataset's map");
  ingest_cmd->add_option("--margin", ingest_f.margin, "Label margin of the separable dataset");
  ingest_cmd->add_option("--columns", ingest_f.columns, "Comma-separated feature columns, in order");
  ingest_cmd->add_option("--emit-csv", ingest_f.emit_csv, "Also write the synthetic CSVs here");
  ingest_cmd->add_option("--out", ingest_f.out, "Dataset file")->required();

  KernelCmdFlags kernel_f;
  CLI::App* kernel_cmd = app.add_subcommand("kernel", "Compute and save a Gram matrix");
  kernel_cmd->add_option("--dataset", kernel_f.dataset, "Dataset file")->required();
  kernel_f.kernel.add(kernel_cmd, true);
  kernel_cmd->add_option("--features", kernel_f.features, "Leading feature columns (0 = all)");
  kernel_cmd->add_option("--seed", kernel_f.seed, "Master seed for subsets and shots");
  kernel_cmd->add_option("--rows", kernel_f.rows, "Row set")->check(CLI::IsMember({"train", "test", "all"}));
  kernel_cmd->add_option("--size", kernel_f.size, "Subset size N (0 = all rows)");
  kernel_cmd->add_option("--split", kernel_f.split, "Training fraction");
  kernel_cmd->add_option("--out", kernel_f.out, "Kernel file")->required();
  kernel_cmd->add_option("--table", kernel_f.table, "Optional CSV of entries");

  TrainFlags train_f;
  CLI::App* train_cmd = app.add_subcommand("train", "Train and score one SVM, saving the model");
  train_cmd->add_option("--dataset", train_f.dataset, "Dataset file")->required();
  train_f.kernel.add(train_cmd, true);
  train_f.svm.add(train_cmd);
  train_cmd->add_option("--features", train_f.features, "Leading feature columns (0 = all)");
  train_cmd->add_option("--size", train_f.size, "Subset size N (0 = all rows)");
  train_cmd->add_option("--split", train_f.split, "Training fraction");
  train_cmd->add_option("--seed", train_f.seed, "Subset and solver seed");
  train_cmd->add_option("--out", train_f.out, "Model file")->required();

  SweepFlags sweep_f;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Configuration-space sweep over F x N");
  sweep_cmd->add_option("--dataset", sweep_f.dataset, "Dataset file")->required();
  sweep_cmd->add_option("--kernels", sweep_f.kernels, "Comma-separated kernels");
  sweep_cmd->add_option("--features", sweep_f.features, "Feature counts, e.g. 5,6,7 or 5-7");
  sweep_cmd->add_option("--sizes", sweep_f.sizes, "Dataset sizes");
  sweep_cmd->add_option("--trials", sweep_f.trials, "Trials per config")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep_f.seed, "Master seed");
  sweep_cmd->add_option("--split", sweep_f.split, "Training fraction");
  sweep_f.kernel.add(sweep_cmd, false);
  sweep_f.svm.add(sweep_cmd);
  sweep_cmd->add_option("--out", sweep_f.out, "Sweep result file")->required();
  sweep_cmd->add_option("--table", sweep_f.table, "Optional per-trial CSV");

  PtriFlags ptri_f;
  CLI::App* ptri_cmd = app.add_subcommand("ptri", "Ruggedness surfaces from a sweep");
  ptri_cmd->add_option("--sweep", ptri_f.sweep, "Sweep result file")->required();
  ptri_cmd->add_option("--methods", ptri_f.methods, "Kernels to score (default: all)");
  ptri_cmd->add_option("--baseline", ptri_f.baseline, "Kernel that picks reference trials");
  ptri_cmd->add_option("--averaging", ptri_f.averaging, "reference or all")
      ->check(CLI::IsMember({"reference", "all"}));
  ptri_cmd->add_option("--metric", ptri_f.metric, "balanced_accuracy or f1")
      ->check(CLI::IsMember({"balanced_accuracy", "f1"}));
  ptri_cmd->add_option("--out", ptri_f.out, "PTRI result file")->required();
  ptri_cmd->add_option("--table", ptri_f.table, "Optional CSV");

  VariabilityFlags var_f;
  CLI::App* var_cmd = app.add_subcommand("variability", "Repeated subset draws at one config");
  var_cmd->add_option("--dataset", var_f.dataset, "Dataset file")->required();
  var_f.kernel.add(var_cmd, true);
  var_f.svm.add(var_cmd);
  var_cmd->add_option("--features", var_f.features, "Feature count F")->check(CLI::PositiveNumber);
  var_cmd->add_option("--size", var_f.size, "Dataset size N")->check(CLI::PositiveNumber);
  var_cmd->add_option("--trials", var_f.trials, "Number of runs");
  var_cmd->add_option("--seed", var_f.seed, "Master seed");
  var_cmd->add_option("--split", var_f.split, "Training fraction");
  var_cmd->add_option("--bin-width", var_f.bin_width, "Histogram bin width");
  var_cmd->add_flag("--fixed-subset", var_f.fixed_subset, "Reuse one subset for every run");
  var_cmd->add_option("--out", var_f.out, "Variability result file")->required();
  var_cmd->add_option("--table", var_f.table, "Optional per-trial CSV");
  var_cmd->add_option("--histogram", var_f.histogram, "Optional histogram CSV");

  ResourcesFlags res_f;
  CLI::App* res_cmd = app.add_subcommand("resources", "Gate and depth counts of the Y YY map");
  res_cmd->add_option("--features", res_f.features, "Feature counts, e.g. 4 or 2-10");
  res_cmd->add_option("--reps", res_f.reps, "Repetitions, e.g. 1 or 1-3");
  res_cmd->add_flag("--verify", res_f.verify, "Compare against built circuits");
  res_cmd->add_option("--out", res_f.out, "Optional result file");
  res_cmd->add_option("--table", res_f.table, "Optional TSV table");

  ReportFlags report_f;
  CLI::App* report_cmd = app.add_subcommand("report", "Flatten any result file to CSV");
  report_cmd->add_option("--in", report_f.in, "Result file")->required();
  report_cmd->add_option("--out", report_f.out, "CSV output")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (!replay.empty()) {
    if (!app.get_subcommands().empty()) {
      err << "error: --replay cannot be combined with a subcommand\n";
      return 2;
    }
    try {
      std::istringstream in(read_file(replay));
      const RunManifest m = read_manifest(in);
      if (!input_roles().contains(m.command))
        throw std::runtime_error("manifest names unknown command '" + m.command + "'");
      verify_inputs(m);
      std::vector<std::string> again{"--threads", std::to_string(threads)};
      const auto rest = replay_args(m, replay_out);
      again.insert(again.end(), rest.begin(), rest.end());
      return run_cli(again, out, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }

  if (!replay_out.empty()) {
    err << "error: a leading --out is only valid with --replay\n";
    return 2;
  }
  if (app.get_subcommands().empty()) {
    out << app.help();
    return 0;
  }

  Context ctx{out, err, threads > 0 ? threads : default_threads()};
  CLI::App* sub = app.get_subcommands().front();
  try {
    RunResult result;
    const std::string name = sub->get_name();
    if (name == "ingest") result = cmd_ingest(ingest_f, ctx);
    else if (name == "kernel") result = cmd_kernel(kernel_f, ctx);
    else if (name == "train") result = cmd_train(train_f, ctx);
    else if (name == "sweep") result = cmd_sweep(sweep_f, ctx);
    else if (name == "ptri") result = cmd_ptri(ptri_f, ctx);
    else if (name == "variability") result = cmd_variability(var_f, ctx);
    else if (name == "resources") result = cmd_resources(res_f, ctx);
    else if (name == "report") result = cmd_report(report_f, ctx);
    write_run_manifest(sub, result);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qkl
