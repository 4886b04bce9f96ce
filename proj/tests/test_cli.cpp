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
#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "qkl/cli.hpp"
#include "qkl/manifest.hpp"
#include "qkl/serialization.hpp"

using namespace qkl;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::initializer_list<std::string> args) {
  const std::vector<std::string> v(args);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(v, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qkl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ingest synthetic and csv files") {
    const fs::path dir = scratch("ingest");
    const CliRun r = run({"ingest", "--synthetic", "1", "--emit-csv", s(dir / "csv"), "--out",
                          s(dir / "ds.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("rows=459") != std::string::npos);
    CHECK(r.out.find("features=7") != std::string::npos);
    CHECK(fs::exists(manifest_path(dir / "ds.json")));

    const CliRun files = run({"ingest", "--index", s(dir / "csv" / "index.csv"), "--gold",
                              s(dir / "csv" / "gold.csv"), "--out", s(dir / "ds2.json")});
    REQUIRE(files.code == 0);
    CHECK(files.out == r.out);

    const CliRun missing = run({"ingest", "--index", s(dir / "csv" / "index.csv"), "--gold",
                                s(dir / "nope.csv"), "--out", s(dir / "ds3.json")});
    CHECK(missing.code != 0);
    CHECK(missing.err.find("file not found") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "ds3.json"));

    const CliRun both = run({"ingest", "--synthetic", "1", "--separable", "2", "--out", s(dir / "x.json")});
    CHECK(both.code != 0);
  }

  TEST_CASE("kernel subcommand") {
    const fs::path dir = scratch("kernel");
    REQUIRE(run({"ingest", "--synthetic", "3", "--out", s(dir / "ds.json")}).code == 0);
    const CliRun k = run({"kernel", "--dataset", s(dir / "ds.json"), "--map", "yyy", "--size", "8",
                          "--out", s(dir / "k.json")});
    REQUIRE(k.code == 0);
    CHECK(k.out.find("shape=8x8 symmetric") != std::string::npos);
    std::istringstream in(read_file(dir / "k.json"));
    const GramMatrix g = read_kernel(in);
    REQUIRE(g.rows() == 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      CHECK(std::abs(g(i, i) - 1.0) <= 1e-12);
      for (Eigen::Index j = 0; j < 8; ++j) CHECK(g(i, j) == g(j, i));
    }

    const CliRun again = run({"kernel", "--dataset", s(dir / "ds.json"), "--map", "yyy", "--size", "8",
                              "--threads", "3", "--out", s(dir / "k2.json")});
    REQUIRE(again.code == 0);
    CHECK(read_file(dir / "k.json") == read_file(dir / "k2.json"));

    const CliRun cap = run({"kernel", "--dataset", s(dir / "ds.json"), "--mode", "shots", "--shots",
                            "2000", "--size", "4", "--out", s(dir / "k3.json")});
    CHECK(cap.code != 0);
    CHECK(cap.err.find("1024") != std::string::npos);
    CHECK(run({"kernel", "--dataset", s(dir / "ds.json"), "--mode", "shots", "--shots", "2000",
               "--allow-overshoot", "--size", "4", "--out", s(dir / "k4.json")})
              .code == 0);

    const CliRun bad = run({"kernel", "--dataset", s(dir / "ds.json"), "--map", "xyz", "--out",
                            s(dir / "k5.json")});
    CHECK(bad.code != 0);
  }

  TEST_CASE("train, sweep, ptri, variability, report") {
    const fs::path dir = scratch("pipeline");
    REQUIRE(run({"ingest", "--synthetic", "5", "--out", s(dir / "ds.json")}).code == 0);

    const CliRun t = run({"train", "--dataset", s(dir / "ds.json"), "--map", "zz", "--features", "3",
                          "--size", "60", "--out", s(dir / "m.json")});
    REQUIRE(t.code == 0);
    CHECK(t.out.find("test_balanced_accuracy=") != std::string::npos);
    std::istringstream min(read_file(dir / "m.json"));
    CHECK(read_model(min).train_ids.size() == 42);

    const CliRun sw = run({"sweep", "--dataset", s(dir / "ds.json"), "--kernels", "z,rbf", "--features",
                           "2,3", "--sizes", "40,50", "--trials", "2", "--seed", "9", "--out",
                           s(dir / "sweep.json"), "--table", s(dir / "sweep.csv")});
    REQUIRE(sw.code == 0);
    CHECK(sw.out.find("EQA z - rbf") != std::string::npos);
    std::istringstream sin(read_file(dir / "sweep.json"));
    const SweepResult sr = read_sweep(sin);
    CHECK(sr.cells.size() == 8);
    CHECK(sr.trials == 2);

    const CliRun p = run({"ptri", "--sweep", s(dir / "sweep.json"), "--out", s(dir / "ptri.json"),
                          "--table", s(dir / "ptri.csv")});
    REQUIRE(p.code == 0);
    CHECK(p.out.find("PTRI z") != std::string::npos);
    CHECK(p.out.find("PTRI rbf") != std::string::npos);

    const CliRun v = run({"variability", "--dataset", s(dir / "ds.json"), "--features", "2", "--size",
                          "40", "--trials", "4", "--map", "rbf", "--out", s(dir / "var.json"),
                          "--histogram", s(dir / "hist.csv")});
    REQUIRE(v.code == 0);
    CHECK(v.out.find("trials=4") != std::string::npos);
    CHECK(read_file(dir / "hist.csv").rfind("lower,upper,count\n", 0) == 0);

    const CliRun rep = run({"report", "--in", s(dir / "sweep.json"), "--out", s(dir / "flat.csv")});
    REQUIRE(rep.code == 0);
    CHECK(read_file(dir / "flat.csv") == read_file(dir / "sweep.csv"));
  }

  TEST_CASE("ptri on a constant sweep is zero") {
    const fs::path dir = scratch("flat");
    SweepResult sr;
    sr.trials = 2;
    sr.kernels = {KernelConfig::rbf()};
    for (int f : {5, 6})
      for (std::size_t n : {200u, 300u}) {
        sr.configs.push_back({f, n});
        sr.cells.push_back({{f, n}, "rbf", {{0, 1, 1, 0.7, 0.6}, {1, 2, 2, 0.7, 0.6}}, {0.7, 0.0}, {0.6, 0.0}});
      }
    std::ostringstream os;
    write_sweep(os, sr);
    write_file(dir / "sweep.json", os.str());
    REQUIRE(run({"ptri", "--sweep", s(dir / "sweep.json"), "--out", s(dir / "p.json")}).code == 0);
    std::istringstream in(read_file(dir / "p.json"));
    const auto grids = read_ptri(in);
    REQUIRE(grids.size() == 1);
    CHECK(grids[0].scores.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("resources verify") {
    const CliRun r = run({"resources", "--features", "4", "--reps", "1", "--verify"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\t37\t19\t") != std::string::npos);
    CHECK(r.out.find("match=true") != std::string::npos);
    const CliRun range = run({"resources", "--features", "2-10", "--reps", "1-3", "--verify"});
    REQUIRE(range.code == 0);
    CHECK(range.out.find("match=false") == std::string::npos);
    CHECK(run({"resources", "--features", "1"}).code != 0);
  }

  TEST_CASE("replay reproduces outputs at any thread count") {
    const fs::path dir = scratch("replay");
    REQUIRE(run({"ingest", "--synthetic", "7", "--out", s(dir / "ds.json")}).code == 0);
    REQUIRE(run({"--threads", "1", "sweep", "--dataset", s(dir / "ds.json"), "--kernels", "yyy,rbf",
                 "--features", "2,3", "--sizes", "30,40", "--trials", "2", "--seed", "11",
                 "--mode", "shots", "--shots", "64", "--out", s(dir / "a.json")})
                .code == 0);
    const CliRun r = run({"--threads", "4", "--replay", s(manifest_path(dir / "a.json")), "--out",
                          s(dir / "b.json")});
    REQUIRE(r.code == 0);
    CHECK(read_file(dir / "a.json") == read_file(dir / "b.json"));

    std::istringstream ma(read_file(manifest_path(dir / "a.json")));
    std::istringstream mb(read_file(manifest_path(dir / "b.json")));
    const RunManifest a = read_manifest(ma);
    const RunManifest b = read_manifest(mb);
    CHECK(a.master_seed == 11);
    CHECK(a.outputs.front().sha256 == b.outputs.front().sha256);

    write_file(dir / "ds.json", read_file(dir / "ds.json") + " ");
    const CliRun stale = run({"--replay", s(manifest_path(dir / "a.json")), "--out", s(dir / "c.json")});
    CHECK(stale.code != 0);
    CHECK(stale.err.find("changed") != std::string::npos);

    CHECK(run({"--out", s(dir / "d.json")}).code != 0);
  }
}
