#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "qoplab/harness/cache.hpp"
#include "qoplab/harness/config.hpp"
#include "qoplab/harness/experiments.hpp"
#include "qoplab/harness/instance.hpp"
#include "support.hpp"

using namespace qoplab;
using namespace qoplab::harness;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("qoplab-unit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig dim_config(const fs::path& out) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kDim;
  c.p = {2, 3, 5};
  c.out = out;
  c.jobs = 1;
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config parsing and precedence") {
    const auto file = parse_key_values(R"(
# sweep
experiment = rate
p = 2..4, 8
model = flat-torus-2
grid = 32
phi = cosine:0.5
tol.rate_slope_low = -1.2
)");
    const auto c = make_config(file, {{"grid", "auto"}, {"out", "elsewhere"}});
    CHECK(c.experiment == ExperimentKind::kRate);
    CHECK(c.p == std::vector<int>{2, 3, 4, 8});
    CHECK_FALSE(c.grid.fixed.has_value());
    CHECK(c.phi_amplitude == 0.5);
    CHECK(c.out == fs::path("elsewhere"));
    CHECK(c.tolerance("rate_slope_low", 0.0) == -1.2);
    CHECK(c.tolerance("missing", 7.0) == 7.0);

    const auto nc = make_config({{"p", "2"}, {"cache", "/tmp/x"}}, {{"no-cache", "true"}});
    CHECK_FALSE(nc.cache.has_value());
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_WITH_AS(make_config({{"p", ""}}, {}), doctest::Contains("p list must not be empty"), ConfigError);
    CHECK_THROWS_AS(make_config({}, {}), ConfigError);
    CHECK_THROWS_WITH_AS(make_config({{"p", "4,2"}}, {}), doctest::Contains("strictly ascending"), ConfigError);
    CHECK_THROWS_WITH_AS(make_config({{"p", "2"}, {"colour", "red"}}, {}), doctest::Contains("unknown config key"),
                         ConfigError);
    CHECK_THROWS_AS(make_config({{"p", "2"}, {"grid", "3"}}, {}), ConfigError);
    CHECK_THROWS_AS(make_config({{"p", "2"}, {"phi", "cosine:1.5"}}, {}), ConfigError);
    CHECK_THROWS_AS(make_config({{"p", "2"}, {"lambda", "cosine:0.2"}}, {}), ConfigError);
    CHECK_THROWS_AS(make_config({{"p", "2"}, {"model", "klein-bottle"}}, {}), ConfigError);
    CHECK_THROWS_AS(make_config({{"p", "two"}}, {}), ConfigError);
    CHECK_THROWS_AS(parse_key_values("just words"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("spectrum"), ConfigError);
  }

  TEST_CASE("instance hash is canonical") {
    InstanceSpec a;
    a.grid = 32;
    a.p = 8;
    InstanceSpec b = a;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.phi_amplitude = 0.25;
    CHECK(a.hash() != b.hash());
    b = a;
    b.grid = 40;
    CHECK(a.hash() != b.hash());

    // key order in the input does not matter
    const auto c1 = make_config({{"p", "2,4"}, {"grid", "16"}, {"phi", "cosine:0.1"}}, {});
    const auto c2 = make_config(parse_key_values("phi = cosine:0.1\ngrid = 16\np = 2, 4\n"), {});
    CHECK(c1.hash() == c2.hash());
    CHECK(c1.instance(4).hash() == c2.instance(4).hash());
  }

  TEST_CASE("grid policy") {
    GridPolicy g;
    CHECK(g.resolve(4) == 16);
    CHECK(g.resolve(16) == 32);
    CHECK(g.resolve(17) == 40);
    CHECK(g.resolve(64) == 64);
    g.fixed = 24;
    CHECK(g.resolve(64) == 24);
  }

  TEST_CASE("eigen cache round trip and failure modes") {
    TempDir dir;
    const auto inst = testing::flat_instance(3, 16);
    const std::string key = inst.spec.hash();
    std::vector<std::string> warnings;
    const EigenCache cache(dir.path, kCacheFormatVersion, [&](const std::string& m) { warnings.push_back(m); });
    const auto& shape = inst.model.shape();
    const auto w = inst.model.weights();

    CHECK_FALSE(cache.get(key, shape, w).has_value());
    cache.put(key, inst.decomp);
    CHECK(fs::exists(cache.entry_path(key)));
    CHECK_FALSE(fs::exists(cache.entry_path(key).string() + ".lock"));
    const auto back = cache.get(key, shape, w);
    REQUIRE(back);
    CHECK(back->eigenvalues == inst.decomp.eigenvalues);
    CHECK(back->eigenvectors == inst.decomp.eigenvectors);
    CHECK(warnings.empty());

    // a newer format version ignores the entry silently
    const EigenCache newer(dir.path, kCacheFormatVersion + 1, [&](const std::string& m) { warnings.push_back(m); });
    CHECK_FALSE(newer.get(key, shape, w).has_value());
    CHECK(warnings.empty());

    // truncation
    const auto path = cache.entry_path(key);
    const auto full = fs::file_size(path);
    fs::resize_file(path, full / 2);
    CHECK_FALSE(cache.get(key, shape, w).has_value());
    CHECK(warnings.size() == 1);

    // bad magic
    cache.put(key, inst.decomp);
    {
      std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
      f.write("XXXX", 4);
    }
    CHECK_FALSE(cache.get(key, shape, w).has_value());
    CHECK(warnings.size() == 2);
  }

  TEST_CASE("solve_instance reuses the cache") {
    TempDir dir;
    const EigenCache cache(dir.path);
    InstanceSpec spec;
    spec.grid = 16;
    spec.p = 4;
    const auto cold = solve_instance(spec, &cache);
    const auto warm = solve_instance(spec, &cache);
    CHECK_FALSE(cold.cache_hit);
    CHECK(warm.cache_hit);
    CHECK(cold.decomp.eigenvalues == warm.decomp.eigenvalues);
    REQUIRE(warm.gap);
    CHECK(warm.gap->bound_count == 4);
  }

  TEST_CASE("output is deterministic and cache-independent") {
    TempDir dir;
    auto c = dim_config(dir.path / "cold");
    c.cache = dir.path / "cache";
    const auto cold = run_experiment(c);
    c.out = dir.path / "warm";
    const auto warm = run_experiment(c);
    CHECK(cold.passed());
    CHECK(warm.passed());
    for (const auto& r : warm.records) CHECK(r.cache_hit);
    c.cache.reset();
    c.out = dir.path / "none";
    run_experiment(c);
    const auto a = slurp(dir.path / "cold" / "dim.csv");
    CHECK(a.rfind("p,N,expected_dim,observed_dim,cluster_width,next_eigenvalue\n", 0) == 0);
    CHECK(a == slurp(dir.path / "warm" / "dim.csv"));
    CHECK(a == slurp(dir.path / "none" / "dim.csv"));
    CHECK(fs::exists(dir.path / "cold" / "dim.json"));
  }

  TEST_CASE("unwritable output raises IoError") {
    TempDir dir;
    {
      std::ofstream blocker(dir.path / "blocker");
      blocker << "x";
    }
    auto c = dim_config(dir.path / "blocker" / "out");
    CHECK_THROWS_AS(run_experiment(c), IoError);
  }

  TEST_CASE("a failing p is recorded and the sweep continues") {
    auto c = dim_config("unused");
    c.p = {2, 64};
    c.grid.fixed = 16;
    const auto out = execute_experiment(c);
    REQUIRE(out.report.records.size() == 2);
    CHECK(out.report.records[0].error.empty());
    CHECK(out.report.records[0].observed_dim == 2);
    CHECK(out.report.records[1].error.find("no spectral gap resolved") != std::string::npos);
    CHECK_FALSE(out.report.passed());
  }

  TEST_CASE("csv headers") {
    CHECK(csv_header(ExperimentKind::kRate) ==
          std::vector<std::string>{"p", "N", "m", "test_function", "error", "oracle_error"});
    CHECK(csv_header(ExperimentKind::kProfile) ==
          std::vector<std::string>{"p", "N", "distance", "abs_P", "oracle_abs_P"});
    CHECK(csv_header(ExperimentKind::kHeat) ==
          std::vector<std::string>{"p", "N", "k1", "k2", "lambda", "heat_lambda", "abs_diff"});
    CHECK(csv_header(ExperimentKind::kGaussian) == std::vector<std::string>{"p", "N", "radius", "sup_error"});
    CHECK(csv_number(0.1) == "0.10000000000000001");
  }
}
