// qoplab <experiment> [--config file] [flags]
//
// Exit status: 0 all assertions pass, 1 an assertion failed, 2 bad
// configuration or unwritable output.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qoplab/harness/config.hpp"
#include "qoplab/harness/experiments.hpp"

namespace h = qoplab::harness;

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on Toeplitz-type averaging operators of Landau projectors"};
  app.set_version_flag("--version", "qoplab 0.1.0");

  std::string experiment;
  std::string config_path;
  std::map<std::string, std::string> flags;
  std::string p, model, grid, phi, lambda, omega, out, cache, radius;
  int jobs = -1;
  bool no_cache = false, svg = false;
  std::vector<std::string> tolerances;

  app.add_option("experiment", experiment, "dim | gap | rate | profile | gaussian | heat | invariants")
      ->required();
  app.add_option("--config", config_path, "flat key = value file; flags override it");
  app.add_option("--p", p, "flux list, e.g. 8,16,32 or 2..24");
  app.add_option("--model", model, "flat-torus-2 | flat-torus-4 | conformal-torus-2");
  app.add_option("--grid", grid, "auto | N");
  app.add_option("--phi", phi, "zero | cosine:<amp>");
  app.add_option("--lambda", lambda, "one | cosine:<amp> (conformal model)");
  app.add_option("--omega", omega, "coordinate | metric (conformal model)");
  app.add_option("--out", out, "output directory");
  app.add_option("--cache", cache, "eigendecomposition cache directory");
  app.add_flag("--no-cache", no_cache, "disable the cache");
  app.add_option("--radius", radius, "near-diagonal radius in units of 1/sqrt(p)");
  app.add_option("--jobs", jobs, "parallel p workers (0 = all cores)");
  app.add_flag("--svg", svg, "also write an SVG plot");
  app.add_option("--tol", tolerances, "tolerance override name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::map<std::string, std::string> file_settings;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw h::ConfigError("cannot read config file " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      file_settings = h::parse_key_values(ss.str());
    }
    flags["experiment"] = experiment;
    const auto set = [&](const char* key, const std::string& v) {
      if (!v.empty()) flags[key] = v;
    };
    set("p", p);
    set("model", model);
    set("grid", grid);
    set("phi", phi);
    set("lambda", lambda);
    set("omega", omega);
    set("out", out);
    set("cache", cache);
    set("radius", radius);
    if (jobs >= 0) flags["jobs"] = std::to_string(jobs);
    if (no_cache) flags["no-cache"] = "true";
    if (svg) flags["svg"] = "true";
    for (const auto& t : tolerances) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw h::ConfigError("--tol expects name=value, got '" + t + "'");
      flags["tol." + t.substr(0, eq)] = t.substr(eq + 1);
    }

    const h::ExperimentConfig config = h::make_config(file_settings, flags);
    const h::RunReport report = h::run_experiment(config, &std::cerr);

    for (const auto& a : report.assertions) {
      std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << " = " << a.value << " (" << a.relation
                << ")\n";
    }
    for (const auto& f : report.fits) {
      std::cout << "fit " << f.name << ": slope " << f.fit.slope << ", r2 " << f.fit.r2 << "\n";
    }
    std::cout << (report.passed() ? "all assertions passed" : "assertion failures") << " ["
              << report.wall_seconds << " s, results in " << config.out.string() << "]\n";
    return report.passed() ? 0 : 1;
  } catch (const h::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const h::IoError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
