#include "qoplab/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "qoplab/harness/instance.hpp"
#include "qoplab/model_kernel.hpp"
#include "qoplab/qkernel.hpp"

namespace qoplab::harness {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) { return csv_number(v); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Assertion at_most(std::string name, double value, double bound) {
  return {std::move(name), value, "<= " + fmt(bound), value <= bound};
}

Assertion at_least(std::string name, double value, double bound) {
  return {std::move(name), value, ">= " + fmt(bound), value >= bound};
}

Assertion within(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, "in [" + fmt(lo) + ", " + fmt(hi) + "]", value >= lo && value <= hi};
}

Assertion failed(std::string name, const std::string& why) {
  return {std::move(name) + ": " + why, std::nan(""), "error", false};
}

std::string tag(int p) { return "p=" + std::to_string(p); }

struct PResult {
  PRecord record;
  std::vector<std::vector<std::string>> rows;
  std::vector<Assertion> assertions;
  std::vector<PlotSeries> plot;
};

GridFunction cos_test_function(const ManifoldModel& model) {
  return GridFunction::sample(model, [](const Position& x) { return std::cos(2.0 * kPi * x[0]); });
}

std::size_t pick_base_point(const ManifoldModel& model) {
  GridPoint c{0, 0, 0, 0};
  for (int a = 0; a < model.real_dim(); ++a) c[a] = (a % 2 == 0) ? model.grid() / 3 : model.grid() / 5;
  return model.index(c);
}

// ---------------------------------------------------------------------------
// Per-p bodies. Each receives a solved instance with a resolved gap.

void dim_body(const Instance& inst, const ExperimentConfig&, PResult& r) {
  const auto& g = *inst.gap;
  r.rows.push_back({std::to_string(inst.spec.p), std::to_string(inst.spec.grid),
                    std::to_string(r.record.expected_dim), std::to_string(g.bound_count),
                    num(g.low_cluster_width), num(g.next_eigenvalue)});
  r.assertions.push_back(within("dim " + tag(inst.spec.p) + " observed == expected",
                                static_cast<double>(g.bound_count),
                                static_cast<double>(r.record.expected_dim),
                                static_cast<double>(r.record.expected_dim)));
}

void gap_body(const Instance& inst, const ExperimentConfig& c, PResult& r) {
  const auto& g = *inst.gap;
  const int p = inst.spec.p;
  r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), r.record.solver, num(g.threshold),
                    num(g.lowest_eigenvalue), num(g.highest_bound), num(g.low_cluster_width),
                    num(g.next_eigenvalue), num(g.gap_ratio), num(inst.tau.mu0)});
  const double factor = c.tolerance("gap_next_factor", 1.5);
  r.assertions.push_back(at_least("gap " + tag(p) + " next eigenvalue / (mu0 p)",
                                  g.next_eigenvalue / (inst.tau.mu0 * p), factor));
  if (inst.model.is_flat()) {
    const double width = c.tolerance("gap_width", c.phi_amplitude == 0.0 ? 0.5 : 2.5);
    r.assertions.push_back(at_most("gap " + tag(p) + " cluster width", g.low_cluster_width, width));
  }
}

std::vector<int> rate_orders(const ManifoldModel& model) {
  return model.is_flat() ? std::vector<int>{0, 1, 2} : std::vector<int>{0};
}

void rate_body(const Instance& inst, const ExperimentConfig&, PResult& r) {
  const int p = inst.spec.p;
  const QOperator q = build_q(*inst.kernel, inst.model);
  const GridFunction f = cos_test_function(inst.model);
  const double lambda = std::exp(-kPi / p);
  for (int m : rate_orders(inst.model)) {
    const double err = rate_error(q, inst.model, f, m);
    // cos(2 pi x) has C^m norm (2 pi)^m and is an eigenfunction of Q.
    const double oracle = inst.model.is_flat() ? (1.0 - lambda) * std::pow(2.0 * kPi, m) : std::nan("");
    r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), std::to_string(m), "cos2pix",
                      num(err), num(oracle)});
    r.record.metrics["rate_error_m" + std::to_string(m)] = err;
  }
}

double interpolate_log_profile(const std::vector<ProfileBin>& bins, double d) {
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (bins[i].distance >= d) {
      const auto& a = bins[i - 1];
      const auto& b = bins[i];
      const double t = (d * d - a.distance * a.distance) /
                       (b.distance * b.distance - a.distance * a.distance);
      return std::exp((1.0 - t) * std::log(a.abs_P) + t * std::log(b.abs_P));
    }
  }
  throw Error("profile does not reach the requested distance");
}

void profile_body(const Instance& inst, const ExperimentConfig& c, PResult& r) {
  const int p = inst.spec.p;
  const auto& model = inst.model;
  const double pn = std::pow(static_cast<double>(p), model.complex_dim());
  const auto bins = offdiag_profile(*inst.kernel, model, 0, 1.0);
  PlotSeries series{tag(p), {}};
  for (const auto& b : bins) {
    const double oracle = pn * std::exp(-kPi * p * b.distance * b.distance / 2.0);
    r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), num(b.distance), num(b.abs_P),
                      num(oracle)});
    series.points.emplace_back(p * b.distance * b.distance, b.abs_P / pn);
  }
  r.plot.push_back(std::move(series));

  const double sp = std::sqrt(static_cast<double>(p));
  const LinearFit fit = fit_decay(bins, p, 1.0 / sp, 3.0 / sp);
  r.record.metrics["decay_slope"] = fit.slope;
  r.record.metrics["decay_r2"] = fit.r2;
  const double rel = c.tolerance("profile_slope", 0.15);
  r.assertions.push_back(within("profile " + tag(p) + " slope of log|P| vs p d^2", fit.slope,
                                -kPi / 2 * (1 + rel), -kPi / 2 * (1 - rel)));
  const double at_unit = interpolate_log_profile(bins, 1.0 / sp) / pn;
  r.record.metrics["abs_P_at_inv_sqrt_p"] = at_unit;
  const double tol = c.tolerance("profile_value", 0.02);
  r.assertions.push_back(within("profile " + tag(p) + " |P|/p^n at d=1/sqrt(p)", at_unit,
                                std::exp(-kPi / 2) - tol, std::exp(-kPi / 2) + tol));
}

void heat_body(const Instance& inst, const ExperimentConfig& c, PResult& r) {
  const int p = inst.spec.p;
  const QOperator q = build_q(*inst.kernel, inst.model);
  const MultiplierTable table = q_multipliers(q, inst.model, 3);
  double worst = 0.0;
  PlotSeries measured{tag(p) + " Q", {}}, heat{tag(p) + " heat", {}};
  for (std::size_t i = 0; i < table.frequencies.size(); ++i) {
    const GridPoint& k = table.frequencies[i];
    const double h = heat_multiplier(k, p);
    const double diff = std::abs(table.values[i] - h);
    worst = std::max(worst, diff);
    if (k[2] != 0 || k[3] != 0) continue;
    r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), std::to_string(k[0]),
                      std::to_string(k[1]), num(table.values[i]), num(h), num(diff)});
    const double k2 = static_cast<double>(k[0] * k[0] + k[1] * k[1]);
    measured.points.emplace_back(k2, table.values[i]);
    heat.points.emplace_back(k2, h);
  }
  std::sort(measured.points.begin(), measured.points.end());
  std::sort(heat.points.begin(), heat.points.end());
  r.plot.push_back(std::move(measured));
  r.plot.push_back(std::move(heat));
  r.record.metrics["multiplier_max_abs_diff"] = worst;
  r.record.metrics["multiplier_lambda_10"] = table.at({1, 0, 0, 0});
  r.record.metrics["translation_invariance_defect"] = table.invariance_defect;
  r.assertions.push_back(
      at_most("heat " + tag(p) + " max |lambda_k - exp(-pi|k|^2/p)|", worst, c.tolerance("heat", 2e-2)));
}

void gaussian_body(const Instance& inst, const ExperimentConfig& c, PResult& r) {
  const int p = inst.spec.p;
  const double radius = c.radius_scale / std::sqrt(static_cast<double>(p));
  const NormalFrame frame = make_normal_frame(inst.model, pick_base_point(inst.model));
  const NearDiagonalResult nd = near_diagonal_error(*inst.kernel, inst.model, frame, p, radius);
  r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), num(radius), num(nd.sup_error)});
  r.record.metrics["near_diagonal_sup_error"] = nd.sup_error;
  r.record.metrics["near_diagonal_magnitude_error"] = nd.magnitude_error;
  r.record.metrics["near_diagonal_pairs"] = static_cast<double>(nd.pairs);
  r.assertions.push_back(
      at_most("gaussian " + tag(p) + " near-diagonal sup error", nd.sup_error, c.tolerance("gaussian", 0.05)));
}

void invariants_body(const Instance& inst, const ExperimentConfig& c, PResult& r,
                     const EigenOptions& options) {
  const int p = inst.spec.p;
  const auto& model = inst.model;
  const ProjectorKernel& kernel = *inst.kernel;
  const auto check = [&](const std::string& name, double value, double bound) {
    const double b = c.tolerance(name, bound);
    r.rows.push_back({std::to_string(p), std::to_string(inst.spec.grid), name, num(value), num(b),
                      value <= b ? "1" : "0"});
    r.record.metrics[name] = value;
    r.assertions.push_back(at_most("invariants " + tag(p) + " " + name, value, b));
  };

  const ConnectionPhases phases = assemble_phases(model, p);
  check("prequantization", std::abs(check_prequantization(phases, model) - p), 0.0);
  check("operator_self_adjointness", inst.op.self_adjointness_defect(), 1e-12);
  check("eigen_residual", inst.decomp.max_relative_residual(inst.op), 1e-9);
  check("gram_defect", inst.decomp.gram_defect(), 1e-9);
  check("projector_idempotence", kernel.idempotence_residual(), 1e-9);
  check("projector_hermiticity", kernel.hermiticity_defect(), 1e-12);
  check("projector_trace", std::abs(kernel.weighted_trace() - static_cast<double>(kernel.dim())), 1e-9);

  const QOperator q = build_q(kernel, model);
  check("reproducing_identity", q.reproducing_defect(), 1e-9);
  if (model.is_flat()) {
    const GridFunction one = GridFunction::constant(model, 1.0);
    const GridFunction q1 = q.apply(one);
    double worst = 0.0;
    for (std::size_t x = 0; x < q1.size(); ++x) worst = std::max(worst, std::abs(q1[x] - 1.0));
    check("q_constant", worst, 1e-9);
  }
  {
    std::mt19937_64 rng(static_cast<std::uint64_t>(p) * 7919u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto random_fn = [&] {
      std::vector<std::complex<double>> v(model.size());
      for (auto& z : v) z = {u(rng), u(rng)};
      return GridFunction(model.shape(), std::move(v));
    };
    const GridFunction f = random_fn(), g = random_fn();
    const GridFunction qf = q.apply(f), qg = q.apply(g);
    std::complex<double> a = 0.0, b = 0.0;
    for (std::size_t x = 0; x < model.size(); ++x) {
      a += model.weight(x) * std::conj(qf[x]) * g[x];
      b += model.weight(x) * std::conj(f[x]) * qg[x];
    }
    check("q_self_adjoint", std::abs(a - b), 1e-10);

    std::vector<double> chi(model.size());
    for (auto& v : chi) v = kPi * u(rng);
    const ConnectionPhases gauged = gauge_transform(phases, chi);
    const HermitianOperator op2 =
        renormalize(assemble_bochner(model, gauged), inst.tau, p, make_potential(model, inst.spec));
    // bound states only: the first excited pair sits in a near-degenerate
    // cluster and is not part of the projector
    const SpectralDecomposition d2 = eigendecompose(op2, inst.gap->bound_count, options);
    double worst = 0.0;
    for (std::size_t i = 0; i < d2.count(); ++i) {
      const double scale = std::max(1.0, std::abs(inst.decomp.eigenvalues[i]));
      worst = std::max(worst, std::abs(d2.eigenvalues[i] - inst.decomp.eigenvalues[i]) / scale);
    }
    check("gauge_invariance", worst, 1e-9);
  }
  {
    const ModelKernelSpec spec = ModelKernelSpec::isotropic(model.complex_dim());
    std::vector<double> z(static_cast<std::size_t>(model.real_dim())), zp(z.size());
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (auto& v : z) v = u(rng);
    for (auto& v : zp) v = u(rng);
    check("model_reproducing", model_reproducing_residual(spec, z, zp, 8.0 / std::sqrt(2.0 * kPi), 161),
          1e-6);
  }
}

// ---------------------------------------------------------------------------

PResult run_one(const ExperimentConfig& c, int p, const EigenCache* cache, const EigenOptions& options) {
  PResult r;
  const InstanceSpec spec = c.instance(p);
  r.record.p = p;
  r.record.grid = spec.grid;
  try {
    const Instance inst = solve_instance(spec, cache, options);
    r.record.solver = std::string(to_string(inst.decomp.path));
    r.record.cache_hit = inst.cache_hit;
    r.record.expected_dim = expected_dim(inst.model, p);
    if (inst.gap) {
      r.record.observed_dim = static_cast<long long>(inst.gap->bound_count);
      r.record.cluster_width = inst.gap->low_cluster_width;
      r.record.next_eigenvalue = inst.gap->next_eigenvalue;
    } else {
      r.record.error = inst.gap_error;
      r.assertions.push_back(failed(std::string(to_string(c.experiment)) + " " + tag(p), inst.gap_error));
      if (c.experiment == ExperimentKind::kDim) {
        const double threshold = inst.tau.mu0 * p;
        const auto below = std::count_if(inst.decomp.eigenvalues.begin(), inst.decomp.eigenvalues.end(),
                                         [&](double v) { return v < threshold; });
        r.rows.push_back({std::to_string(p), std::to_string(spec.grid),
                          std::to_string(r.record.expected_dim), std::to_string(below), "nan", "nan"});
      }
      r.record.seconds = inst.seconds;
      return r;
    }
    switch (c.experiment) {
      case ExperimentKind::kDim: dim_body(inst, c, r); break;
      case ExperimentKind::kGap: gap_body(inst, c, r); break;
      case ExperimentKind::kRate: rate_body(inst, c, r); break;
      case ExperimentKind::kProfile: profile_body(inst, c, r); break;
      case ExperimentKind::kGaussian: gaussian_body(inst, c, r); break;
      case ExperimentKind::kHeat: heat_body(inst, c, r); break;
      case ExperimentKind::kInvariants: invariants_body(inst, c, r, options); break;
    }
    r.record.seconds = inst.seconds;
  } catch (const Error& e) {
    r.record.error = e.what();
    r.assertions.push_back(failed(std::string(to_string(c.experiment)) + " " + tag(p), e.what()));
  }
  return r;
}

void finalize(const ExperimentConfig& c, RunReport& report) {
  if (c.experiment == ExperimentKind::kRate) {
    const bool flat = c.model != ModelKind::kConformalTorus2;
    for (int m : flat ? std::vector<int>{0, 1, 2} : std::vector<int>{0}) {
      const std::string key = "rate_error_m" + std::to_string(m);
      std::vector<std::pair<double, double>> pts;
      for (const auto& rec : report.records) {
        const auto it = rec.metrics.find(key);
        if (it != rec.metrics.end()) pts.emplace_back(rec.p, it->second);
      }
      if (pts.size() < 3) continue;
      try {
        const LinearFit fit = fit_loglog_slope(pts);
        report.fits.push_back({"rate_slope_m" + std::to_string(m), fit, pts.size()});
        report.assertions.push_back(within("rate slope m=" + std::to_string(m), fit.slope,
                                           c.tolerance("rate_slope_lo", -1.15),
                                           c.tolerance("rate_slope_hi", -0.85)));
      } catch (const Error& e) {
        report.assertions.push_back(failed("rate slope m=" + std::to_string(m), e.what()));
      }
    }
    if (flat) {
      const double rel = c.tolerance("rate_constant", 0.15);
      for (const auto& rec : report.records) {
        const auto it = rec.metrics.find("rate_error_m0");
        if (rec.p < 16 || it == rec.metrics.end()) continue;
        report.assertions.push_back(within("rate p*error/pi " + tag(rec.p), rec.p * it->second / kPi,
                                           1.0 - rel, 1.0 + rel));
      }
    }
  }
  if (c.experiment == ExperimentKind::kGap && c.phi_amplitude != 0.0 &&
      c.model != ModelKind::kConformalTorus2) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& rec : report.records) {
      if (!rec.cluster_width) continue;
      lo = std::min(lo, *rec.cluster_width);
      hi = std::max(hi, *rec.cluster_width);
    }
    if (hi > 0.0 && report.records.size() >= 2) {
      report.assertions.push_back(
          at_most("gap cluster width spread max/min", hi / lo, c.tolerance("gap_width_spread", 2.0)));
    }
  }
}

void emit_plot(const ExperimentConfig& c, const RunReport& report,
               const std::vector<PlotSeries>& extra, const std::filesystem::path& path) {
  std::vector<PlotSeries> series;
  PlotSpec spec;
  const auto metric_series = [&](const std::string& name, const std::string& key) {
    PlotSeries s{name, {}};
    for (const auto& rec : report.records) {
      const auto it = rec.metrics.find(key);
      if (it != rec.metrics.end()) s.points.emplace_back(rec.p, it->second);
    }
    return s;
  };
  switch (c.experiment) {
    case ExperimentKind::kDim: {
      spec = {"bound-state count", "p", "dimension", false, false};
      PlotSeries obs{"observed", {}}, exp{"expected", {}};
      for (const auto& rec : report.records) {
        if (rec.observed_dim) obs.points.emplace_back(rec.p, static_cast<double>(*rec.observed_dim));
        exp.points.emplace_back(rec.p, static_cast<double>(rec.expected_dim));
      }
      series = {obs, exp};
      break;
    }
    case ExperimentKind::kGap: {
      spec = {"low cluster and first excited level", "p", "eigenvalue", false, false};
      PlotSeries next{"next eigenvalue", {}}, width{"cluster width", {}};
      for (const auto& rec : report.records) {
        if (rec.next_eigenvalue) next.points.emplace_back(rec.p, *rec.next_eigenvalue);
        if (rec.cluster_width) width.points.emplace_back(rec.p, *rec.cluster_width);
      }
      series = {next, width};
      break;
    }
    case ExperimentKind::kRate:
      spec = {"||Qf - f||_{C^m}, f = cos 2 pi x", "p", "error", true, true};
      for (int m = 0; m <= 2; ++m) {
        auto s = metric_series("m=" + std::to_string(m), "rate_error_m" + std::to_string(m));
        if (!s.points.empty()) series.push_back(std::move(s));
      }
      break;
    case ExperimentKind::kProfile: {
      spec = {"off-diagonal decay", "p d^2", "|P| / p^n", false, true};
      series = extra;
      PlotSeries oracle{"exp(-pi p d^2 / 2)", {}};
      for (int i = 0; i <= 40; ++i) oracle.points.emplace_back(0.25 * i, std::exp(-kPi * 0.25 * i / 2.0));
      series.push_back(std::move(oracle));
      break;
    }
    case ExperimentKind::kHeat:
      spec = {"Q multipliers against the heat semigroup", "|k|^2", "lambda", false, true};
      series = extra;
      break;
    case ExperimentKind::kGaussian:
      spec = {"near-diagonal error", "p", "sup error", true, true};
      series = {metric_series("sup error", "near_diagonal_sup_error")};
      break;
    case ExperimentKind::kInvariants:
      return;
  }
  write_svg_plot(spec, series, path);
}

}  // namespace

std::vector<std::string> csv_header(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDim:
      return {"p", "N", "expected_dim", "observed_dim", "cluster_width", "next_eigenvalue"};
    case ExperimentKind::kGap:
      return {"p", "N", "solver", "threshold", "lowest_eigenvalue", "highest_bound",
              "cluster_width", "next_eigenvalue", "gap_ratio", "mu0"};
    case ExperimentKind::kRate:
      return {"p", "N", "m", "test_function", "error", "oracle_error"};
    case ExperimentKind::kProfile:
      return {"p", "N", "distance", "abs_P", "oracle_abs_P"};
    case ExperimentKind::kGaussian:
      return {"p", "N", "radius", "sup_error"};
    case ExperimentKind::kHeat:
      return {"p", "N", "k1", "k2", "lambda", "heat_lambda", "abs_diff"};
    case ExperimentKind::kInvariants:
      return {"p", "N", "check", "value", "bound", "pass"};
  }
  return {};
}

namespace {

struct Collected {
  RunOutput output;
  std::vector<PlotSeries> plot;
};

Collected execute(const ExperimentConfig& config, std::ostream* log, const EigenOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::optional<EigenCache> cache;
  if (config.cache) {
    try {
      cache.emplace(*config.cache);
    } catch (const Error& e) {
      throw IoError(e.what());
    }
  }

  std::vector<PResult> results(config.p.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      results[i] = run_one(config, config.p[i], cache ? &*cache : nullptr, options);
      if (log) {
        std::lock_guard lock(log_mutex);
        const auto& rec = results[i].record;
        *log << to_string(config.experiment) << " p=" << rec.p << " N=" << rec.grid << " "
             << rec.solver << (rec.cache_hit ? " (cached)" : "") << " " << fmt(rec.seconds) << "s"
             << (rec.error.empty() ? "" : " error: " + rec.error) << "\n";
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t jobs =
      std::min<std::size_t>(results.size(), config.jobs > 0 ? static_cast<std::size_t>(config.jobs) : hw);
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  Collected out;
  RunReport& report = out.output.report;
  report.experiment = std::string(to_string(config.experiment));
  report.config_hash = config.hash();
  out.output.table.header = csv_header(config.experiment);
  for (auto& r : results) {
    report.records.push_back(std::move(r.record));
    for (auto& row : r.rows) out.output.table.rows.push_back(std::move(row));
    for (auto& a : r.assertions) report.assertions.push_back(std::move(a));
    for (auto& s : r.plot) out.plot.push_back(std::move(s));
  }
  finalize(config, report);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

RunOutput execute_experiment(const ExperimentConfig& config, std::ostream* log,
                             const EigenOptions& options) {
  return execute(config, log, options).output;
}

RunReport run_experiment(const ExperimentConfig& config, std::ostream* log, const EigenOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out)) {
    throw IoError("cannot create output directory " + config.out.string());
  }
  // Probe writability before spending time on eigensolves.
  const auto probe = config.out / ".qoplab-write-probe";
  {
    std::ofstream test(probe);
    if (!test) throw IoError("output directory not writable: " + config.out.string());
  }
  std::filesystem::remove(probe, ec);

  Collected collected = execute(config, log, options);
  const std::string stem = std::string(to_string(config.experiment));
  write_csv(collected.output.table, config.out / (stem + ".csv"));
  write_report_json(collected.output.report, config.out / (stem + ".json"));
  if (config.svg) emit_plot(config, collected.output.report, collected.plot, config.out / (stem + ".svg"));
  return std::move(collected.output.report);
}

}  // namespace qoplab::harness
