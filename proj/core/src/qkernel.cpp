#include "qoplab/qkernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qoplab/error.hpp"

namespace qoplab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

QOperator::QOperator(ProjectorKernel kernel, double total_volume)
    : kernel_(std::move(kernel)), volume_(total_volume) {
  if (!(volume_ > 0.0)) throw Error("Q operator needs a positive volume");
  if (kernel_.dim() == 0) throw Error("Q operator needs a nonempty bound-state space");
  r_p_ = static_cast<double>(kernel_.dim()) / volume_;
}

Eigen::VectorXd QOperator::row(std::size_t x) const { return kernel_.row(x).cwiseAbs2(); }

Eigen::MatrixXd QOperator::dense() const { return kernel_.dense().cwiseAbs2(); }

GridFunction QOperator::apply(const GridFunction& f) const {
  if (!(f.shape() == shape())) throw Error("grid mismatch");
  // sum_y w_y f_y |P(x,y)|^2 = (V M V^*)_{xx} with M = V^* diag(w f) V.
  const Eigen::MatrixXcd& v = kernel_.vectors();
  const auto w = kernel_.weights();
  Eigen::VectorXcd wf(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) wf[static_cast<Eigen::Index>(i)] = w[i] * f[i];
  const Eigen::MatrixXcd m = v.adjoint() * wf.asDiagonal() * v;
  const Eigen::MatrixXcd t = v * m;
  const Eigen::VectorXcd diag = t.cwiseProduct(v.conjugate()).rowwise().sum();
  std::vector<std::complex<double>> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = diag[static_cast<Eigen::Index>(i)] / r_p_;
  return GridFunction(shape(), std::move(out));
}

double QOperator::reproducing_defect() const {
  const GridFunction one(shape(), std::vector<std::complex<double>>(size(), 1.0));
  const GridFunction q1 = apply(one);
  double worst = 0.0;
  for (std::size_t x = 0; x < size(); ++x) {
    worst = std::max(worst, std::abs(q1[x] * r_p_ - kernel_.diagonal(x)));
  }
  return worst;
}

QOperator build_q(const ProjectorKernel& kernel, const ManifoldModel& model) {
  if (!(kernel.shape() == model.shape())) throw Error("grid mismatch");
  return QOperator(kernel, model.total_volume());
}

GridFunction apply_q(const QOperator& q, const GridFunction& f) { return q.apply(f); }

// ---------------------------------------------------------------------------

double MultiplierTable::at(const GridPoint& k) const {
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (frequencies[i] == k) return values[i];
  }
  throw Error("frequency not in multiplier table");
}

MultiplierTable q_multipliers(const QOperator& q, const ManifoldModel& model, int kmax) {
  if (!model.is_flat()) throw Error("multiplier analysis requires flat model");
  if (!(q.shape() == model.shape())) throw Error("grid mismatch");
  const int n_grid = model.grid();
  if (kmax < 0 || 2 * kmax >= n_grid) throw Error("kmax must lie in [0, N/2)");
  const int dim = model.real_dim();

  // lambda_k = sum_y w_y K(0,y) e^{2 pi i k.y} / R_p, i.e. the coefficient at -k.
  const Eigen::VectorXd profile = q.row(0);
  std::vector<std::complex<double>> samples(model.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = profile[static_cast<Eigen::Index>(i)] / q.R_p();
  }
  const auto coeffs = fourier_coefficients(model, GridFunction(model.shape(), std::move(samples)));

  MultiplierTable table;
  const int side = 2 * kmax + 1;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(side);
  for (std::size_t idx = 0; idx < total; ++idx) {
    GridPoint k{0, 0, 0, 0};
    std::size_t r = idx;
    for (int a = 0; a < dim; ++a) {
      k[a] = static_cast<int>(r % static_cast<std::size_t>(side)) - kmax;
      r /= static_cast<std::size_t>(side);
    }
    GridPoint minus_k{-k[0], -k[1], -k[2], -k[3]};
    table.frequencies.push_back(k);
    table.values.push_back(coeffs.at(minus_k).real());
  }

  // Direct check on two modes: for a translation-invariant K the plane
  // waves are exact eigenfunctions.
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::size_t> pick(0, table.frequencies.size() - 1);
  for (int trial = 0; trial < 2; ++trial) {
    const std::size_t i = pick(rng);
    const GridPoint k = table.frequencies[i];
    const GridFunction mode = GridFunction::sample(model, [&](const Position& x) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
      return std::polar(1.0, kTwoPi * phase);
    });
    const GridFunction image = q.apply(mode);
    for (std::size_t x = 0; x < mode.size(); ++x) {
      table.invariance_defect =
          std::max(table.invariance_defect, std::abs(image[x] - table.values[i] * mode[x]));
    }
  }
  if (table.invariance_defect > 1e-6) throw Error("kernel not translation invariant");
  return table;
}

double heat_multiplier(const GridPoint& k, double p) {
  if (!(p > 0.0)) throw Error("flux must be positive");
  double k2 = 0.0;
  for (int v : k) k2 += static_cast<double>(v) * v;
  return std::exp(-std::numbers::pi * k2 / p);
}

// ---------------------------------------------------------------------------

std::vector<ProfileBin> offdiag_profile(const ProjectorKernel& kernel, const ManifoldModel& model,
                                        std::size_t x0, double max_distance) {
  if (!model.is_flat()) throw Error("off-diagonal profile requires flat model");
  if (!(kernel.shape() == model.shape())) throw Error("grid mismatch");
  if (x0 >= model.size()) throw Error("base point outside grid");
  const GridShape& shape = model.shape();
  const double n_grid = shape.grid;
  const Eigen::VectorXcd row = kernel.row(x0);

  struct Acc {
    double sum = 0.0, lo = 1e300, hi = -1e300;
    std::size_t count = 0;
  };
  std::map<long long, Acc> bins;  // keyed by squared lattice distance
  for (std::size_t y = 0; y < model.size(); ++y) {
    long long s = 0;
    for (int a = 0; a < shape.real_dim; ++a) {
      const long long d = shape.displacement(x0, y, a);
      s += d * d;
    }
    if (std::sqrt(static_cast<double>(s)) / n_grid > max_distance) continue;
    const double v = std::abs(row[static_cast<Eigen::Index>(y)]);
    Acc& acc = bins[s];
    acc.sum += v;
    acc.lo = std::min(acc.lo, v);
    acc.hi = std::max(acc.hi, v);
    ++acc.count;
  }
  std::vector<ProfileBin> out;
  out.reserve(bins.size());
  for (const auto& [s, acc] : bins) {
    out.push_back({std::sqrt(static_cast<double>(s)) / n_grid, acc.sum / static_cast<double>(acc.count),
                   acc.hi - acc.lo, acc.count});
  }
  return out;
}

LinearFit fit_decay(const std::vector<ProfileBin>& profile, double p, double d_min, double d_max) {
  // Bins at round-off level (exact zeros of the kernel from interfering
  // periodic images) carry no magnitude information; their logs would swamp the fit.
  double peak = 0.0;
  for (const auto& bin : profile) peak = std::max(peak, bin.abs_P);
  const double floor = kRoundoffFloor * peak;
  std::vector<double> x, y;
  for (const auto& bin : profile) {
    if (bin.distance < d_min || bin.distance > d_max) continue;
    if (!(bin.abs_P > floor)) continue;
    x.push_back(p * bin.distance * bin.distance);
    y.push_back(std::log(bin.abs_P));
  }
  return least_squares(x, y);
}

double rate_error(const QOperator& q, const ManifoldModel& model, const GridFunction& f, int m) {
  if (m >= 1 && !model.is_flat()) throw Error("rate error with m >= 1 requires flat model");
  GridFunction diff = q.apply(f);
  diff -= f;
  return cm_norm(model, diff, m);
}

}  // namespace qoplab
