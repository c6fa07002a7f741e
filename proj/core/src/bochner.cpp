#include "qoplab/bochner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qoplab/error.hpp"

namespace qoplab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Potential Potential::zero(const ManifoldModel& model) {
  return Potential(std::vector<double>(model.size(), 0.0));
}

Potential Potential::from_values(const ManifoldModel& model, std::vector<double> values) {
  if (values.size() != model.size()) throw Error("potential/model grid mismatch");
  return Potential(std::move(values));
}

Potential Potential::from_complex(const ManifoldModel& model,
                                  std::span<const std::complex<double>> values) {
  if (values.size() != model.size()) throw Error("potential/model grid mismatch");
  std::vector<double> real(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].imag() != 0.0) throw Error("potential must be Hermitian");
    real[i] = values[i].real();
  }
  return Potential(std::move(real));
}

Potential Potential::cosine(const ManifoldModel& model, double amplitude) {
  std::vector<double> v(model.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = amplitude * std::cos(kTwoPi * model.position(i)[0]);
  }
  return Potential(std::move(v));
}

double Potential::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

TauField compute_tau(const ManifoldModel& model) {
  TauField field;
  const int n = model.complex_dim();
  field.tau.resize(model.size());
  if (model.is_flat()) {
    std::fill(field.tau.begin(), field.tau.end(), kTwoPi * n);
    field.mu0 = kTwoPi;
    return field;
  }
  const auto lambda = model.conformal_factor();
  double mu0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.tau.size(); ++i) {
    // n = 1: the single curvature eigenvalue is 2 pi rho / lambda.
    field.tau[i] = kTwoPi * model.symplectic_density(i) / lambda[i];
    mu0 = std::min(mu0, field.tau[i]);
  }
  field.mu0 = mu0;
  return field;
}

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(GridShape shape, SparseMatrixC matrix,
                                     std::vector<double> frame_scale, std::vector<double> weights)
    : shape_(shape),
      matrix_(std::move(matrix)),
      frame_scale_(std::move(frame_scale)),
      weights_(std::move(weights)) {
  const auto n = static_cast<std::size_t>(matrix_.rows());
  if (n != shape_.size() || frame_scale_.size() != n || weights_.size() != n) {
    throw Error("operator dimensions do not match grid");
  }
  matrix_.makeCompressed();
}

std::vector<std::complex<double>> HermitianOperator::apply(
    std::span<const std::complex<double>> f) const {
  const std::size_t n = size();
  if (f.size() != n) throw Error("grid mismatch");
  Eigen::VectorXcd u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = frame_scale_[i] * f[i];
  const Eigen::VectorXcd mu = matrix_ * u;
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mu[static_cast<Eigen::Index>(i)] / frame_scale_[i];
  return out;
}

SparseMatrixC HermitianOperator::weighted_matrix() const {
  // W A = W D^{-1} M D
  SparseMatrixC out = matrix_;
  for (Eigen::Index col = 0; col < out.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(out, col); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      it.valueRef() *= weights_[r] / frame_scale_[r] * frame_scale_[c];
    }
  }
  return out;
}

double HermitianOperator::self_adjointness_defect() const {
  const SparseMatrixC wa = weighted_matrix();
  const SparseMatrixC diff = wa - SparseMatrixC(wa.adjoint());
  double scale = 0.0;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < wa.nonZeros(); ++k) scale = std::max(scale, std::abs(wa.valuePtr()[k]));
  for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) worst = std::max(worst, std::abs(diff.valuePtr()[k]));
  return scale > 0.0 ? worst / scale : worst;
}

double HermitianOperator::lower_bound() const {
  std::vector<double> diag(size(), 0.0);
  std::vector<double> off(size(), 0.0);
  for (Eigen::Index col = 0; col < matrix_.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(matrix_, col); it; ++it) {
      if (it.row() == it.col()) {
        diag[static_cast<std::size_t>(it.row())] = it.value().real();
      } else {
        off[static_cast<std::size_t>(it.row())] += std::abs(it.value());
      }
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < diag.size(); ++i) lo = std::min(lo, diag[i] - off[i]);
  return lo;
}

double HermitianOperator::norm_bound() const {
  std::vector<double> rows(size(), 0.0);
  for (Eigen::Index col = 0; col < matrix_.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(matrix_, col); it; ++it) {
      rows[static_cast<std::size_t>(it.row())] += std::abs(it.value());
    }
  }
  return *std::max_element(rows.begin(), rows.end());
}

// ---------------------------------------------------------------------------

HermitianOperator assemble_bochner(const ManifoldModel& model, const ConnectionPhases& phases) {
  if (!(phases.shape() == model.shape())) throw Error("phases/model grid mismatch");
  const GridShape& shape = model.shape();
  const std::size_t n = model.size();
  const int dim = shape.real_dim;
  const double h2 = static_cast<double>(shape.grid) * shape.grid;
  const int cn = model.complex_dim();

  // The conformal kind is two-dimensional, so D = sqrt(lambda) and the
  // symmetrized entry is S_xy / sqrt(lambda_x lambda_y). Flat kinds have lambda = 1.
  std::vector<double> scale(n);
  const auto lambda = model.conformal_factor();
  for (std::size_t x = 0; x < n; ++x) scale[x] = std::sqrt(std::pow(lambda[x], cn));

  std::vector<Eigen::Triplet<std::complex<double>, std::ptrdiff_t>> triplets;
  triplets.reserve(n * static_cast<std::size_t>(2 * dim + 1));
  for (std::size_t x = 0; x < n; ++x) {
    const double sx = std::sqrt(lambda[x]);
    triplets.emplace_back(x, x, 2.0 * dim * h2 / lambda[x]);
    for (int mu = 0; mu < dim; ++mu) {
      const std::size_t fwd = shape.shift(x, mu, 1);
      const std::size_t bwd = shape.shift(x, mu, -1);
      const double s_fwd = sx * std::sqrt(lambda[fwd]);
      const double s_bwd = sx * std::sqrt(lambda[bwd]);
      triplets.emplace_back(x, fwd, -h2 * phases.transport(x, mu, 1) / s_fwd);
      triplets.emplace_back(x, bwd, -h2 * phases.transport(x, mu, -1) / s_bwd);
    }
  }
  SparseMatrixC m(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  std::vector<double> weights(model.weights().begin(), model.weights().end());
  return HermitianOperator(shape, std::move(m), std::move(scale), std::move(weights));
}

HermitianOperator renormalize(const HermitianOperator& op, const TauField& tau, int p,
                              const Potential& phi) {
  const std::size_t n = op.size();
  if (tau.tau.size() != n || phi.values().size() != n) throw Error("grid mismatch");
  SparseMatrixC m = op.matrix();
  for (std::size_t x = 0; x < n; ++x) {
    const auto i = static_cast<std::ptrdiff_t>(x);
    m.coeffRef(i, i) += -static_cast<double>(p) * tau.tau[x] + phi.values()[x];
  }
  return HermitianOperator(op.shape(), std::move(m),
                           std::vector<double>(op.frame_scale().begin(), op.frame_scale().end()),
                           std::vector<double>(op.weights().begin(), op.weights().end()));
}

}  // namespace qoplab
