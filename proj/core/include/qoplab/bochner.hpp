#pragma once

// Gauge-covariant finite-difference Bochner Laplacian on L^p and its
// renormalization Delta - p*tau + Phi.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "qoplab/geometry.hpp"
#include "qoplab/prequantum.hpp"

namespace qoplab {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, std::ptrdiff_t>;

/// Scalar Hermitian endomorphism of the trivial rank-1 bundle E.
class Potential {
 public:
  static Potential zero(const ManifoldModel& model);
  static Potential from_values(const ManifoldModel& model, std::vector<double> values);
  /// Throws "potential must be Hermitian" if any sample has an imaginary part.
  static Potential from_complex(const ManifoldModel& model,
                                std::span<const std::complex<double>> values);
  /// Phi(x) = amplitude * cos(2 pi x_1).
  static Potential cosine(const ManifoldModel& model, double amplitude);

  std::span<const double> values() const noexcept { return values_; }
  double sup_norm() const noexcept;

 private:
  explicit Potential(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

struct TauField {
  std::vector<double> tau;
  double mu0 = 0.0;
};

/// Trace and infimum of the curvature endomorphism relative to g (p = 1).
/// Flat: tau = 2 pi n, mu0 = 2 pi. Conformal with omega = rho dx^dy:
/// tau = 2 pi rho / lambda, mu0 = min tau.
TauField compute_tau(const ManifoldModel& model);

/// A self-adjoint operator A on grid functions, self-adjoint in the weighted
/// inner product <f, g> = sum_x w_x conj(f_x) g_x.
///
/// Stored in the unitary frame u = D v with D = diag(sqrt(N^{2n} w)), where
/// M = D A D^{-1} is Hermitian in the plain Euclidean inner product. For flat
/// models D is the identity.
class HermitianOperator {
 public:
  HermitianOperator(GridShape shape, SparseMatrixC matrix, std::vector<double> frame_scale,
                    std::vector<double> weights);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const SparseMatrixC& matrix() const noexcept { return matrix_; }
  std::span<const double> frame_scale() const noexcept { return frame_scale_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// A f in the natural frame.
  std::vector<std::complex<double>> apply(std::span<const std::complex<double>> f) const;

  /// W A in the natural frame; Hermitian iff A is weighted-self-adjoint.
  SparseMatrixC weighted_matrix() const;

  /// max |WA - (WA)^*| / max |WA|.
  double self_adjointness_defect() const;

  /// Gershgorin bounds of the spectrum.
  double lower_bound() const;
  double norm_bound() const;

 private:
  GridShape shape_;
  SparseMatrixC matrix_;
  std::vector<double> frame_scale_;
  std::vector<double> weights_;
};

/// Peierls-substituted (2*2n + 1)-point stencil; conformal models use
/// lambda^{-1} times the flat covariant stencil.
HermitianOperator assemble_bochner(const ManifoldModel& model, const ConnectionPhases& phases);

/// H - p * diag(tau) + diag(Phi).
HermitianOperator renormalize(const HermitianOperator& op, const TauField& tau, int p,
                              const Potential& phi);

}  // namespace qoplab
