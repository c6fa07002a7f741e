#pragma once

// Eigendecomposition of the renormalized operator, bound-state cluster
// detection, and the generalized Bergman projector kernel.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qoplab/bochner.hpp"
#include "qoplab/geometry.hpp"

namespace qoplab {

enum class SolverPath { kAuto, kDense, kIterative };
std::string_view to_string(SolverPath path);

struct EigenOptions {
  SolverPath path = SolverPath::kAuto;
  /// Dense LAPACK at or below this dimension, iterative above.
  std::size_t dense_limit = 5000;
  /// Iterative convergence target: max residual <= tolerance * ||H||.
  double tolerance = 1e-11;
  int max_iterations = 400;
  /// First request size of the iterative path in eigendecompose_below;
  /// doubled until an eigenvalue above the ceiling appears.
  std::size_t initial_count = 64;
};

/// Ascending eigenpairs. Eigenvectors are in the natural frame and
/// orthonormal in the weighted inner product.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // size() x count()
  std::vector<double> weights;
  GridShape shape;
  SolverPath path = SolverPath::kDense;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvectors.rows()); }
  std::size_t count() const noexcept { return eigenvalues.size(); }

  /// max |V^* W V - I|.
  double gram_defect() const;
  /// max_i ||H v_i - lambda_i v_i||_W / ||H||.
  double max_relative_residual(const HermitianOperator& op) const;
};

/// Full decomposition when `count` is absent, otherwise the lowest `count`
/// pairs (dense subset solver up to options.dense_limit, shift-invert subspace
/// iteration above).
SpectralDecomposition eigendecompose(const HermitianOperator& op,
                                     std::optional<std::size_t> count = std::nullopt,
                                     const EigenOptions& options = {});

/// All eigenpairs at or below `ceiling`, plus at least one pair above it
/// (unless the whole spectrum lies below).
SpectralDecomposition eigendecompose_below(const HermitianOperator& op, double ceiling,
                                           const EigenOptions& options = {});

struct GapReport {
  std::size_t bound_count = 0;
  double threshold = 0.0;
  double low_cluster_width = 0.0;
  double lowest_eigenvalue = 0.0;
  double highest_bound = 0.0;
  double next_eigenvalue = 0.0;
  /// (next_eigenvalue - highest_bound) / (low_cluster_width + 1).
  double gap_ratio = 0.0;
};

inline constexpr double kMinimumGapRatio = 10.0;

/// Bound states are the eigenvalues below mu0 * p. Throws
/// "no spectral gap resolved (increase N or p)" when the gap ratio is below 10.
GapReport detect_bound_cluster(std::span<const double> ascending_eigenvalues, double mu0, int p);
GapReport detect_bound_cluster(const SpectralDecomposition& decomp, double mu0, int p);

/// Riemann-Roch number on the flat or conformal 2n-torus: p^n.
long long expected_dim(const ManifoldModel& model, int p);

/// P(x, y) = sum_i v_i(x) conj(v_i(y)) over the bound states; kernel with
/// respect to dv(y), so the weighted matrix is P diag(w).
class ProjectorKernel {
 public:
  ProjectorKernel(GridShape shape, Eigen::MatrixXcd bound_vectors, std::vector<double> weights);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
  const Eigen::MatrixXcd& vectors() const noexcept { return vectors_; }
  std::span<const double> weights() const noexcept { return weights_; }

  std::complex<double> operator()(std::size_t x, std::size_t y) const;
  double diagonal(std::size_t x) const;
  /// P(x, .) for all y.
  Eigen::VectorXcd row(std::size_t x) const;
  Eigen::MatrixXcd dense() const;

  double weighted_trace() const;
  /// max |P W P - P| over all entries (dense evaluation).
  double idempotence_residual() const;
  /// max |P(x,y) - conj(P(y,x))| over all entries.
  double hermiticity_defect() const;

 private:
  GridShape shape_;
  Eigen::MatrixXcd vectors_;
  std::vector<double> weights_;
};

ProjectorKernel projector_kernel(const SpectralDecomposition& decomp, const GapReport& report);

}  // namespace qoplab
