#pragma once

// Internal eigensolver back ends. All routines work on the Hermitian matrix
// in the unitary frame and return unit-norm eigenvectors.

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qoplab/bochner.hpp"

namespace qoplab::detail {

struct RawEigenpairs {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;
};

RawEigenpairs dense_full(const SparseMatrixC& m);
RawEigenpairs dense_lowest(const SparseMatrixC& m, std::size_t count);
/// Eigenpairs with eigenvalue in (lower, upper].
RawEigenpairs dense_window(const SparseMatrixC& m, double lower, double upper);

struct IterativeSettings {
  double shift = 0.0;       // strictly below the spectrum
  double norm = 1.0;        // ||M|| estimate for the relative residual
  double tolerance = 1e-11;
  int max_iterations = 400;
  std::size_t guard = 0;    // extra block vectors; 0 selects a default
  /// When finite, only the pairs at or below the ceiling and the first one
  /// above it have to converge, and only those are returned.
  double ceiling = std::numeric_limits<double>::infinity();
};

/// Lowest `count` eigenpairs by shift-invert block subspace iteration with
/// Rayleigh-Ritz extraction. Throws ConvergenceError on failure.
RawEigenpairs iterative_lowest(const SparseMatrixC& m, std::size_t count,
                               const IterativeSettings& settings);

}  // namespace qoplab::detail
