#include "eigensolver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "qoplab/error.hpp"

namespace qoplab::detail {

namespace {

Eigen::MatrixXcd to_dense(const SparseMatrixC& m) { return Eigen::MatrixXcd(m); }

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(std::string("eigensolver failed: ") + routine + " returned " + std::to_string(info));
  }
}

// zheevr on a dense copy; range is 'A', 'V' or 'I'.
RawEigenpairs run_zheevr(const SparseMatrixC& m, char range, double vl, double vu, lapack_int il,
                         lapack_int iu) {
  Eigen::MatrixXcd a = to_dense(m);
  const auto n = static_cast<lapack_int>(a.rows());
  const lapack_int columns = range == 'I' ? (iu - il + 1) : n;
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXcd z(n, std::max<lapack_int>(columns, 1));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(n, 1)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', range, 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
      vl, vu, il, iu, 0.0, &found, w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), n,
      support.data());
  check_info(info, "zheevr");
  RawEigenpairs out;
  out.values.assign(w.begin(), w.begin() + found);
  out.vectors = z.leftCols(found);
  return out;
}

}  // namespace

RawEigenpairs dense_full(const SparseMatrixC& m) {
  Eigen::MatrixXcd a = to_dense(m);
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                         w.data());
  check_info(info, "zheevd");
  return RawEigenpairs{std::move(w), std::move(a)};
}

RawEigenpairs dense_lowest(const SparseMatrixC& m, std::size_t count) {
  const auto n = static_cast<std::size_t>(m.rows());
  count = std::min(count, n);
  if (count == 0) return {};
  return run_zheevr(m, 'I', 0.0, 0.0, 1, static_cast<lapack_int>(count));
}

RawEigenpairs dense_window(const SparseMatrixC& m, double lower, double upper) {
  return run_zheevr(m, 'V', lower, upper, 0, 0);
}

RawEigenpairs iterative_lowest(const SparseMatrixC& m, std::size_t count,
                               const IterativeSettings& settings) {
  using Index = Eigen::Index;
  const Index n = m.rows();
  if (count == 0) return {};
  if (static_cast<Index>(count) > n) throw Error("eigensolver: count exceeds dimension");

  const std::size_t guard =
      settings.guard > 0 ? settings.guard : std::max<std::size_t>(8, count / 4);
  const Index block = std::min<Index>(n, static_cast<Index>(count + guard));

  SparseMatrixC shifted = m;
  for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= settings.shift;
  Eigen::SimplicialLDLT<SparseMatrixC, Eigen::Lower> factor(shifted);
  if (factor.info() != Eigen::Success) throw Error("eigensolver: shifted factorization failed");

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd basis(n, block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < n; ++i) basis(i, j) = {normal(rng), normal(rng)};
  }

  const auto orthonormalize = [&](Eigen::MatrixXcd& x) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
    x = qr.householderQ() * Eigen::MatrixXcd::Identity(n, x.cols());
  };
  orthonormalize(basis);

  double worst = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    // Rayleigh-Ritz on the current basis.
    const Eigen::MatrixXcd mq = m * basis;
    Eigen::MatrixXcd t = basis.adjoint() * mq;
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(t);
    const Eigen::MatrixXcd x = basis * ritz.eigenvectors();
    const Eigen::MatrixXcd mx = mq * ritz.eigenvectors();

    // Pairs beyond the first Ritz value above the ceiling are not needed;
    // near-degenerate clusters cut by the block edge converge arbitrarily slowly.
    Index needed = static_cast<Index>(count);
    for (Index j = 0; j < needed; ++j) {
      if (ritz.eigenvalues()[j] > settings.ceiling) needed = j + 1;
    }
    worst = 0.0;
    for (Index j = 0; j < needed; ++j) {
      const double r = (mx.col(j) - ritz.eigenvalues()[j] * x.col(j)).norm();
      worst = std::max(worst, r / settings.norm);
    }
    if (worst <= settings.tolerance) {
      RawEigenpairs out;
      out.values.resize(static_cast<std::size_t>(needed));
      for (Index j = 0; j < needed; ++j) out.values[static_cast<std::size_t>(j)] = ritz.eigenvalues()[j];
      out.vectors = x.leftCols(needed);
      return out;
    }

    Eigen::MatrixXcd next = factor.solve(x);
    orthonormalize(next);
    basis = std::move(next);
  }
  std::ostringstream msg;
  msg << "eigensolver failed to converge after " << settings.max_iterations
      << " iterations (max relative residual " << worst << ")";
  throw ConvergenceError(msg.str(), worst);
}

}  // namespace qoplab::detail
