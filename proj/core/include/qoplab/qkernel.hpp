#pragma once

// K_p = |P|^2, the averaging operator Q built from it, its Fourier
// multipliers on flat tori and the off-diagonal decay profile of P.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qoplab/geometry.hpp"
#include "qoplab/numerics.hpp"
#include "qoplab/spectral.hpp"

namespace qoplab {

/// (Q f)(x) = (1/R_p) sum_y w_y K(x, y) f(y) with K = |P|^2, R_p = dim / Vol.
/// K is evaluated on demand; nothing of size N^{4n} is stored.
class QOperator {
 public:
  QOperator(ProjectorKernel kernel, double total_volume);

  const ProjectorKernel& kernel() const noexcept { return kernel_; }
  const GridShape& shape() const noexcept { return kernel_.shape(); }
  std::size_t size() const noexcept { return kernel_.size(); }
  std::size_t dim() const noexcept { return kernel_.dim(); }
  double volume() const noexcept { return volume_; }
  double R_p() const noexcept { return r_p_; }

  double K(std::size_t x, std::size_t y) const { return std::norm(kernel_(x, y)); }
  /// K(x, .) for all y.
  Eigen::VectorXd row(std::size_t x) const;
  /// Full K; intended for small grids.
  Eigen::MatrixXd dense() const;

  GridFunction apply(const GridFunction& f) const;

  /// max_x |sum_y w_y K(x, y) - P(x, x)|.
  double reproducing_defect() const;

 private:
  ProjectorKernel kernel_;
  double volume_;
  double r_p_;
};

QOperator build_q(const ProjectorKernel& kernel, const ManifoldModel& model);
GridFunction apply_q(const QOperator& q, const GridFunction& f);

/// Multipliers lambda_k for all frequencies with |k|_inf <= kmax.
struct MultiplierTable {
  std::vector<GridPoint> frequencies;
  std::vector<double> values;
  /// Largest |Q e_k - lambda_k e_k| seen on the spot-check modes.
  double invariance_defect = 0.0;

  /// Throws if k is not in the table.
  double at(const GridPoint& k) const;
};

/// Flat models only. Extracts the multipliers from the convolution profile
/// K(0, .) / R_p and spot-checks two pseudo-random modes by direct
/// application.
MultiplierTable q_multipliers(const QOperator& q, const ManifoldModel& model, int kmax);

/// exp(-pi |k|^2 / p): the multiplier of exp(-Delta / (4 pi p)) on the unit torus.
double heat_multiplier(const GridPoint& k, double p);

struct ProfileBin {
  double distance = 0.0;
  double abs_P = 0.0;  // mean over the bin (the bin is one translation orbit up to symmetry)
  double spread = 0.0; // max - min of |P| inside the bin
  std::size_t samples = 0;
};

/// |P(x0, y)| grouped by the exact lattice distance d(x0, y) <= max_distance,
/// sorted by distance. Flat models only.
std::vector<ProfileBin> offdiag_profile(const ProjectorKernel& kernel, const ManifoldModel& model,
                                        std::size_t x0, double max_distance);

inline constexpr double kRoundoffFloor = 1e-12;

/// Least squares of log |P| against p d^2 over bins with d in [d_min, d_max].
/// Bins with |P| <= kRoundoffFloor * max |P| are skipped.
LinearFit fit_decay(const std::vector<ProfileBin>& profile, double p, double d_min, double d_max);

/// C^m norm of Q f - f. m >= 1 requires a flat model.
double rate_error(const QOperator& q, const ManifoldModel& model, const GridFunction& f, int m);

}  // namespace qoplab
