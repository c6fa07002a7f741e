#pragma once

// The Gaussian model kernel of the lowest Landau level on C^n and the
// leading-order comparison of the discrete projector against it.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qoplab/geometry.hpp"
#include "qoplab/spectral.hpp"

namespace qoplab {

/// Curvature weights a_1..a_n > 0. Real 2n-vectors Z complexify as
/// z_j = Z_{2j} + i Z_{2j+1} (zero-based).
struct ModelKernelSpec {
  int n = 1;
  std::vector<double> a;

  /// a_j = 2 pi for every j.
  static ModelKernelSpec isotropic(int n);
  void validate() const;
};

/// exp(-1/4 sum_j a_j (|z_j|^2 + |z'_j|^2 - 2 z_j conj(z'_j))).
std::complex<double> model_P(const ModelKernelSpec& spec, std::span<const double> Z,
                             std::span<const double> Zp);

/// |model_P|^2.
double model_density(const ModelKernelSpec& spec, std::span<const double> Z,
                     std::span<const double> Zp);

/// |prod_j (a_j / 2pi) * int model_P(Z, W) model_P(W, Z') dW - model_P(Z, Z')|
/// by trapezoid quadrature on a square window of half-width `extent` per
/// complex plane, centred at the midpoint of Z and Z'.
double model_reproducing_residual(const ModelKernelSpec& spec, std::span<const double> Z,
                                  std::span<const double> Zp, double extent, int points);

/// Chart Z -> x0 + Z around a grid point of a flat torus.
struct NormalFrame {
  GridShape shape;
  std::size_t base = 0;
  Position x0{};
};

/// Throws for the conformal model (normal coordinates there are not implemented).
NormalFrame make_normal_frame(const ManifoldModel& model, std::size_t base);

/// Volume density in normal coordinates; identically 1 on flat tori.
double kappa(const NormalFrame& frame, std::span<const double> Z);

struct NearDiagonalResult {
  double sup_error = 0.0;
  /// Same comparison on moduli only; never larger than sup_error.
  double magnitude_error = 0.0;
  std::size_t pairs = 0;
};

/// sup |p^{-n} P(x0+Z, x0+Z') - model_P(sqrt(p) Z, sqrt(p) Z')| over grid
/// pairs with |Z|, |Z'| <= radius, a_j = 2 pi. P is moved from the Landau
/// gauge on the torus to the symmetric gauge centred at x0 before comparing.
/// All pairs are used up to 10^4, otherwise a fixed pseudo-random subset
/// (always including Z = Z' = 0).
NearDiagonalResult near_diagonal_error(const ProjectorKernel& kernel, const ManifoldModel& model,
                                       const NormalFrame& frame, int p, double radius);

}  // namespace qoplab
