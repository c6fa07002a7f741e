#pragma once

// The prequantum line bundle L^p as unit-modulus parallel-transport factors
// on the edges of the grid.
//
// Conventions: the covariant difference along axis mu is
//   N * (U_{x,mu} f(x + e_mu/N) - f(x)),  U_{x,mu} = exp(i theta_mu / N),
// i.e. nabla = d + i theta. The curvature is R = -2 pi i p omega, so each
// counterclockwise elementary plaquette in a symplectic plane (2j, 2j+1)
// carries the phase exp(-2 pi i p * omega(plaquette)).

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qoplab/geometry.hpp"

namespace qoplab {

class ConnectionPhases {
 public:
  /// Wraps hand-built link variables; `links[index * real_dim + axis]` is the
  /// factor on the edge from `index` to its +axis neighbour.
  ConnectionPhases(GridShape shape, int flux, std::vector<std::complex<double>> links,
                   std::string gauge);

  /// All links equal to 1 (the trivial bundle, p = 0).
  static ConnectionPhases trivial(const ManifoldModel& model);

  const GridShape& shape() const noexcept { return shape_; }
  int flux() const noexcept { return flux_; }
  const std::string& gauge() const noexcept { return gauge_; }
  std::span<const std::complex<double>> links() const noexcept { return links_; }

  std::complex<double> link(std::size_t index, int axis) const {
    return links_[index * static_cast<std::size_t>(shape_.real_dim) + static_cast<std::size_t>(axis)];
  }

  /// Transport factor along +axis (direction = +1) or -axis (direction = -1).
  /// The reversed edge carries the conjugate factor.
  std::complex<double> transport(std::size_t index, int axis, int direction) const;

  /// Product of links around the counterclockwise plaquette spanned by
  /// axes (a, b) with lower-left corner `index`.
  std::complex<double> plaquette(std::size_t index, int a, int b) const;

 private:
  GridShape shape_;
  int flux_ = 0;
  std::vector<std::complex<double>> links_;
  std::string gauge_;
};

/// omega integrated over the (2j, 2j+1) plaquette at `index`.
double plaquette_symplectic_area(const ManifoldModel& model, std::size_t index);

/// Landau-gauge links with boundary twists realizing curvature p*omega.
/// Uniform flux uses exact rational angles.
ConnectionPhases assemble_phases(const ManifoldModel& model, int p);

/// U'_{x,mu} = e^{i chi(x)} U_{x,mu} e^{-i chi(x + e_mu)}.
ConnectionPhases gauge_transform(const ConnectionPhases& phases, std::span<const double> chi);

/// Recovers p from the plaquette angles of every symplectic plane and checks
/// that the curvature is exactly p*omega (mixed planes flat).
int check_prequantization(const ConnectionPhases& phases, const ManifoldModel& model);

}  // namespace qoplab
