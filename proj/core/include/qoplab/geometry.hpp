#pragma once

// Discretized model manifolds: flat tori T^2 and T^4 and a conformally flat
// T^2, sampled on a uniform periodic grid with Riemann-sum quadrature.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qoplab/grid.hpp"

namespace qoplab {

enum class ModelKind { kFlatTorus2, kFlatTorus4, kConformalTorus2 };

/// Which closed two-form plays the role of the symplectic form on the
/// conformal torus.
///   kCoordinate: omega = dx^dy, fixed while the metric is lambda*(dx^2+dy^2).
///                The curvature eigenvalue relative to g is 2pi/lambda.
///   kMetric:     omega = lambda dx^dy, so g = omega(., J.) stays
///                Kaehler-normalized; requires the Riemann sum of lambda to be 1.
/// Flat kinds always use kCoordinate.
enum class SymplecticForm { kCoordinate, kMetric };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);
std::string_view to_string(SymplecticForm form);
SymplecticForm parse_symplectic_form(std::string_view text);

class ManifoldModel {
 public:
  ModelKind kind() const noexcept { return kind_; }
  SymplecticForm symplectic_form() const noexcept { return form_; }
  int complex_dim() const noexcept { return shape_.real_dim / 2; }
  int real_dim() const noexcept { return shape_.real_dim; }
  int grid() const noexcept { return shape_.grid; }
  std::size_t size() const noexcept { return shape_.size(); }
  const GridShape& shape() const noexcept { return shape_; }
  bool is_flat() const noexcept { return kind_ != ModelKind::kConformalTorus2; }

  std::span<const double> conformal_factor() const noexcept { return lambda_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t index) const { return weights_[index]; }
  double total_volume() const noexcept { return total_volume_; }

  /// Density of omega against dx1^dy1 (per symplectic plane) at a grid point.
  double symplectic_density(std::size_t index) const {
    return form_ == SymplecticForm::kMetric ? lambda_[index] : 1.0;
  }

  GridPoint coords(std::size_t index) const noexcept { return shape_.coords(index); }
  std::size_t index(const GridPoint& c) const noexcept { return shape_.index(c); }
  Position position(std::size_t index) const noexcept { return shape_.position(index); }

 private:
  friend ManifoldModel build_model(ModelKind, int, std::optional<std::vector<double>>,
                                   SymplecticForm);
  ManifoldModel() = default;

  ModelKind kind_ = ModelKind::kFlatTorus2;
  SymplecticForm form_ = SymplecticForm::kCoordinate;
  GridShape shape_;
  std::vector<double> lambda_;
  std::vector<double> weights_;
  double total_volume_ = 0.0;
};

/// Builds a model on an N^{2n} grid. `conformal_factor` must be given iff the
/// kind is conformal; its samples follow the grid's linear index order.
/// Volume weights are lambda^n / N^{2n}.
ManifoldModel build_model(ModelKind kind, int grid,
                          std::optional<std::vector<double>> conformal_factor = std::nullopt,
                          SymplecticForm form = SymplecticForm::kCoordinate);

/// lambda(x, y) = 1 + amplitude * cos(2 pi x) on an N x N grid.
std::vector<double> cosine_conformal_factor(int grid, double amplitude);

/// Complex samples on a model's grid. Carries the grid shape, not the model.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const GridShape& shape, std::vector<std::complex<double>> values);

  static GridFunction constant(const ManifoldModel& model, std::complex<double> value);
  static GridFunction sample(const ManifoldModel& model,
                             const std::function<std::complex<double>(const Position&)>& fn);
  static GridFunction from_real(const ManifoldModel& model, std::span<const double> values);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const std::complex<double>> values() const noexcept { return values_; }
  std::span<std::complex<double>> values() noexcept { return values_; }
  const std::complex<double>& operator[](std::size_t i) const { return values_[i]; }
  std::complex<double>& operator[](std::size_t i) { return values_[i]; }

  bool is_real(double tolerance = 0.0) const;
  std::vector<double> real_part() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(std::complex<double> scale);

 private:
  GridShape shape_;
  std::vector<std::complex<double>> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(std::complex<double> s, GridFunction a);

/// Riemannian distance between grid points. Flat kinds: exact lattice-minimized
/// Euclidean distance. Conformal kind: shortest path on the 16-neighbour grid
/// graph with edge length sqrt(lambda at the edge midpoint) * |step| / N; the
/// graph metric overestimates off-lattice directions by at most ~2.7%.
double torus_distance(const ManifoldModel& model, std::size_t x, std::size_t y);

/// Distances from `x` to every grid point (same metric as torus_distance).
std::vector<double> distances_from(const ManifoldModel& model, std::size_t x);

/// Discrete C^m norm (m <= 2): max over all central finite-difference
/// derivatives of total order <= m of the sup norm.
double cm_norm(const ManifoldModel& model, const GridFunction& f, int m);

/// Discrete Fourier coefficients c_k with f(x) = sum_k c_k e^{2 pi i k.x};
/// frequencies per axis in [-N/2, N/2).
class FourierCoefficients {
 public:
  FourierCoefficients(GridShape shape, std::vector<std::complex<double>> raw)
      : shape_(shape), raw_(std::move(raw)) {}

  const GridShape& shape() const noexcept { return shape_; }
  std::complex<double> at(const GridPoint& k) const { return raw_[shape_.index(k)]; }
  /// Frequency-ordered storage: entry i holds the coefficient of
  /// frequency(i).
  std::span<const std::complex<double>> raw() const noexcept { return raw_; }
  GridPoint frequency(std::size_t i) const;

 private:
  GridShape shape_;
  std::vector<std::complex<double>> raw_;
};

FourierCoefficients fourier_coefficients(const ManifoldModel& model, const GridFunction& f);
GridFunction inverse_fourier(const ManifoldModel& model, const FourierCoefficients& c);

}  // namespace qoplab
