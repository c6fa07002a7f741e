#include "qoplab/prequantum.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>

#include "qoplab/error.hpp"

namespace qoplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(2 pi i num / den) for an exact rational angle.
std::complex<double> rational_phase(std::int64_t num, std::int64_t den) {
  num %= den;
  if (num < 0) num += den;
  return std::polar(1.0, kTwoPi * static_cast<double>(num) / static_cast<double>(den));
}

// exp(2 pi i t) with t reduced mod 1 in extended precision first.
std::complex<double> fractional_phase(long double t) {
  t -= std::floor(t);
  return std::polar(1.0, kTwoPi * static_cast<double>(t));
}

}  // namespace

ConnectionPhases::ConnectionPhases(GridShape shape, int flux, std::vector<std::complex<double>> links,
                                   std::string gauge)
    : shape_(shape), flux_(flux), links_(std::move(links)), gauge_(std::move(gauge)) {
  if (links_.size() != shape_.size() * static_cast<std::size_t>(shape_.real_dim)) {
    throw Error("phases/model grid mismatch: wrong number of links");
  }
}

ConnectionPhases ConnectionPhases::trivial(const ManifoldModel& model) {
  return ConnectionPhases(model.shape(), 0,
                          std::vector<std::complex<double>>(model.size() * model.real_dim(), 1.0),
                          "trivial");
}

std::complex<double> ConnectionPhases::transport(std::size_t index, int axis, int direction) const {
  if (direction > 0) return link(index, axis);
  return std::conj(link(shape_.shift(index, axis, -1), axis));
}

std::complex<double> ConnectionPhases::plaquette(std::size_t index, int a, int b) const {
  const std::size_t xa = shape_.shift(index, a, 1);
  const std::size_t xb = shape_.shift(index, b, 1);
  return link(index, a) * link(xa, b) * std::conj(link(xb, a)) * std::conj(link(index, b));
}

double plaquette_symplectic_area(const ManifoldModel& model, std::size_t index) {
  const double cell = 1.0 / (static_cast<double>(model.grid()) * model.grid());
  if (model.symplectic_form() == SymplecticForm::kCoordinate) return cell;
  const GridShape& s = model.shape();
  const auto lambda = model.conformal_factor();
  const std::size_t x1 = s.shift(index, 0, 1);
  const double corners =
      lambda[index] + lambda[x1] + lambda[s.shift(index, 1, 1)] + lambda[s.shift(x1, 1, 1)];
  return 0.25 * corners * cell;
}

ConnectionPhases assemble_phases(const ManifoldModel& model, int p) {
  if (p <= 0) throw Error("flux must be a positive integer, got " + std::to_string(p));
  const GridShape& shape = model.shape();
  const int N = shape.grid;
  const std::size_t size = model.size();

  double max_area = 0.0;
  for (std::size_t x = 0; x < size; ++x) max_area = std::max(max_area, plaquette_symplectic_area(model, x));
  if (p * max_area >= 0.5) {
    throw Error("flux per plaquette too large for grid: p = " + std::to_string(p) +
                ", N = " + std::to_string(N));
  }

  std::vector<std::complex<double>> links(size * static_cast<std::size_t>(shape.real_dim), 1.0);
  const auto link_at = [&](std::size_t x, int axis) -> std::complex<double>& {
    return links[x * static_cast<std::size_t>(shape.real_dim) + static_cast<std::size_t>(axis)];
  };

  if (model.symplectic_form() == SymplecticForm::kCoordinate) {
    const std::int64_t N2 = static_cast<std::int64_t>(N) * N;
    for (std::size_t x = 0; x < size; ++x) {
      const GridPoint c = shape.coords(x);
      for (int j = 0; j < model.complex_dim(); ++j) {
        const int a = 2 * j;
        const int b = 2 * j + 1;
        // theta_b = -2 pi p x_a
        link_at(x, b) = rational_phase(-static_cast<std::int64_t>(p) * c[a], N2);
        if (c[a] == N - 1) link_at(x, a) = rational_phase(static_cast<std::int64_t>(p) * c[b], N);
      }
    }
    return ConnectionPhases(shape, p, std::move(links), "landau");
  }

  // Non-uniform omega (metric form on the conformal T^2): accumulate plaquette
  // areas along each row, twist the seam by the cumulative row totals.
  std::vector<long double> row_total(static_cast<std::size_t>(N), 0.0L);
  std::vector<long double> cumulative(size, 0.0L);
  for (int j = 0; j < N; ++j) {
    long double acc = 0.0L;
    for (int i = 0; i < N; ++i) {
      const std::size_t x = shape.index({i, j, 0, 0});
      cumulative[x] = acc;
      acc += plaquette_symplectic_area(model, x);
    }
    row_total[static_cast<std::size_t>(j)] = acc;
  }
  long double twist = 0.0L;
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const std::size_t x = shape.index({i, j, 0, 0});
      link_at(x, 1) = fractional_phase(-static_cast<long double>(p) * cumulative[x]);
      if (i == N - 1) link_at(x, 0) = fractional_phase(static_cast<long double>(p) * twist);
    }
    twist += row_total[static_cast<std::size_t>(j)];
  }
  return ConnectionPhases(shape, p, std::move(links), "landau");
}

ConnectionPhases gauge_transform(const ConnectionPhases& phases, std::span<const double> chi) {
  const GridShape& shape = phases.shape();
  if (chi.size() != shape.size()) throw Error("phases/model grid mismatch: gauge angle size");
  std::vector<std::complex<double>> links(phases.links().begin(), phases.links().end());
  for (std::size_t x = 0; x < shape.size(); ++x) {
    for (int mu = 0; mu < shape.real_dim; ++mu) {
      const std::size_t y = shape.shift(x, mu, 1);
      links[x * static_cast<std::size_t>(shape.real_dim) + static_cast<std::size_t>(mu)] *=
          std::polar(1.0, chi[x] - chi[y]);
    }
  }
  return ConnectionPhases(shape, phases.flux(), std::move(links), phases.gauge() + "+gauge");
}

int check_prequantization(const ConnectionPhases& phases, const ManifoldModel& model) {
  const GridShape& shape = phases.shape();
  if (!(shape == model.shape())) throw Error("phases/model grid mismatch");
  constexpr double kAngleTolerance = 1e-9;
  const std::size_t size = shape.size();

  int recovered = 0;
  bool first = true;
  for (int j = 0; j < model.complex_dim(); ++j) {
    const int a = 2 * j;
    const int b = 2 * j + 1;
    // Sum plaquette angles over each 2D slice of the plane.
    std::map<std::size_t, long double> slice_sum;
    for (std::size_t x = 0; x < size; ++x) {
      GridPoint key = shape.coords(x);
      key[a] = 0;
      key[b] = 0;
      slice_sum[shape.index(key)] += std::arg(phases.plaquette(x, a, b));
    }
    for (const auto& [key, sum] : slice_sum) {
      const int p = static_cast<int>(std::lround(-static_cast<double>(sum) / kTwoPi));
      if (first) {
        recovered = p;
        first = false;
      } else if (p != recovered) {
        throw Error("curvature not of the form p*omega: plane fluxes " + std::to_string(recovered) +
                    " and " + std::to_string(p) + " disagree");
      }
    }
  }

  for (std::size_t x = 0; x < size; ++x) {
    for (int a = 0; a < shape.real_dim; ++a) {
      for (int b = a + 1; b < shape.real_dim; ++b) {
        const bool symplectic = (a % 2 == 0) && (b == a + 1);
        const double expected =
            symplectic ? -kTwoPi * recovered * plaquette_symplectic_area(model, x) : 0.0;
        const double angle = std::arg(phases.plaquette(x, a, b) * std::polar(1.0, -expected));
        if (std::abs(angle) > kAngleTolerance) {
          throw Error("curvature not of the form p*omega: plaquette angle deviates by " +
                      std::to_string(angle));
        }
      }
    }
  }
  return recovered;
}

}  // namespace qoplab
