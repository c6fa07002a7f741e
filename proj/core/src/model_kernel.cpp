#include "qoplab/model_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qoplab/error.hpp"

namespace qoplab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_arity(const ModelKernelSpec& spec, std::span<const double> Z, std::span<const double> Zp) {
  if (Z.size() != static_cast<std::size_t>(2 * spec.n) || Zp.size() != Z.size()) {
    throw Error("model kernel expects 2n real coordinates");
  }
}

// Single complex plane with weight a.
std::complex<double> plane_kernel(double a, std::complex<double> z, std::complex<double> zp) {
  return std::exp(-0.25 * a * (std::norm(z) + std::norm(zp) - 2.0 * z * std::conj(zp)));
}

std::complex<double> exp_i(double angle) { return std::polar(1.0, angle); }

}  // namespace

ModelKernelSpec ModelKernelSpec::isotropic(int n) {
  return ModelKernelSpec{n, std::vector<double>(static_cast<std::size_t>(n), 2.0 * kPi)};
}

void ModelKernelSpec::validate() const {
  if (n < 1 || a.size() != static_cast<std::size_t>(n)) throw Error("model kernel needs n weights");
  for (double v : a) {
    if (!(v > 0.0)) throw Error("model kernel weights must be positive");
  }
}

std::complex<double> model_P(const ModelKernelSpec& spec, std::span<const double> Z,
                             std::span<const double> Zp) {
  spec.validate();
  check_arity(spec, Z, Zp);
  std::complex<double> out = 1.0;
  for (int j = 0; j < spec.n; ++j) {
    const std::complex<double> z(Z[2 * j], Z[2 * j + 1]);
    const std::complex<double> zp(Zp[2 * j], Zp[2 * j + 1]);
    out *= plane_kernel(spec.a[j], z, zp);
  }
  return out;
}

double model_density(const ModelKernelSpec& spec, std::span<const double> Z,
                     std::span<const double> Zp) {
  return std::norm(model_P(spec, Z, Zp));
}

double model_reproducing_residual(const ModelKernelSpec& spec, std::span<const double> Z,
                                  std::span<const double> Zp, double extent, int points) {
  spec.validate();
  check_arity(spec, Z, Zp);
  const double a_min = *std::min_element(spec.a.begin(), spec.a.end());
  if (extent < 6.0 / std::sqrt(a_min)) throw Error("quadrature window too small");
  if (points < 2) throw Error("quadrature needs at least two points per axis");

  // The integrand factorizes over complex planes, so each plane is
  // integrated separately on its own 2-D trapezoid grid.
  const double h = 2.0 * extent / (points - 1);
  std::complex<double> integral = 1.0;
  std::complex<double> direct = 1.0;
  for (int j = 0; j < spec.n; ++j) {
    const double a = spec.a[j];
    const std::complex<double> z(Z[2 * j], Z[2 * j + 1]);
    const std::complex<double> zp(Zp[2 * j], Zp[2 * j + 1]);
    const std::complex<double> mid = 0.5 * (z + zp);
    std::complex<double> sum = 0.0;
    for (int u = 0; u < points; ++u) {
      const double wu = (u == 0 || u == points - 1) ? 0.5 : 1.0;
      for (int v = 0; v < points; ++v) {
        const double wv = (v == 0 || v == points - 1) ? 0.5 : 1.0;
        const std::complex<double> w = mid + std::complex<double>(-extent + u * h, -extent + v * h);
        sum += wu * wv * plane_kernel(a, z, w) * plane_kernel(a, w, zp);
      }
    }
    integral *= (a / (2.0 * kPi)) * sum * h * h;
    direct *= plane_kernel(a, z, zp);
  }
  return std::abs(integral - direct);
}

NormalFrame make_normal_frame(const ManifoldModel& model, std::size_t base) {
  if (!model.is_flat()) throw Error("normal frame for conformal model not implemented");
  if (base >= model.size()) throw Error("base point outside grid");
  return NormalFrame{model.shape(), base, model.position(base)};
}

double kappa(const NormalFrame& frame, std::span<const double> Z) {
  if (Z.size() != static_cast<std::size_t>(frame.shape.real_dim)) {
    throw Error("normal coordinates have the wrong dimension");
  }
  return 1.0;
}

NearDiagonalResult near_diagonal_error(const ProjectorKernel& kernel, const ManifoldModel& model,
                                       const NormalFrame& frame, int p, double radius) {
  if (!model.is_flat()) throw Error("near-diagonal comparison implemented for flat models only");
  if (!(kernel.shape() == model.shape()) || !(frame.shape == model.shape())) {
    throw Error("grid mismatch");
  }
  if (p < 1) throw Error("flux must be a positive integer");
  if (!(radius > 0.0) || radius >= 0.5) throw Error("near-diagonal radius must lie in (0, 1/2)");

  const GridShape& shape = model.shape();
  const int N = shape.grid;
  const int dim = shape.real_dim;
  const int n = dim / 2;
  const GridPoint base = shape.coords(frame.base);
  const int reach = static_cast<int>(std::floor(radius * N));

  // Lattice offsets inside the ball.
  std::vector<GridPoint> offsets;
  {
    const int side = 2 * reach + 1;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(side);
    for (std::size_t idx = 0; idx < total; ++idx) {
      GridPoint d{0, 0, 0, 0};
      std::size_t r = idx;
      long long s = 0;
      for (int a = 0; a < dim; ++a) {
        d[a] = static_cast<int>(r % static_cast<std::size_t>(side)) - reach;
        r /= static_cast<std::size_t>(side);
        s += static_cast<long long>(d[a]) * d[a];
      }
      if (std::sqrt(static_cast<double>(s)) <= radius * N) offsets.push_back(d);
    }
  }

  // Phase taking the torus Landau-gauge value at x0 + d to the symmetric
  // gauge centred at x0: the seam unwrapping exp(2 pi i p s j / N) on each
  // plane, then the quadratic gauge change exp(i phi).
  struct Sample {
    std::size_t index;
    std::vector<double> Z;  // continuous, scaled by sqrt(p)
    std::complex<double> phase;
  };
  const double sp = std::sqrt(static_cast<double>(p));
  std::vector<Sample> samples;
  samples.reserve(offsets.size());
  for (const auto& d : offsets) {
    GridPoint torus{0, 0, 0, 0};
    double angle = 0.0;
    std::vector<double> Z(static_cast<std::size_t>(dim));
    for (int j = 0; j < n; ++j) {
      const int a = 2 * j, b = 2 * j + 1;
      const int xa = base[a] + d[a];
      const int xb = base[b] + d[b];
      const int s = static_cast<int>(std::floor(static_cast<double>(xa) / N));
      const int jt = ((xb % N) + N) % N;
      torus[a] = xa - s * N;
      torus[b] = jt;
      // exact rational angle for the seam factor
      long long num = static_cast<long long>(p) * s * jt;
      num %= N;
      if (num < 0) num += N;
      angle += 2.0 * kPi * static_cast<double>(num) / N;
      const double za = static_cast<double>(d[a]) / N;
      const double zb = static_cast<double>(d[b]) / N;
      const double x0a = static_cast<double>(base[a]) / N;
      angle += -2.0 * kPi * p * x0a * zb - kPi * p * za * zb;
      Z[static_cast<std::size_t>(a)] = sp * za;
      Z[static_cast<std::size_t>(b)] = sp * zb;
    }
    samples.push_back({shape.index(torus), std::move(Z), exp_i(angle)});
  }

  // Pair selection.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t m = samples.size();
  constexpr std::size_t kMaxPairs = 10'000;
  if (m * m <= kMaxPairs) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) pairs.emplace_back(i, j);
    }
  } else {
    const auto origin = static_cast<std::size_t>(
        std::find_if(offsets.begin(), offsets.end(),
                     [](const GridPoint& d) { return d == GridPoint{0, 0, 0, 0}; }) -
        offsets.begin());
    pairs.emplace_back(origin, origin);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    while (pairs.size() < kMaxPairs) pairs.emplace_back(pick(rng), pick(rng));
  }

  const ModelKernelSpec spec = ModelKernelSpec::isotropic(n);
  const double scale = std::pow(static_cast<double>(p), -n);
  NearDiagonalResult result;
  result.pairs = pairs.size();
  for (const auto& [i, j] : pairs) {
    const Sample& x = samples[i];
    const Sample& y = samples[j];
    const std::complex<double> discrete = scale * x.phase * kernel(x.index, y.index) * std::conj(y.phase);
    const std::complex<double> model = model_P(spec, x.Z, y.Z);
    result.sup_error = std::max(result.sup_error, std::abs(discrete - model));
    result.magnitude_error =
        std::max(result.magnitude_error, std::abs(std::abs(discrete) - std::abs(model)));
  }
  return result;
}

}  // namespace qoplab
