#include "qoplab/geometry.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "qoplab/error.hpp"

namespace qoplab {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_same_shape(const GridShape& a, const GridShape& b) {
  if (!(a == b)) throw Error("grid mismatch");
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFlatTorus2: return "flat-torus-2";
    case ModelKind::kFlatTorus4: return "flat-torus-4";
    case ModelKind::kConformalTorus2: return "conformal-torus-2";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "flat-torus-2") return ModelKind::kFlatTorus2;
  if (text == "flat-torus-4") return ModelKind::kFlatTorus4;
  if (text == "conformal-torus-2") return ModelKind::kConformalTorus2;
  throw Error("unknown model kind: " + std::string(text));
}

std::string_view to_string(SymplecticForm form) {
  return form == SymplecticForm::kMetric ? "metric" : "coordinate";
}

SymplecticForm parse_symplectic_form(std::string_view text) {
  if (text == "coordinate") return SymplecticForm::kCoordinate;
  if (text == "metric") return SymplecticForm::kMetric;
  throw Error("unknown symplectic form: " + std::string(text));
}

ManifoldModel build_model(ModelKind kind, int grid,
                          std::optional<std::vector<double>> conformal_factor,
                          SymplecticForm form) {
  if (grid < 4 || grid % 2 != 0) {
    throw Error("invalid grid: N must be an even integer >= 4, got " + std::to_string(grid));
  }
  ManifoldModel model;
  model.kind_ = kind;
  model.shape_ = GridShape{grid, kind == ModelKind::kFlatTorus4 ? 4 : 2};
  const std::size_t size = model.shape_.size();
  const int n = model.complex_dim();

  if (kind == ModelKind::kConformalTorus2) {
    if (!conformal_factor) throw Error("invalid conformal factor: required for conformal-torus-2");
    if (conformal_factor->size() != size) {
      throw Error("invalid conformal factor: expected " + std::to_string(size) + " samples");
    }
    for (double v : *conformal_factor) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error("invalid conformal factor: samples must be positive");
      }
    }
    model.lambda_ = std::move(*conformal_factor);
    model.form_ = form;
  } else {
    if (conformal_factor) throw Error("invalid conformal factor: flat models take none");
    if (form != SymplecticForm::kCoordinate) {
      throw Error("invalid conformal factor: flat models use the coordinate symplectic form");
    }
    model.lambda_.assign(size, 1.0);
  }

  const double cell = std::pow(static_cast<double>(grid), -2.0 * n);
  model.weights_.resize(size);
  // Pairwise-free accumulation in long double keeps the flat total at 1 exactly.
  long double total = 0.0L;
  for (std::size_t i = 0; i < size; ++i) {
    model.weights_[i] = std::pow(model.lambda_[i], n) * cell;
    total += static_cast<long double>(model.weights_[i]);
  }
  model.total_volume_ = static_cast<double>(total);

  if (model.form_ == SymplecticForm::kMetric && std::abs(model.total_volume_ - 1.0) > 1e-12) {
    throw Error("invalid conformal factor: metric symplectic form needs unit total volume");
  }
  return model;
}

std::vector<double> cosine_conformal_factor(int grid, double amplitude) {
  std::vector<double> lambda(static_cast<std::size_t>(grid) * grid);
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      lambda[static_cast<std::size_t>(j) * grid + i] =
          1.0 + amplitude * std::cos(2.0 * std::numbers::pi * i / grid);
    }
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(const GridShape& shape, std::vector<std::complex<double>> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size()) throw Error("grid function size does not match grid");
}

GridFunction GridFunction::constant(const ManifoldModel& model, std::complex<double> value) {
  return GridFunction(model.shape(), std::vector<std::complex<double>>(model.size(), value));
}

GridFunction GridFunction::sample(
    const ManifoldModel& model, const std::function<std::complex<double>(const Position&)>& fn) {
  std::vector<std::complex<double>> v(model.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(model.position(i));
  return GridFunction(model.shape(), std::move(v));
}

GridFunction GridFunction::from_real(const ManifoldModel& model, std::span<const double> values) {
  return GridFunction(model.shape(), std::vector<std::complex<double>>(values.begin(), values.end()));
}

bool GridFunction::is_real(double tolerance) const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](const auto& v) { return std::abs(v.imag()) <= tolerance; });
}

std::vector<double> GridFunction::real_part() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](const auto& v) { return v.real(); });
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_same_shape(shape_, other.shape_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_same_shape(shape_, other.shape_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(std::complex<double> scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(std::complex<double> s, GridFunction a) { return a *= s; }

// ---------------------------------------------------------------------------
// Distances

namespace {

double flat_distance(const GridShape& shape, std::size_t x, std::size_t y) {
  double sq = 0.0;
  for (int a = 0; a < shape.real_dim; ++a) {
    const double d = static_cast<double>(shape.displacement(x, y, a)) / shape.grid;
    sq += d * d;
  }
  return std::sqrt(sq);
}

std::vector<double> conformal_distances(const ManifoldModel& model, std::size_t source) {
  static constexpr int kSteps[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                                        {-1, 1}, {-1, -1}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2},
                                        {2, 1},  {2, -1},  {-2, 1}, {-2, -1}};
  const GridShape& shape = model.shape();
  const auto lambda = model.conformal_factor();
  std::vector<double> dist(model.size(), std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    const GridPoint cu = shape.coords(u);
    for (const auto& step : kSteps) {
      const std::size_t v = shape.index({cu[0] + step[0], cu[1] + step[1], 0, 0});
      const double len = std::hypot(step[0], step[1]) / shape.grid;
      const double nd = d + len * std::sqrt(0.5 * (lambda[u] + lambda[v]));
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

double torus_distance(const ManifoldModel& model, std::size_t x, std::size_t y) {
  if (x == y) return 0.0;
  if (model.is_flat()) return flat_distance(model.shape(), x, y);
  return conformal_distances(model, x)[y];
}

std::vector<double> distances_from(const ManifoldModel& model, std::size_t x) {
  if (!model.is_flat()) return conformal_distances(model, x);
  std::vector<double> out(model.size());
  for (std::size_t y = 0; y < out.size(); ++y) out[y] = flat_distance(model.shape(), x, y);
  return out;
}

// ---------------------------------------------------------------------------
// C^m norm

double cm_norm(const ManifoldModel& model, const GridFunction& f, int m) {
  if (m < 0 || m > 2) throw Error("unsupported derivative order: " + std::to_string(m));
  check_same_shape(model.shape(), f.shape());
  const GridShape& shape = model.shape();
  const double h_inv = shape.grid;
  const auto at = [&](std::size_t x, int a, int sa, int b, int sb) {
    std::size_t y = shape.shift(x, a, sa);
    if (sb != 0) y = shape.shift(y, b, sb);
    return f[y];
  };

  double best = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    best = std::max(best, std::abs(f[x]));
    if (m < 1) continue;
    for (int a = 0; a < shape.real_dim; ++a) {
      const auto d1 = (at(x, a, 1, a, 0) - at(x, a, -1, a, 0)) * (0.5 * h_inv);
      best = std::max(best, std::abs(d1));
      if (m < 2) continue;
      for (int b = a; b < shape.real_dim; ++b) {
        std::complex<double> d2;
        if (a == b) {
          d2 = (at(x, a, 1, a, 0) - 2.0 * f[x] + at(x, a, -1, a, 0)) * (h_inv * h_inv);
        } else {
          d2 = (at(x, a, 1, b, 1) - at(x, a, 1, b, -1) - at(x, a, -1, b, 1) + at(x, a, -1, b, -1)) *
               (0.25 * h_inv * h_inv);
        }
        best = std::max(best, std::abs(d2));
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Fourier analysis

namespace {

std::vector<std::complex<double>> run_dft(const GridShape& shape,
                                          std::span<const std::complex<double>> in, int sign) {
  std::vector<std::complex<double>> input(in.begin(), in.end());
  std::vector<std::complex<double>> out(in.size());
  std::vector<int> dims(static_cast<std::size_t>(shape.real_dim), shape.grid);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(shape.real_dim, dims.data(), reinterpret_cast<fftw_complex*>(input.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

GridPoint FourierCoefficients::frequency(std::size_t i) const {
  GridPoint k = shape_.coords(i);
  for (int a = 0; a < shape_.real_dim; ++a) {
    if (k[a] >= shape_.grid / 2) k[a] -= shape_.grid;
  }
  return k;
}

FourierCoefficients fourier_coefficients(const ManifoldModel& model, const GridFunction& f) {
  if (!model.is_flat()) throw Error("Fourier analysis requires flat model");
  check_same_shape(model.shape(), f.shape());
  auto raw = run_dft(model.shape(), f.values(), FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(model.size());
  for (auto& v : raw) v *= scale;
  return FourierCoefficients(model.shape(), std::move(raw));
}

GridFunction inverse_fourier(const ManifoldModel& model, const FourierCoefficients& c) {
  if (!model.is_flat()) throw Error("Fourier analysis requires flat model");
  check_same_shape(model.shape(), c.shape());
  return GridFunction(model.shape(), run_dft(model.shape(), c.raw(), FFTW_BACKWARD));
}

}  // namespace qoplab
