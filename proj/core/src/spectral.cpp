#include "qoplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eigensolver.hpp"
#include "qoplab/error.hpp"

namespace qoplab {

std::string_view to_string(SolverPath path) {
  switch (path) {
    case SolverPath::kAuto: return "auto";
    case SolverPath::kDense: return "dense";
    case SolverPath::kIterative: return "iterative";
  }
  return "unknown";
}

namespace {

SolverPath resolve_path(const HermitianOperator& op, const EigenOptions& options) {
  if (options.path != SolverPath::kAuto) return options.path;
  return op.size() <= options.dense_limit ? SolverPath::kDense : SolverPath::kIterative;
}

// Unit-norm eigenvectors of M map to weighted-orthonormal natural-frame
// vectors v = D^{-1} u N^n = u / sqrt(w).
SpectralDecomposition to_natural(const HermitianOperator& op, detail::RawEigenpairs raw,
                                 SolverPath path) {
  SpectralDecomposition out;
  out.weights.assign(op.weights().begin(), op.weights().end());
  out.eigenvalues = std::move(raw.values);
  out.eigenvectors = std::move(raw.vectors);
  for (Eigen::Index i = 0; i < out.eigenvectors.rows(); ++i) {
    out.eigenvectors.row(i) /= std::sqrt(out.weights[static_cast<std::size_t>(i)]);
  }
  out.shape = op.shape();
  out.path = path;
  return out;
}

detail::IterativeSettings iterative_settings(const HermitianOperator& op,
                                             const EigenOptions& options) {
  detail::IterativeSettings s;
  s.shift = op.lower_bound() - 1.0;
  s.norm = op.norm_bound();
  s.tolerance = options.tolerance;
  s.max_iterations = options.max_iterations;
  return s;
}

}  // namespace

double SpectralDecomposition::gram_defect() const {
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                              static_cast<Eigen::Index>(weights.size()));
  const Eigen::MatrixXcd gram = eigenvectors.adjoint() * w.asDiagonal() * eigenvectors;
  return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double SpectralDecomposition::max_relative_residual(const HermitianOperator& op) const {
  const double norm = op.norm_bound();
  double worst = 0.0;
  std::vector<std::complex<double>> v(size());
  for (std::size_t j = 0; j < count(); ++j) {
    const auto col = eigenvectors.col(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = col[static_cast<Eigen::Index>(i)];
    const auto hv = op.apply(v);
    double sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      sq += weights[i] * std::norm(hv[i] - eigenvalues[j] * v[i]);
    }
    worst = std::max(worst, std::sqrt(sq) / norm);
  }
  return worst;
}

SpectralDecomposition eigendecompose(const HermitianOperator& op, std::optional<std::size_t> count,
                                     const EigenOptions& options) {
  if (!count) return to_natural(op, detail::dense_full(op.matrix()), SolverPath::kDense);
  if (*count > op.size()) throw Error("eigendecompose: count exceeds dimension");
  const SolverPath path = resolve_path(op, options);
  if (path == SolverPath::kDense) {
    return to_natural(op, detail::dense_lowest(op.matrix(), *count), path);
  }
  return to_natural(op, detail::iterative_lowest(op.matrix(), *count, iterative_settings(op, options)),
                    path);
}

SpectralDecomposition eigendecompose_below(const HermitianOperator& op, double ceiling,
                                           const EigenOptions& options) {
  const SolverPath path = resolve_path(op, options);
  const std::size_t n = op.size();
  if (path == SolverPath::kDense) {
    auto raw = detail::dense_window(op.matrix(), op.lower_bound() - 1.0, ceiling);
    if (raw.values.size() < n) raw = detail::dense_lowest(op.matrix(), raw.values.size() + 1);
    return to_natural(op, std::move(raw), path);
  }
  auto settings = iterative_settings(op, options);
  settings.ceiling = ceiling;
  std::size_t count = std::min(n, std::max<std::size_t>(1, options.initial_count));
  for (;;) {
    auto raw = detail::iterative_lowest(op.matrix(), count, settings);
    const auto above = std::find_if(raw.values.begin(), raw.values.end(),
                                    [&](double v) { return v > ceiling; });
    if (above != raw.values.end() || count == n) {
      const auto keep = std::min<std::size_t>(
          raw.values.size(), static_cast<std::size_t>(above - raw.values.begin()) + 1);
      raw.values.resize(keep);
      raw.vectors.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(keep));
      return to_natural(op, std::move(raw), path);
    }
    count = std::min(n, 2 * count);
  }
}

// ---------------------------------------------------------------------------

GapReport detect_bound_cluster(std::span<const double> eigenvalues, double mu0, int p) {
  GapReport report;
  report.threshold = mu0 * p;
  const auto first_above = std::find_if(eigenvalues.begin(), eigenvalues.end(),
                                        [&](double v) { return v >= report.threshold; });
  report.bound_count = static_cast<std::size_t>(first_above - eigenvalues.begin());
  if (report.bound_count == 0) {
    throw Error("no spectral gap resolved (increase N or p): no eigenvalue below threshold");
  }
  if (first_above == eigenvalues.end()) {
    throw Error("no spectral gap resolved (increase N or p): decomposition ends below threshold");
  }
  report.lowest_eigenvalue = eigenvalues.front();
  report.highest_bound = eigenvalues[report.bound_count - 1];
  report.low_cluster_width = report.highest_bound - report.lowest_eigenvalue;
  report.next_eigenvalue = *first_above;
  report.gap_ratio = (report.next_eigenvalue - report.highest_bound) / (report.low_cluster_width + 1.0);
  if (report.gap_ratio < kMinimumGapRatio) {
    throw Error("no spectral gap resolved (increase N or p): gap ratio " +
                std::to_string(report.gap_ratio));
  }
  return report;
}

GapReport detect_bound_cluster(const SpectralDecomposition& decomp, double mu0, int p) {
  return detect_bound_cluster(decomp.eigenvalues, mu0, p);
}

long long expected_dim(const ManifoldModel& model, int p) {
  if (p < 1) throw Error("flux must be a positive integer");
  long long d = 1;
  for (int j = 0; j < model.complex_dim(); ++j) d *= p;
  return d;
}

// ---------------------------------------------------------------------------

ProjectorKernel::ProjectorKernel(GridShape shape, Eigen::MatrixXcd bound_vectors,
                                 std::vector<double> weights)
    : shape_(shape), vectors_(std::move(bound_vectors)), weights_(std::move(weights)) {
  if (static_cast<std::size_t>(vectors_.rows()) != shape_.size() || weights_.size() != shape_.size()) {
    throw Error("projector kernel dimensions do not match grid");
  }
}

std::complex<double> ProjectorKernel::operator()(std::size_t x, std::size_t y) const {
  std::complex<double> s{};
  for (Eigen::Index i = 0; i < vectors_.cols(); ++i) {
    s += vectors_(static_cast<Eigen::Index>(x), i) * std::conj(vectors_(static_cast<Eigen::Index>(y), i));
  }
  return s;
}

double ProjectorKernel::diagonal(std::size_t x) const {
  return vectors_.row(static_cast<Eigen::Index>(x)).squaredNorm();
}

Eigen::VectorXcd ProjectorKernel::row(std::size_t x) const {
  return (vectors_ * vectors_.row(static_cast<Eigen::Index>(x)).adjoint()).conjugate();
}

Eigen::MatrixXcd ProjectorKernel::dense() const { return vectors_ * vectors_.adjoint(); }

double ProjectorKernel::weighted_trace() const {
  double t = 0.0;
  for (std::size_t x = 0; x < size(); ++x) t += weights_[x] * diagonal(x);
  return t;
}

double ProjectorKernel::idempotence_residual() const {
  // Row x of P W P is sum_z P(x,z) w_z P(z,.), evaluated from the kernel rows.
  const auto w = Eigen::Map<const Eigen::VectorXd>(weights_.data(), static_cast<Eigen::Index>(size()));
  const Eigen::MatrixXcd vt_conj = vectors_.conjugate();
  double worst = 0.0;
  for (std::size_t x = 0; x < size(); ++x) {
    const Eigen::VectorXcd r = row(x);
    const Eigen::VectorXcd q = vectors_.transpose() * r.cwiseProduct(w.cast<std::complex<double>>());
    const Eigen::VectorXcd composed = vt_conj * q;
    worst = std::max(worst, (composed - r).cwiseAbs().maxCoeff());
  }
  return worst;
}

double ProjectorKernel::hermiticity_defect() const {
  double worst = 0.0;
  const auto check = [&](std::size_t x, std::size_t y) {
    worst = std::max(worst, std::abs((*this)(x, y) - std::conj((*this)(y, x))));
  };
  if (size() <= 4096) {
    for (std::size_t x = 0; x < size(); ++x) {
      for (std::size_t y = x; y < size(); ++y) check(x, y);
    }
  } else {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, size() - 1);
    for (int k = 0; k < 1'000'000; ++k) check(pick(rng), pick(rng));
  }
  return worst;
}

ProjectorKernel projector_kernel(const SpectralDecomposition& decomp, const GapReport& report) {
  if (report.bound_count == 0 || report.bound_count > decomp.count()) {
    throw Error("no spectral gap resolved (increase N or p): bound states not in decomposition");
  }
  return ProjectorKernel(decomp.shape, decomp.eigenvectors.leftCols(static_cast<Eigen::Index>(report.bound_count)),
                         decomp.weights);
}

}  // namespace qoplab
