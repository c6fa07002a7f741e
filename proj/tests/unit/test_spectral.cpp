#include <cmath>
#include <vector>

#include "doctest.h"
#include "qoplab/error.hpp"
#include "qoplab/spectral.hpp"
#include "support.hpp"

using namespace qoplab;

namespace {

HermitianOperator renormalized(const ManifoldModel& m, int p) {
  return renormalize(assemble_bochner(m, assemble_phases(m, p)), compute_tau(m), p, Potential::zero(m));
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("dense and iterative paths agree") {
    const int p = 4;
    const auto m = build_model(ModelKind::kFlatTorus2, 32);
    const auto op = renormalized(m, p);
    EigenOptions dense, iter;
    dense.path = SolverPath::kDense;
    iter.path = SolverPath::kIterative;
    const auto a = eigendecompose(op, 12, dense);
    const auto b = eigendecompose(op, 12, iter);
    CHECK(a.path == SolverPath::kDense);
    CHECK(b.path == SolverPath::kIterative);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-8);
    CHECK(b.gram_defect() < 1e-9);
    CHECK(b.max_relative_residual(op) < 1e-9);

    const auto below = eigendecompose_below(op, 2 * std::numbers::pi * p, iter);
    CHECK(below.count() == p + 1);
    CHECK(below.eigenvalues.back() > 2 * std::numbers::pi * p);

    // a small block cuts the degenerate excited clusters; only the pairs up to the first
    // value above the ceiling have to converge
    iter.initial_count = 6;
    const auto cut = eigendecompose_below(op, 2 * std::numbers::pi * p, iter);
    REQUIRE(cut.count() == p + 1);
    for (std::size_t i = 0; i <= p; ++i) CHECK(std::abs(cut.eigenvalues[i] - a.eigenvalues[i]) < 1e-8);
    CHECK(cut.max_relative_residual(op) < 1e-9);
  }

  TEST_CASE("iteration cap raises ConvergenceError") {
    const auto m = build_model(ModelKind::kFlatTorus2, 24);
    EigenOptions o;
    o.path = SolverPath::kIterative;
    o.max_iterations = 1;
    o.tolerance = 1e-15;
    CHECK_THROWS_AS(eigendecompose(renormalized(m, 3), 6, o), ConvergenceError);
  }

  TEST_CASE("synthetic gap detection") {
    const double mu0 = 2 * testing::kPi;
    const std::vector<double> spec_example{0.1, 0.2, 50.0, 51.0};
    const auto e = detect_bound_cluster(spec_example, 25.0, 1);
    CHECK(e.bound_count == 2);
    CHECK(e.threshold == 25.0);

    const std::vector<double> clean{-0.1, 0.05, 0.2, 50.0, 51.0};
    const auto r = detect_bound_cluster(clean, mu0, 1);
    CHECK(r.bound_count == 3);
    CHECK(r.low_cluster_width == doctest::Approx(0.3));
    CHECK(r.lowest_eigenvalue == doctest::Approx(-0.1));
    CHECK(r.highest_bound == doctest::Approx(0.2));
    CHECK(r.next_eigenvalue == doctest::Approx(50.0));
    CHECK(r.gap_ratio == doctest::Approx(49.8 / 1.3));

    const std::vector<double> blurred{0.1, 1.0, 5.0, 7.0};
    CHECK_THROWS_WITH_AS(detect_bound_cluster(blurred, mu0, 1),
                         doctest::Contains("no spectral gap resolved (increase N or p)"), Error);
    const std::vector<double> none{7.0, 8.0};
    CHECK_THROWS_WITH_AS(detect_bound_cluster(none, mu0, 1),
                         doctest::Contains("no spectral gap resolved"), Error);
    const std::vector<double> truncated{0.1, 0.2};
    CHECK_THROWS_WITH_AS(detect_bound_cluster(truncated, mu0, 1),
                         doctest::Contains("no spectral gap resolved"), Error);
  }

  TEST_CASE("Riemann-Roch numbers") {
    CHECK(expected_dim(build_model(ModelKind::kFlatTorus2, 8), 5) == 5);
    CHECK(expected_dim(build_model(ModelKind::kFlatTorus4, 4), 3) == 9);
    CHECK(expected_dim(build_model(ModelKind::kConformalTorus2, 8, cosine_conformal_factor(8, 0.1)), 7) == 7);
  }

  TEST_CASE("projector kernel identities") {
    for (int p : {3, 6}) {
      const auto inst = testing::flat_instance(p, 24);
      REQUIRE(inst.kernel);
      const auto& P = *inst.kernel;
      CHECK(P.dim() == static_cast<std::size_t>(p));
      CHECK(P.weighted_trace() == doctest::Approx(p).epsilon(1e-10));
      CHECK(P.idempotence_residual() < 1e-9);
      CHECK(P.hermiticity_defect() < 1e-12);
      // diagonal is constant up to the translation structure and averages to p
      double mean = 0.0;
      for (std::size_t x = 0; x < P.size(); ++x) mean += P.diagonal(x) * P.weights()[x];
      CHECK(mean == doctest::Approx(p).epsilon(1e-10));
      CHECK(std::abs(P(5, 5) - P.diagonal(5)) < 1e-12);
      CHECK(std::abs(P.row(5)[9] - P(5, 9)) < 1e-12);
    }
  }

  TEST_CASE("conformal projector trace and gap") {
    const auto inst = testing::conformal_instance(4, 32, 0.3);
    REQUIRE(inst.gap);
    CHECK(inst.gap->bound_count == 4);
    CHECK(inst.kernel->weighted_trace() == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(inst.kernel->idempotence_residual() < 1e-9);
  }

  TEST_CASE("flat gap at p = 8") {
    const auto inst = testing::flat_instance(8, 32);
    REQUIRE(inst.gap);
    CHECK(inst.gap->bound_count == 8);
    CHECK(inst.gap->threshold == doctest::Approx(2 * testing::kPi * 8));
    CHECK(inst.gap->low_cluster_width <= 0.5);
    CHECK(inst.gap->next_eigenvalue >= 3 * testing::kPi * 8);
  }

  TEST_CASE("under-resolved grid reports an unresolved gap") {
    const auto inst = testing::flat_instance(64, 16);
    CHECK_FALSE(inst.gap.has_value());
    CHECK_FALSE(inst.kernel.has_value());
    CHECK(inst.gap_error.find("no spectral gap resolved") != std::string::npos);
  }
}
