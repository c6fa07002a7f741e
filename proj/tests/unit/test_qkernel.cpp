#include <cmath>
#include <random>

#include "doctest.h"
#include "qoplab/error.hpp"
#include "qoplab/qkernel.hpp"
#include "support.hpp"

using namespace qoplab;
using testing::kPi;

TEST_SUITE("qkernel") {
  TEST_CASE("heat multiplier closed form") {
    CHECK(heat_multiplier({0, 0, 0, 0}, 16) == 1.0);
    CHECK(heat_multiplier({1, 0, 0, 0}, kPi) == doctest::Approx(std::exp(-1.0)));
    CHECK(heat_multiplier({1, 1, 0, 0}, 16) == doctest::Approx(0.67510).epsilon(1e-4));
  }

  TEST_CASE("flat torus, p = 16: constants, multipliers, rate") {
    const auto inst = testing::flat_instance(16, 32);
    REQUIRE(inst.kernel);
    const auto q = build_q(*inst.kernel, inst.model);
    CHECK(q.R_p() == doctest::Approx(16.0));
    CHECK(q.reproducing_defect() < 1e-9);

    const auto one = apply_q(q, GridFunction::constant(inst.model, 1.0));
    for (std::size_t x = 0; x < one.size(); ++x) CHECK(std::abs(one[x] - 1.0) < 1e-9);
    CHECK(rate_error(q, inst.model, GridFunction::constant(inst.model, 1.0), 0) < 1e-9);

    const auto table = q_multipliers(q, inst.model, 3);
    CHECK(table.at({0, 0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(table.at({1, 0, 0, 0}) - std::exp(-kPi / 16)) < 2e-2);
    CHECK(std::abs(table.at({2, 1, 0, 0}) - std::exp(-5 * kPi / 16)) < 2e-2);
    CHECK(table.invariance_defect < 1e-6);
    CHECK_THROWS_AS(table.at({9, 0, 0, 0}), Error);

    const auto cosx = GridFunction::sample(inst.model, [](const Position& x) { return std::cos(2 * kPi * x[0]); });
    const double oracle = 1 - std::exp(-kPi / 16);
    CHECK(rate_error(q, inst.model, cosx, 0) == doctest::Approx(oracle).epsilon(0.15));
    // Q acts on a single mode by its multiplier, so the C^1 error is the C^0 error times the mode's derivative
    CHECK(rate_error(q, inst.model, cosx, 1) ==
          doctest::Approx(rate_error(q, inst.model, cosx, 0) * cm_norm(inst.model, cosx, 1)).epsilon(1e-6));

    CHECK_THROWS_WITH_AS(q_multipliers(q, inst.model, 16), doctest::Contains("kmax"), Error);
  }

  TEST_CASE("rate at p = 64 shrinks like 1/p") {
    const auto inst = testing::flat_instance(64, 64);
    REQUIRE(inst.kernel);
    const auto q = build_q(*inst.kernel, inst.model);
    const auto cosx = GridFunction::sample(inst.model, [](const Position& x) { return std::cos(2 * kPi * x[0]); });
    CHECK(rate_error(q, inst.model, cosx, 0) == doctest::Approx(1 - std::exp(-kPi / 64)).epsilon(0.15));
  }

  TEST_CASE("Q is self-adjoint and positive on the weighted space") {
    const auto inst = testing::flat_instance(6, 24);
    const auto q = build_q(*inst.kernel, inst.model);
    const auto K = q.dense();
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12 * K.cwiseAbs().maxCoeff());
    CHECK(K.minCoeff() >= 0.0);
    const auto row = q.row(7);
    for (Eigen::Index y = 0; y < row.size(); ++y) CHECK(row[y] == doctest::Approx(K(7, y)));
  }

  TEST_CASE("conformal constants follow the diagonal") {
    const auto inst = testing::conformal_instance(4, 32, 0.3);
    REQUIRE(inst.kernel);
    const auto q = build_q(*inst.kernel, inst.model);
    const auto one = apply_q(q, GridFunction::constant(inst.model, 1.0));
    double spread = 0.0;
    for (std::size_t x = 0; x < one.size(); ++x) {
      CHECK(std::abs(one[x] - inst.kernel->diagonal(x) / q.R_p()) < 1e-9);
      spread = std::max(spread, std::abs(one[x] - one[0]));
    }
    CHECK(spread > 1e-3);

    CHECK_THROWS_WITH_AS(q_multipliers(q, inst.model, 2), doctest::Contains("multiplier analysis requires flat model"),
                         Error);
    const auto cosx = GridFunction::sample(inst.model, [](const Position& x) { return std::cos(2 * kPi * x[0]); });
    CHECK_NOTHROW(rate_error(q, inst.model, cosx, 0));
    CHECK_THROWS_AS(rate_error(q, inst.model, cosx, 1), Error);
    CHECK_THROWS_AS(offdiag_profile(*inst.kernel, inst.model, 0, 0.3), Error);
  }

  TEST_CASE("a kernel that is not translation invariant is rejected") {
    const auto m = build_model(ModelKind::kFlatTorus2, 16);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd v(m.size(), 2);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) = {g(rng), g(rng)};
    }
    const std::vector<double> w(m.weights().begin(), m.weights().end());
    const QOperator q(ProjectorKernel(m.shape(), v, w), m.total_volume());
    CHECK_THROWS_WITH_AS(q_multipliers(q, m, 2), doctest::Contains("kernel not translation invariant"), Error);
  }

  TEST_CASE("off-diagonal profile decays like exp(-pi p d^2 / 2)") {
    const int p = 16;
    const auto inst = testing::flat_instance(p, 64);
    const auto prof = offdiag_profile(*inst.kernel, inst.model, 0, 0.8);
    REQUIRE(prof.size() > 10);
    CHECK(prof.front().distance == 0.0);
    CHECK(prof.front().abs_P == doctest::Approx(p).epsilon(1e-9));
    for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i].distance > prof[i - 1].distance);
    // lattice vectors of equal length differ only by lattice anisotropy
    for (const auto& b : prof) CHECK(b.spread < 5e-3 * p);

    // inside the injectivity radius images do not interfere
    const double r = 1 / std::sqrt(static_cast<double>(p));
    const auto fit = fit_decay(prof, p, r, 2 * r);
    CHECK(fit.slope == doctest::Approx(-kPi / 2).epsilon(0.05));
  }

  TEST_CASE("decay fit skips round-off zeros") {
    const double p = 16;
    std::vector<ProfileBin> bins;
    for (int i = 0; i <= 20; ++i) {
      ProfileBin b;
      b.distance = 0.04 * i;
      b.abs_P = p * std::exp(-kPi * p * b.distance * b.distance / 2);
      bins.push_back(b);
    }
    bins[12].abs_P = 3e-16;  // an image-interference zero
    bins[13].abs_P = 0.0;
    const auto fit = fit_decay(bins, p, 0.2, 0.8);
    CHECK(fit.slope == doctest::Approx(-kPi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(fit_decay(bins, p, 0.5, 0.55), Error);
  }
}
