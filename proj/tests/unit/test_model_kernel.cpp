#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qoplab/error.hpp"
#include "qoplab/harness/instance.hpp"
#include "qoplab/model_kernel.hpp"
#include "support.hpp"

using namespace qoplab;
using testing::kPi;

TEST_SUITE("model_kernel") {
  TEST_CASE("closed-form values") {
    const auto s = ModelKernelSpec::isotropic(1);
    const std::array<double, 2> zero{0, 0}, e1{1, 0}, z{0.3, -0.7};
    CHECK(std::abs(model_P(s, z, z) - 1.0) < 1e-15);
    CHECK(std::abs(model_P(s, zero, e1) - std::exp(-kPi / 2)) < 1e-15);
    CHECK(model_density(s, zero, e1) == doctest::Approx(std::exp(-kPi)));
    CHECK(model_density(s, z, z) == doctest::Approx(1.0));

    const ModelKernelSpec s4{1, {4 * kPi}};
    CHECK(model_density(s4, zero, e1) == doctest::Approx(0.0018674).epsilon(1e-4));

    // |P(Z, Z')| = exp(-a |z - z'|^2 / 4) for any pair
    const std::array<double, 2> w{-0.2, 0.5};
    const double d2 = std::pow(0.3 + 0.2, 2) + std::pow(-0.7 - 0.5, 2);
    CHECK(std::abs(model_P(s, z, w)) == doctest::Approx(std::exp(-kPi * d2 / 2)));
    // Hermitian symmetry
    CHECK(std::abs(model_P(s, z, w) - std::conj(model_P(s, w, z))) < 1e-15);
  }

  TEST_CASE("product structure in two complex dimensions") {
    const ModelKernelSpec s{2, {2 * kPi, 6 * kPi}};
    const std::array<double, 4> Z{0.1, 0.2, -0.3, 0.05}, W{-0.15, 0.4, 0.2, 0.1};
    const ModelKernelSpec a{1, {2 * kPi}}, b{1, {6 * kPi}};
    const auto lhs = model_P(s, Z, W);
    const auto rhs = model_P(a, std::span(Z).first(2), std::span(W).first(2)) *
                     model_P(b, std::span(Z).last(2), std::span(W).last(2));
    CHECK(std::abs(lhs - rhs) < 1e-15);
  }

  TEST_CASE("reproducing property by quadrature") {
    const std::array<double, 2> zero{0, 0};
    CHECK(model_reproducing_residual(ModelKernelSpec::isotropic(1), zero, zero, 4.0, 161) < 1e-8);
    CHECK(model_reproducing_residual(ModelKernelSpec{1, {4 * kPi}}, zero, zero, 4.0, 161) < 1e-8);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 3; ++t) {
      std::array<double, 4> Z{}, W{};
      for (auto& c : Z) c = u(rng);
      for (auto& c : W) c = u(rng);
      CHECK(model_reproducing_residual(ModelKernelSpec::isotropic(2), Z, W, 4.0, 81) < 1e-6);
      CHECK(model_reproducing_residual(ModelKernelSpec{2, {2 * kPi, 6 * kPi}}, Z, W, 4.0, 81) < 1e-6);
    }
    CHECK_THROWS_WITH_AS(model_reproducing_residual(ModelKernelSpec::isotropic(1), zero, zero, 1.0, 41),
                         doctest::Contains("quadrature window too small"), Error);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS((ModelKernelSpec{1, {-1.0}}.validate()), Error);
    CHECK_THROWS_AS((ModelKernelSpec{2, {1.0}}.validate()), Error);
    CHECK_NOTHROW(ModelKernelSpec::isotropic(2).validate());
  }

  TEST_CASE("normal frames") {
    const auto m = build_model(ModelKind::kFlatTorus2, 16);
    const auto f = make_normal_frame(m, m.index({4, 8, 0, 0}));
    CHECK(f.x0[0] == doctest::Approx(0.25));
    CHECK(f.x0[1] == doctest::Approx(0.5));
    const std::array<double, 2> zero{0, 0}, z{0.2, -0.1};
    CHECK(kappa(f, zero) == 1.0);
    CHECK(kappa(f, z) == 1.0);
    const auto c = build_model(ModelKind::kConformalTorus2, 16, cosine_conformal_factor(16, 0.2));
    CHECK_THROWS_WITH_AS(make_normal_frame(c, 0), doctest::Contains("not implemented"), Error);
  }

  TEST_CASE("discrete projector against the model near the diagonal") {
    const int p = 16;
    const auto inst = testing::flat_instance(p, 64);
    REQUIRE(inst.kernel);
    const auto frame = make_normal_frame(inst.model, inst.model.index({21, 12, 0, 0}));
    const double r = 0.5 / std::sqrt(static_cast<double>(p));
    const auto res = near_diagonal_error(*inst.kernel, inst.model, frame, p, r);
    CHECK(res.pairs > 100);
    CHECK(res.sup_error < 0.02);
    CHECK(res.magnitude_error <= res.sup_error + 1e-15);

    // the diagonal alone: P(x, x) = p
    const auto diag = near_diagonal_error(*inst.kernel, inst.model, frame, p, 0.5 / 64);
    CHECK(diag.sup_error < 1e-9);

    CHECK_THROWS_AS(near_diagonal_error(*inst.kernel, inst.model, frame, p, 0.6), Error);
    CHECK_THROWS_AS(near_diagonal_error(*inst.kernel, inst.model, frame, p, 0.0), Error);
  }

  TEST_CASE("four-torus kernel is the product of two-torus kernels") {
    const int p = 2, n = 8;
    harness::InstanceSpec spec;
    spec.grid = n;
    spec.p = p;
    const auto t2 = harness::solve_instance(spec, nullptr, testing::fast_options());
    spec.model = ModelKind::kFlatTorus4;
    const auto t4 = harness::solve_instance(spec, nullptr, testing::fast_options());
    REQUIRE(t2.kernel);
    REQUIRE(t4.kernel);
    CHECK(t4.kernel->dim() == 4);

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, t4.model.size() - 1);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      const auto x = pick(rng), y = pick(rng);
      const auto cx = t4.model.coords(x), cy = t4.model.coords(y);
      const auto a = (*t2.kernel)(t2.model.index({cx[0], cx[1], 0, 0}), t2.model.index({cy[0], cy[1], 0, 0}));
      const auto b = (*t2.kernel)(t2.model.index({cx[2], cx[3], 0, 0}), t2.model.index({cy[2], cy[3], 0, 0}));
      worst = std::max(worst, std::abs((*t4.kernel)(x, y) - a * b));
    }
    CHECK(worst < 1e-8);

    // |ab - AB| <= |a - A| |b| + |A| |b - B| with |A| <= 1 bounds the 4D error by the 2D one
    const double r = 1.5 / n;
    const auto e2 = near_diagonal_error(*t2.kernel, t2.model, make_normal_frame(t2.model, 0), p, r);
    const auto e4 = near_diagonal_error(*t4.kernel, t4.model, make_normal_frame(t4.model, 0), p, r);
    CHECK(e4.pairs == 33 * 33);
    CHECK(e4.sup_error <= e2.sup_error * (2 + e2.sup_error) + 1e-9);
    CHECK(e4.sup_error >= e2.sup_error - 1e-9);
  }
}
