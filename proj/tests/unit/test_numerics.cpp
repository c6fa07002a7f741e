#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qoplab/error.hpp"
#include "qoplab/numerics.hpp"

using namespace qoplab;

TEST_SUITE("numerics") {
  TEST_CASE("exact power laws") {
    std::vector<std::pair<double, double>> inv, inv2;
    for (double p : {8.0, 16.0, 32.0, 64.0}) {
      inv.emplace_back(p, 3.0 / p);
      inv2.emplace_back(p, 3.0 / (p * p));
    }
    const auto a = fit_loglog_slope(inv);
    CHECK(a.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(a.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.intercept == doctest::Approx(std::log(3.0)));
    CHECK(fit_loglog_slope(inv2).slope == doctest::Approx(-2.0).epsilon(1e-12));
  }

  TEST_CASE("alternating perturbation") {
    std::vector<std::pair<double, double>> pts;
    int sign = 1;
    for (double p : {8.0, 16.0, 32.0, 64.0, 128.0}) {
      pts.emplace_back(p, (1.0 / p) * (1 + 0.05 * sign));
      sign = -sign;
    }
    CHECK(std::abs(fit_loglog_slope(pts).slope + 1.0) < 0.08);
  }

  TEST_CASE("linear least squares") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
  }

  TEST_CASE("bad input") {
    const std::vector<std::pair<double, double>> neg{{1, 1.0}, {2, -0.5}, {4, 0.25}};
    CHECK_THROWS_WITH_AS(fit_loglog_slope(neg), doctest::Contains("cannot fit log of non-positive value"), Error);
    const std::vector<std::pair<double, double>> zero{{1, 1.0}, {2, 0.0}, {4, 0.25}};
    CHECK_THROWS_WITH_AS(fit_loglog_slope(zero), doctest::Contains("cannot fit log of non-positive value"), Error);
    const std::vector<std::pair<double, double>> two{{1, 1.0}, {2, 0.5}};
    CHECK_THROWS_AS(fit_loglog_slope(two), Error);
    const std::vector<double> same{2, 2, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(least_squares(same, y), Error);
  }
}
