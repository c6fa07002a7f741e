#pragma once

#include <span>
#include <utility>

namespace qoplab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 points with
/// distinct x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Least squares on (log p, log value). Needs >= 3 points; throws
/// "cannot fit log of non-positive value" on p <= 0 or value <= 0.
LinearFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace qoplab
