#include "qoplab/numerics.hpp"

#include <cmath>
#include <vector>

#include "qoplab/error.hpp"

namespace qoplab {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("least squares: size mismatch");
  if (x.size() < 2) throw Error("least squares: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("least squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LinearFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw Error("log-log fit needs at least three points");
  std::vector<double> lx, ly;
  for (const auto& [p, v] : points) {
    if (!(p > 0.0) || !(v > 0.0)) throw Error("cannot fit log of non-positive value");
    lx.push_back(std::log(p));
    ly.push_back(std::log(v));
  }
  return least_squares(lx, ly);
}

}  // namespace qoplab
