#include <algorithm>
#include <cmath>
#include <numeric>

#include "gplab/errors.hpp"
#include "gplab/lab.hpp"

namespace gplab {

SlopeFit fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                   std::size_t drop_head) {
  if (xs.size() != ys.size()) throw DomainError("fit_slope: xs and ys differ in length");
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> log_x, log_y;
  for (std::size_t k = drop_head; k < order.size(); ++k) {
    const double x = xs[order[k]];
    const double y = ys[order[k]];
    if (!(x > 0.0)) throw DomainError("fit_slope: x values must be positive");
    if (!(y > 0.0)) throw DomainError("fit_slope: y values must be positive");
    log_x.push_back(std::log(x));
    log_y.push_back(std::log(y));
  }
  if (log_x.size() < 3) throw InsufficientDataError("fit_slope: fewer than 3 points after drop_head");
  const LineFit line = least_squares(log_x, log_y);
  return SlopeFit{line.slope, line.slope_stderr, line.r_squared, log_x.size()};
}

}  // namespace gplab
