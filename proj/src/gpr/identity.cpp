#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/gpr.hpp"
#include "gplab/philox.hpp"

namespace gplab {

double IdentityCheck::pooled_stderr() const {
  return std::sqrt(lhs_stderr * lhs_stderr + rhs_stderr * rhs_stderr);
}

namespace {

constexpr std::uint32_t kIdentityNoiseStream = 0x1d3u;

std::vector<AngularPoint> with_point(std::span<const AngularPoint> points, AngularPoint extra) {
  std::vector<AngularPoint> out(points.begin(), points.end());
  out.push_back(extra);
  return out;
}

struct RunningMean {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += static_cast<long double>(x) * x;
    ++count;
  }
  [[nodiscard]] double mean() const { return static_cast<double>(sum / count); }
  [[nodiscard]] double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const long double m = sum / count;
    const long double var = (sum_sq - count * m * m) / (count - 1);
    return static_cast<double>(std::sqrt(std::max(0.0L, var) / count));
  }
};

}  // namespace

IdentityCheck gen_error_identity_analytic(const ZonalKernel& kernel,
                                          std::span<const AngularPoint> points, double sigma2,
                                          int quad_nodes) {
  if (!(sigma2 > 0.0)) throw DomainError("identity check: sigma2 must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  const PosteriorState state = fit(kernel, points, Eigen::VectorXd::Zero(n), sigma2);
  const auto lower = state.lower.triangularView<Eigen::Lower>();
  const auto grid = quadrature_grid(quad_nodes);
  const Eigen::VectorXd zeros_n = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd zeros_n1 = Eigen::VectorXd::Zero(n + 1);
  const double base = expected_nsc(kernel, points, zeros_n, sigma2);

  long double lhs = 0.0L, rhs = 0.0L;
  for (const AngularPoint x : grid) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = kernel(x, points[static_cast<std::size_t>(i)]);
    lower.solveInPlace(v);
    const double k_bar = std::max(0.0, kernel.diagonal() - v.squaredNorm());
    const Eigen::VectorXd w = lower.transpose().solve(v);
    // m(x) = w^T eps, so E m^2 = sigma^2 |w|^2.
    const double mean_sq = sigma2 * w.squaredNorm();
    const double s = k_bar + sigma2;
    lhs += 0.5 * (std::log(s / sigma2) + (sigma2 + mean_sq) / s - 1.0);
    rhs += expected_nsc(kernel, with_point(points, x), zeros_n1, sigma2) - base;
  }
  IdentityCheck out;
  out.lhs = static_cast<double>(lhs / grid.size());
  out.rhs = static_cast<double>(rhs / grid.size());
  return out;
}

IdentityCheck gen_error_identity_stochastic(const ZonalKernel& kernel,
                                            std::span<const AngularPoint> points,
                                            const Target& target, double sigma2, std::size_t draws,
                                            std::uint64_t seed, int quad_nodes) {
  if (!(sigma2 > 0.0)) throw DomainError("identity check: sigma2 must be positive");
  if (draws < 2) throw DomainError("identity check: need at least two draws");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto grid = quadrature_grid(quad_nodes);
  const double sigma = std::sqrt(sigma2);
  const double log_sigma2 = std::log(sigma2);

  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = target(points[static_cast<std::size_t>(i)].theta());
  Eigen::VectorXd f_grid(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) f_grid[static_cast<Eigen::Index>(j)] = target(grid[j].theta());

  // Factors of K_{n+1} + sigma^2 I for every test point, shared by all draws.
  struct Augmented {
    Eigen::MatrixXd lower;
    double log_det;
    double inverse_last;
  };
  std::vector<Augmented> augmented;
  augmented.reserve(grid.size());
  for (const AngularPoint x : grid) {
    const auto extended = with_point(points, x);
    const GramMatrix k = gram(kernel, extended);
    CholeskyFactor factor = jittered_cholesky(k.entries, sigma2, kernel.diagonal());
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n + 1, n);
    factor.lower.triangularView<Eigen::Lower>().solveInPlace(e);
    augmented.push_back({std::move(factor.lower), factor.log_det, e.squaredNorm()});
  }

  RunningMean lhs, rhs, diff;
  Eigen::VectorXd y(n), y_ext(n + 1);
  for (std::size_t r = 0; r < draws; ++r) {
    const KeyedStream noise(seed, kIdentityNoiseStream, static_cast<std::uint32_t>(n),
                            static_cast<std::uint32_t>(r));
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = f[i] + sigma * noise.normal(static_cast<std::uint32_t>(i));
    }
    const PosteriorState state = fit(kernel, points, y, sigma2);
    const double noise_sq = (y - f).squaredNorm();
    const double base = nsc(state, y, f, sigma2);
    const double g = test_errors(predict(state, grid), f_grid, sigma2, sigma2, true).gen_error;

    long double increment = 0.0L;
    y_ext.head(n) = y;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Augmented& a = augmented[j];
      y_ext[n] = f_grid[static_cast<Eigen::Index>(j)];
      const double quad = a.lower.triangularView<Eigen::Lower>().solve(y_ext).squaredNorm();
      // E over y' ~ N(f(x'), sigma^2) of F0 on the augmented data.
      const double expected = 0.5 * a.log_det - 0.5 * static_cast<double>(n + 1) * log_sigma2 +
                              0.5 * quad + 0.5 * sigma2 * a.inverse_last -
                              noise_sq / (2.0 * sigma2) - 0.5;
      increment += expected - base;
    }
    const double rhs_r = static_cast<double>(increment / grid.size());
    lhs.add(g);
    rhs.add(rhs_r);
    diff.add(g - rhs_r);
  }
  IdentityCheck out;
  out.lhs = lhs.mean();
  out.rhs = rhs.mean();
  out.lhs_stderr = lhs.stderr_of_mean();
  out.rhs_stderr = rhs.stderr_of_mean();
  out.diff_stderr = diff.stderr_of_mean();
  out.draws = draws;
  return out;
}

}  // namespace gplab
