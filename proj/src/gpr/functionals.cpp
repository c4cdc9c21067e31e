#include <cmath>
#include <limits>

#include "gplab/errors.hpp"
#include "gplab/gpr.hpp"

namespace gplab {

double nsc(const PosteriorState& state, const Eigen::VectorXd& y, const Eigen::VectorXd& f_values,
           double sigma_true2) {
  if (!(sigma_true2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(y.size());
  return 0.5 * state.log_det - 0.5 * n * std::log(sigma_true2) + 0.5 * y.dot(state.dual) -
         (y - f_values).squaredNorm() / (2.0 * sigma_true2);
}

double nsc(const PosteriorState& state, const Dataset& data) {
  return nsc(state, data.y, data.f_values, data.sigma_true2);
}

double expected_nsc(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                    const Eigen::VectorXd& f_values, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("expected_nsc: sigma2 must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  const GramMatrix k = gram(kernel, points);
  const CholeskyFactor factor = jittered_cholesky(k.entries, sigma2, kernel.diagonal());
  const auto lower = factor.lower.triangularView<Eigen::Lower>();
  // tr((K + s2 I)^-1) = |L^-1|_F^2.
  Eigen::MatrixXd inverse_lower = Eigen::MatrixXd::Identity(n, n);
  lower.solveInPlace(inverse_lower);
  const double trace_inverse = inverse_lower.squaredNorm();
  const Eigen::VectorXd whitened = lower.solve(f_values);
  const double log_det_normalized = factor.log_det - static_cast<double>(n) * std::log(sigma2);
  const double trace_term = static_cast<double>(n) - sigma2 * trace_inverse;
  return 0.5 * log_det_normalized - 0.5 * trace_term + 0.5 * whitened.squaredNorm();
}

NscDecomposition nsc_decomposition(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                                   const Eigen::VectorXd& f_values, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("nsc_decomposition: sigma2 must be positive");
  const GramMatrix k = gram(kernel, points);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.entries);
  const Eigen::ArrayXd x = eig.eigenvalues().array().max(0.0) / sigma2;
  const Eigen::ArrayXd projected = (eig.eigenvectors().transpose() * f_values).array();
  NscDecomposition out;
  out.t1 = 0.5 * (x.log1p() - x / (1.0 + x)).sum();
  out.t2 = (projected.square() / (1.0 + x)).sum() / (2.0 * sigma2);
  return out;
}

TestErrors test_errors(const Prediction& on_grid, const Eigen::VectorXd& f_on_grid,
                       double sigma_model2, double sigma_true2, bool predictive_noise) {
  const Eigen::Index q = f_on_grid.size();
  TestErrors out;
  out.excess_mse = (on_grid.mean - f_on_grid).squaredNorm() / static_cast<double>(q);
  if (!(sigma_true2 > 0.0)) {
    out.gen_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  long double sum = 0.0L;
  for (Eigen::Index j = 0; j < q; ++j) {
    const double var = on_grid.var[j] + (predictive_noise ? sigma_model2 : 0.0);
    sum += kl_gaussian(f_on_grid[j], sigma_true2, on_grid.mean[j], var);
  }
  out.gen_error = static_cast<double>(sum / static_cast<long double>(q));
  return out;
}

namespace {

Eigen::VectorXd target_on(const Target& target, std::span<const AngularPoint> grid) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = target(grid[static_cast<std::size_t>(j)].theta());
  return f;
}

}  // namespace

double bayes_gen_error(const PosteriorState& state, const Target& target, double sigma_true2,
                       const GenErrorOptions& options) {
  const auto grid = quadrature_grid(options.quad_nodes);
  return test_errors(predict(state, grid), target_on(target, grid), state.sigma_model2,
                     sigma_true2, options.predictive_noise)
      .gen_error;
}

double excess_mse(const PosteriorState& state, const Target& target, int quad_nodes) {
  const auto grid = quadrature_grid(quad_nodes);
  Eigen::VectorXd mean = cross_gram(state.kernel, grid, state.points) * state.dual;
  return (mean - target_on(target, grid)).squaredNorm() / static_cast<double>(grid.size());
}

}  // namespace gplab
