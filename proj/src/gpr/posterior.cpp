#include <algorithm>
#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/gpr.hpp"

namespace gplab {

PosteriorState fit(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                   const Eigen::VectorXd& y, double sigma_model2, const JitterPolicy& policy) {
  if (points.empty()) throw DomainError("fit: need at least one point");
  if (static_cast<std::size_t>(y.size()) != points.size()) {
    throw DomainError("fit: points and outputs differ in length");
  }
  if (!(sigma_model2 >= 0.0)) throw DomainError("fit: sigma_model2 must be nonnegative");
  const GramMatrix k = gram(kernel, points);
  CholeskyFactor factor = jittered_cholesky(k.entries, sigma_model2, kernel.diagonal(), policy);
  Eigen::VectorXd dual = factor.lower.triangularView<Eigen::Lower>().solve(y);
  factor.lower.triangularView<Eigen::Lower>().transpose().solveInPlace(dual);
  return PosteriorState{kernel,
                        std::vector<AngularPoint>(points.begin(), points.end()),
                        std::move(factor.lower),
                        std::move(dual),
                        sigma_model2,
                        factor.jitter_used,
                        factor.log_det};
}

PosteriorState fit(const ZonalKernel& kernel, const Dataset& data, double sigma_model2,
                   const JitterPolicy& policy) {
  return fit(kernel, data.points, data.y, sigma_model2, policy);
}

double posterior_mean(const PosteriorState& state, AngularPoint x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < state.points.size(); ++i) {
    sum += state.kernel(x, state.points[i]) * state.dual[static_cast<Eigen::Index>(i)];
  }
  return sum;
}

double posterior_var(const PosteriorState& state, AngularPoint x) {
  Eigen::VectorXd k(static_cast<Eigen::Index>(state.points.size()));
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    k[i] = state.kernel(x, state.points[static_cast<std::size_t>(i)]);
  }
  state.lower.triangularView<Eigen::Lower>().solveInPlace(k);
  return std::max(0.0, state.kernel.diagonal() - k.squaredNorm());
}

Prediction predict(const PosteriorState& state, std::span<const AngularPoint> xs) {
  Eigen::MatrixXd cross = cross_gram(state.kernel, state.points, xs);
  Prediction out;
  out.mean = cross.transpose() * state.dual;
  state.lower.triangularView<Eigen::Lower>().solveInPlace(cross);
  out.var = (state.kernel.diagonal() - cross.colwise().squaredNorm().array()).max(0.0).matrix();
  return out;
}

double kl_gaussian(double mean1, double var1, double mean2, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0)) throw DomainError("kl_gaussian: variances must be positive");
  const double d = mean1 - mean2;
  return 0.5 * (std::log(var2 / var1) + (var1 + d * d) / var2 - 1.0);
}

std::vector<AngularPoint> quadrature_grid(int nodes) {
  if (nodes < 1) throw DomainError("quadrature_grid: need at least one node");
  std::vector<AngularPoint> grid;
  grid.reserve(static_cast<std::size_t>(nodes));
  const double h = kTwoPi / nodes;
  for (int j = 0; j < nodes; ++j) grid.emplace_back(-kPi + (j + 0.5) * h);
  return grid;
}

double krr_predict(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                   const Eigen::VectorXd& y, double lambda_reg, AngularPoint x) {
  if (!(lambda_reg > 0.0)) throw DomainError("krr_predict: lambda_reg must be positive");
  const double n = static_cast<double>(points.size());
  const GramMatrix k = gram(kernel, points);
  const CholeskyFactor factor = jittered_cholesky(k.entries, n * lambda_reg, kernel.diagonal());
  const auto lower = factor.lower.triangularView<Eigen::Lower>();
  Eigen::VectorXd weights = lower.solve(y);
  lower.transpose().solveInPlace(weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += kernel(x, points[i]) * weights[static_cast<Eigen::Index>(i)];
  }
  return sum;
}

}  // namespace gplab
