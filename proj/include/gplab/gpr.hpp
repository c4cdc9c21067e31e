#pragma once

// Exact Gaussian-process regression on S^1 and the per-dataset learning-curve
// functionals: normalized stochastic complexity, Bayesian generalization
// error, excess mean squared error and the kernel ridge equivalent.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gplab/kernels.hpp"
#include "gplab/targets.hpp"

namespace gplab {

struct Dataset {
  std::vector<AngularPoint> points;
  Eigen::VectorXd y;
  /// f evaluated at the inputs.
  Eigen::VectorXd f_values;
  double sigma_true2 = 0.0;
  std::shared_ptr<const Target> target;
};

/// Trained model. Immutable; concurrent prediction is safe.
struct PosteriorState {
  ZonalKernel kernel;
  std::vector<AngularPoint> points;
  /// Lower factor of K + (sigma_model2 + jitter) I.
  Eigen::MatrixXd lower;
  /// (K + sigma^2 I)^-1 y.
  Eigen::VectorXd dual;
  double sigma_model2 = 0.0;
  double jitter_used = 0.0;
  /// log det(K + (sigma_model2 + jitter) I).
  double log_det = 0.0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Throws SingularMatrixError once the jitter policy is exhausted.
PosteriorState fit(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                   const Eigen::VectorXd& y, double sigma_model2, const JitterPolicy& policy = {});
PosteriorState fit(const ZonalKernel& kernel, const Dataset& data, double sigma_model2,
                   const JitterPolicy& policy = {});

double posterior_mean(const PosteriorState& state, AngularPoint x);
/// k(x, x) - k_x^T (K + sigma^2 I)^-1 k_x, clamped at zero.
double posterior_var(const PosteriorState& state, AngularPoint x);

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};
Prediction predict(const PosteriorState& state, std::span<const AngularPoint> xs);

/// KL(N(mean1, var1) || N(mean2, var2)). Throws DomainError unless both variances are positive.
double kl_gaussian(double mean1, double var1, double mean2, double var2);

/// F0(D_n) = -log Z(D_n) + sum_i log q(y_i | x_i), with q = N(f, sigma_true2) and
/// Z the marginal likelihood under sigma_model2. Reduces to the closed form
/// 1/2 log det(I + K/s2) + y^T (K + s2 I)^-1 y / 2 - |y - f|^2 / (2 s2) when
/// both variances agree. NaN when sigma_true2 = 0.
double nsc(const PosteriorState& state, const Eigen::VectorXd& y, const Eigen::VectorXd& f_values,
           double sigma_true2);
double nsc(const PosteriorState& state, const Dataset& data);

/// Noise expectation of F0 for sigma_model = sigma_true = sigma:
/// 1/2 log det(I + K/s2) - 1/2 tr(I - (I + K/s2)^-1) + f^T (I + K/s2)^-1 f / (2 s2).
double expected_nsc(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                    const Eigen::VectorXd& f_values, double sigma2);

/// The same expectation split into its data-free and target parts, computed
/// through an eigendecomposition of K rather than a Cholesky factor.
struct NscDecomposition {
  double t1 = 0.0;
  double t2 = 0.0;
  [[nodiscard]] double total() const { return t1 + t2; }
};
NscDecomposition nsc_decomposition(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                                   const Eigen::VectorXd& f_values, double sigma2);

inline constexpr int kDefaultTestNodes = 2048;

/// theta_j = -pi + (j + 1/2) 2 pi / nodes.
std::vector<AngularPoint> quadrature_grid(int nodes);

struct GenErrorOptions {
  int quad_nodes = kDefaultTestNodes;
  /// Adds sigma_model2 to the predictive variance.
  bool predictive_noise = true;
};

/// Quadrature average over theta of KL(N(f, sigma_true2) || N(m, k + [sigma_model2])).
double bayes_gen_error(const PosteriorState& state, const Target& target, double sigma_true2,
                       const GenErrorOptions& options = {});

/// Quadrature average over theta of (m(theta) - f(theta))^2.
double excess_mse(const PosteriorState& state, const Target& target,
                  int quad_nodes = kDefaultTestNodes);

/// Both functionals from one prediction pass over the test grid.
struct TestErrors {
  double gen_error = 0.0;
  double excess_mse = 0.0;
};
TestErrors test_errors(const Prediction& on_grid, const Eigen::VectorXd& f_on_grid,
                       double sigma_model2, double sigma_true2, bool predictive_noise);

/// k(x, X) (K + n lambda I)^-1 y. Throws DomainError unless lambda_reg > 0.
double krr_predict(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                   const Eigen::VectorXd& y, double lambda_reg, AngularPoint x);

/// Both sides of E_{x',y'} F0(D_{n+1}) - F0(D_n) = G(D_n).
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  /// Standard error of the per-draw difference lhs - rhs.
  double diff_stderr = 0.0;
  std::size_t draws = 0;

  [[nodiscard]] double pooled_stderr() const;
};

/// f = 0 with every noise expectation taken in closed form. The left side
/// averages E_eps KL over the test grid; the right side differences
/// expected_nsc on n + 1 and n points.
IdentityCheck gen_error_identity_analytic(const ZonalKernel& kernel,
                                          std::span<const AngularPoint> points, double sigma2,
                                          int quad_nodes = 256);

/// Monte-Carlo version for an arbitrary target. Each draw resamples the noise
/// on the fixed inputs; E over y' at the test point is done in closed form by
/// refitting on n + 1 points.
IdentityCheck gen_error_identity_stochastic(const ZonalKernel& kernel,
                                            std::span<const AngularPoint> points,
                                            const Target& target, double sigma2, std::size_t draws,
                                            std::uint64_t seed, int quad_nodes = 256);

}  // namespace gplab
