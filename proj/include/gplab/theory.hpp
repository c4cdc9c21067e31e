#pragma once

// Predicted learning-curve exponents, the deterministic leading-order curves
// they summarize, and the power-law sum estimate used to derive them.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gplab/spectral.hpp"

namespace gplab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct RateOptions {
  double mu0 = 0.0;
  /// Base noise variance used for the Theta(1) constants.
  double sigma2 = 0.01;
  /// sigma_true = 0 removes the noise branch of the mean squared error.
  bool noiseless = false;
};

struct RatePrediction {
  double alpha = 0.0;
  double beta = kInfinity;
  bool mu0_positive = false;
  double t = 0.0;
  double exp_nsc = 0.0;
  /// 0 encodes a Theta(1) plateau.
  double exp_gen = 0.0;
  double exp_mse = 0.0;
  /// mu0^2 / (2 sigma^2) and mu0^2; NaN unless mu0_positive.
  double constant_gen = std::numeric_limits<double>::quiet_NaN();
  double constant_mse = std::numeric_limits<double>::quiet_NaN();
};

/// Requires alpha > 1, beta > 1/2 (may be +inf) and t < 1; throws DomainError.
RatePrediction predict_rates(double alpha, double beta, bool mu0_positive, double t = 0.0,
                             const RateOptions& options = {});

struct TheoryOptions {
  double sigma_model2 = 0.01;
  double sigma_true2 = 0.01;
  /// sigma_model^2(n) = sigma_model2 * n^t.
  double t = 0.0;
  /// Maximum tolerated eigenvalue mass beyond the resolved band, relative to lambda_1.
  double tail_tol = 1e-2;
  /// Frequencies up to this bound are added from the extrapolated spectral tail.
  int extension_frequency = 1 << 20;
};

struct TheoryCurve {
  std::vector<double> n_grid;
  std::vector<double> f0_det;
  std::vector<double> g_det;
  std::vector<double> m_det;
  std::size_t truncation = 0;
  double tail_bound = 0.0;
};

/// Leading-order normalized SC, Bayesian generalization error and excess MSE
/// obtained by replacing Phi^T Phi with n I. Throws TruncationError when the
/// spectrum's unresolved eigenvalue mass exceeds tail_tol * lambda_1.
TheoryCurve theory_curves(const Spectrum& spectrum, const TargetExpansion& expansion,
                          std::span<const double> n_grid, const TheoryOptions& options = {});

/// Geometric grid base^lo, ..., base^hi.
std::vector<double> power_grid(double base, int lo, int hi);

/// sum_{i=1}^{R} a1 i^-s1 / (1 + a2 m i^-s2)^s3, summed directly.
/// Throws DomainError for nonpositive constants or R > 1e8.
double powerlaw_sum(double a1, double a2, double s1, double s2, double s3, double m,
                    std::int64_t terms);

enum class PowerLawRegime {
  /// Theta(m^((1 - s1) / s2)) when s2 s3 > s1 - 1.
  head_dominated,
  /// Theta(m^-s3 log m) when s2 s3 = s1 - 1.
  logarithmic,
  /// Theta(m^-s3) when s2 s3 < s1 - 1.
  tail_dominated,
};

std::string to_string(PowerLawRegime regime);

/// Requires s1 > 1. Equality is decided with a 1e-12 relative tolerance.
PowerLawRegime classify_regime(double s1, double s2, double s3);

/// The predicted scaling of the regime evaluated at m (constants dropped).
double regime_scaling(PowerLawRegime regime, double s1, double s2, double s3, double m);

}  // namespace gplab
