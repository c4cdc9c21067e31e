#include <algorithm>
#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/theory.hpp"

namespace gplab {

RatePrediction predict_rates(double alpha, double beta, bool mu0_positive, double t,
                             const RateOptions& options) {
  if (!(alpha > 1.0)) throw DomainError("predict_rates: alpha must exceed 1");
  if (!(beta > 0.5)) throw DomainError("predict_rates: beta must exceed 1/2");
  if (!(t < 1.0)) throw DomainError("predict_rates: t must be below 1");

  RatePrediction out;
  out.alpha = alpha;
  out.beta = beta;
  out.mu0_positive = mu0_positive;
  out.t = t;
  if (mu0_positive) {
    out.exp_nsc = 1.0;
    out.exp_gen = 0.0;
    out.exp_mse = 0.0;
    out.constant_gen = options.mu0 * options.mu0 / (2.0 * options.sigma2);
    out.constant_mse = options.mu0 * options.mu0;
    return out;
  }
  // beta = +inf sends every target term to -inf, leaving the noise terms.
  const double target_term = (1.0 - 2.0 * beta) * (1.0 - t) / alpha;
  out.exp_nsc = std::max(1.0 / alpha, (1.0 - 2.0 * beta) / alpha + 1.0);
  out.exp_gen = std::max((1.0 - alpha) * (1.0 - t) / alpha, target_term);
  out.exp_mse = options.noiseless ? target_term
                                  : std::max((1.0 - alpha - t) / alpha, target_term);
  return out;
}

}  // namespace gplab
