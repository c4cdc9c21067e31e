#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/theory.hpp"

namespace gplab {

std::vector<double> power_grid(double base, int lo, int hi) {
  std::vector<double> grid;
  for (int k = lo; k <= hi; ++k) grid.push_back(std::pow(base, k));
  return grid;
}

TheoryCurve theory_curves(const Spectrum& spectrum, const TargetExpansion& expansion,
                          std::span<const double> n_grid, const TheoryOptions& options) {
  if (spectrum.modes.empty()) throw TruncationError("theory_curves: empty spectrum");
  const double lambda1 = spectrum.modes.front().eigenvalue;
  TheoryCurve curve;
  curve.tail_bound = spectrum.tail_trace_bound();
  if (curve.tail_bound > options.tail_tol * lambda1) {
    throw TruncationError("theory_curves: unresolved eigenvalue mass " +
                          std::to_string(curve.tail_bound) + " exceeds tail_tol * lambda_1");
  }

  // (lambda, mu^2, multiplicity) triples: resolved modes, then the
  // extrapolated tail where each frequency carries a cosine and a sine mode.
  std::vector<double> lambda, mu_sq, multiplicity;
  for (std::size_t p = 0; p < spectrum.modes.size(); ++p) {
    lambda.push_back(spectrum.modes[p].eigenvalue);
    const double mu = p < expansion.mu.size() ? expansion.mu[p] : 0.0;
    mu_sq.push_back(mu * mu);
    multiplicity.push_back(1.0);
  }
  double residual_energy = expansion.mu0 * expansion.mu0;
  const int top = std::max(options.extension_frequency, spectrum.resolved_frequency);
  for (int m = spectrum.resolved_frequency + 1; m <= top; ++m) {
    const auto tail_lambda = spectrum.tail_eigenvalue(m);
    if (!tail_lambda) continue;
    lambda.push_back(*tail_lambda);
    mu_sq.push_back(expansion.series ? expansion.series->energy(m) : 0.0);
    multiplicity.push_back(2.0);
  }
  if (expansion.series) {
    for (int parity = 0; parity < 2; ++parity) {
      if (!spectrum.tail[static_cast<std::size_t>(parity)].in_span) continue;
      residual_energy += expansion.series->tail_energy(
          top, parity == 0 ? FrequencyClass::even : FrequencyClass::odd);
    }
  }
  for (const double k : multiplicity) curve.truncation += static_cast<std::size_t>(k);

  for (const double n : n_grid) {
    const double sigma2 = options.sigma_model2 * std::pow(n, options.t);
    double log_term = 0.0, noise_term = 0.0, bias_first = 0.0, bias_second = 0.0;
    for (std::size_t p = 0; p < lambda.size(); ++p) {
      const double x = n * lambda[p] / sigma2;
      const double shrink = 1.0 / (1.0 + x);
      log_term += multiplicity[p] * (std::log1p(x) - x * shrink);
      noise_term += multiplicity[p] * lambda[p] * x * shrink * shrink;
      bias_first += mu_sq[p] * shrink;
      bias_second += mu_sq[p] * shrink * shrink;
    }
    curve.n_grid.push_back(n);
    curve.f0_det.push_back(0.5 * log_term + n / (2.0 * sigma2) * (bias_first + residual_energy));
    curve.g_det.push_back((noise_term + bias_second + residual_energy) / (2.0 * sigma2));
    curve.m_det.push_back(options.sigma_true2 / sigma2 * noise_term + bias_second +
                          residual_energy);
  }
  return curve;
}

}  // namespace gplab
