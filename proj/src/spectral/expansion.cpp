#include <cmath>
#include <numbers>

#include "gplab/errors.hpp"
#include "gplab/philox.hpp"
#include "gplab/spectral.hpp"
#include "gplab/theory.hpp"

namespace gplab {

namespace {

constexpr std::uint32_t kPriorStream = 0x9e37u;

FrequencyClass parity_class(int parity) {
  return parity == 0 ? FrequencyClass::even : FrequencyClass::odd;
}

double series_coefficient(const FourierSeries& series, const Mode& mode) {
  switch (mode.parity) {
    case Parity::constant:
      return series.constant;
    case Parity::cosine:
      return series.cos_coefficient(mode.frequency) / std::numbers::sqrt2;
    case Parity::sine:
      return series.sin_coefficient(mode.frequency) / std::numbers::sqrt2;
  }
  return 0.0;
}

TargetExpansion analytic_expansion(const Target& target, const Spectrum& spectrum) {
  const FourierSeries& series = *target.series();
  TargetExpansion out;
  out.resolved_frequency = spectrum.resolved_frequency;
  out.series = series;
  out.mu.reserve(spectrum.modes.size());
  for (const auto& mode : spectrum.modes) out.mu.push_back(series_coefficient(series, mode));

  double null_energy = 0.0;
  for (int m = 0; m <= spectrum.resolved_frequency; ++m) {
    if (spectrum.is_null_frequency(m)) null_energy += series.energy(m);
  }
  for (int parity = 0; parity < 2; ++parity) {
    const double tail = series.tail_energy(spectrum.resolved_frequency, parity_class(parity));
    if (spectrum.tail[static_cast<std::size_t>(parity)].in_span) {
      out.tail_energy += tail;
    } else {
      null_energy += tail;
    }
  }
  out.mu0 = std::sqrt(std::max(0.0, null_energy));

  double l2_sq = 0.0;
  if (target.l2_norm_sq()) {
    l2_sq = *target.l2_norm_sq();
  } else {
    l2_sq = series.energy(0) + series.tail_energy(0, FrequencyClass::all);
  }
  out.l2_norm = std::sqrt(l2_sq);
  return out;
}

TargetExpansion quadrature_expansion(const Target& target, const Spectrum& spectrum,
                                     int quad_nodes) {
  if (quad_nodes < 4 * std::max(spectrum.resolved_frequency, 1)) {
    throw QuadratureResolutionError("target_expansion: need quad_nodes >= 4 * resolved frequency");
  }
  const auto nodes = static_cast<std::size_t>(quad_nodes);
  const double h = kTwoPi / static_cast<double>(nodes);
  std::vector<double> theta(nodes), values(nodes);
  long double l2 = 0.0L;
  for (std::size_t j = 0; j < nodes; ++j) {
    theta[j] = -kPi + (static_cast<double>(j) + 0.5) * h;
    values[j] = target(theta[j]);
    l2 += static_cast<long double>(values[j]) * values[j];
  }
  const double l2_sq = static_cast<double>(l2 / static_cast<long double>(nodes));

  TargetExpansion out;
  out.resolved_frequency = spectrum.resolved_frequency;
  out.mu.reserve(spectrum.modes.size());
  double captured = 0.0;
  for (const auto& mode : spectrum.modes) {
    long double sum = 0.0L;
    for (std::size_t j = 0; j < nodes; ++j) {
      sum += static_cast<long double>(values[j]) * eigenfunction_value(mode, theta[j]);
    }
    const double mu = static_cast<double>(sum / static_cast<long double>(nodes));
    out.mu.push_back(mu);
    captured += mu * mu;
  }
  out.mu0 = std::sqrt(std::max(0.0, l2_sq - captured));
  out.l2_norm = std::sqrt(l2_sq);
  return out;
}

}  // namespace

bool TargetExpansion::mu0_positive() const { return mu0 > 1e-6 * l2_norm; }

TargetExpansion target_expansion(const Target& target, const Spectrum& spectrum, int quad_nodes) {
  if (target.series()) return analytic_expansion(target, spectrum);
  return quadrature_expansion(target, spectrum, quad_nodes);
}

double estimate_beta(const TargetExpansion& expansion) {
  std::vector<double> log_p, log_mu;
  for (std::size_t i = 3; i < expansion.mu.size(); ++i) {
    const double magnitude = std::abs(expansion.mu[i]);
    if (magnitude > 1e-10) {
      log_p.push_back(std::log(static_cast<double>(i + 1)));
      log_mu.push_back(std::log(magnitude));
    }
  }
  if (log_p.size() < 3) return kInfinity;
  return -least_squares(log_p, log_mu).slope;
}

TargetExpansion sample_target_from_prior(const Spectrum& spectrum, std::size_t truncation,
                                         std::uint64_t seed) {
  if (truncation > spectrum.positive_count) {
    throw DomainError("sample_target_from_prior: truncation exceeds positive eigenvalue count");
  }
  const KeyedStream stream(seed, kPriorStream, 0, 0);
  TargetExpansion out;
  out.resolved_frequency = spectrum.resolved_frequency;
  out.mu.assign(spectrum.modes.size(), 0.0);
  double l2 = 0.0;
  for (std::size_t p = 0; p < truncation; ++p) {
    out.mu[p] = std::sqrt(spectrum.modes[p].eigenvalue) * stream.normal(static_cast<std::uint32_t>(p));
    l2 += out.mu[p] * out.mu[p];
  }
  out.l2_norm = std::sqrt(l2);

  FourierSeries series;
  for (std::size_t p = 0; p < truncation; ++p) {
    const Mode& mode = spectrum.modes[p];
    if (mode.parity == Parity::constant) {
      series.constant = out.mu[p];
    } else {
      series.terms.push_back({mode.frequency,
                              mode.parity == Parity::cosine ? Trig::cosine : Trig::sine,
                              std::numbers::sqrt2 * out.mu[p]});
    }
  }
  out.series = std::move(series);
  return out;
}

Target target_from_expansion(const Spectrum& spectrum, const TargetExpansion& expansion,
                             std::string name) {
  FourierSeries series;
  for (std::size_t p = 0; p < expansion.mu.size() && p < spectrum.modes.size(); ++p) {
    const Mode& mode = spectrum.modes[p];
    const double mu = expansion.mu[p];
    if (mu == 0.0) continue;
    if (mode.parity == Parity::constant) {
      series.constant = mu;
    } else {
      series.terms.push_back({mode.frequency,
                              mode.parity == Parity::cosine ? Trig::cosine : Trig::sine,
                              std::numbers::sqrt2 * mu});
    }
  }
  return targets::from_series(std::move(name), std::move(series));
}

}  // namespace gplab
