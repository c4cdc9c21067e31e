#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "gplab/errors.hpp"
#include "gplab/spectral.hpp"

namespace gplab {

std::string to_string(Parity parity) {
  switch (parity) {
    case Parity::constant:
      return "constant";
    case Parity::cosine:
      return "cosine";
    case Parity::sine:
      return "sine";
  }
  return "?";
}

double eigenfunction_value(const Mode& mode, double theta) {
  switch (mode.parity) {
    case Parity::constant:
      return 1.0;
    case Parity::cosine:
      return std::numbers::sqrt2 * std::cos(mode.frequency * theta);
    case Parity::sine:
      return std::numbers::sqrt2 * std::sin(mode.frequency * theta);
  }
  return 0.0;
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) {
    throw InsufficientDataError("least_squares needs at least two paired points");
  }
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw InsufficientDataError("least_squares: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  const double rss = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

bool Spectrum::is_null_frequency(int m) const {
  return m <= max_frequency && m >= 0 &&
         frequency_eigenvalues[static_cast<std::size_t>(m)] < kNullEigenvalueThreshold * kappa0;
}

bool Spectrum::frequency_in_span(int m) const {
  if (m <= resolved_frequency) return !is_null_frequency(m);
  return tail[static_cast<std::size_t>(m % 2)].in_span;
}

std::optional<double> Spectrum::tail_eigenvalue(int m) const {
  const auto& t = tail[static_cast<std::size_t>(m % 2)];
  if (m <= resolved_frequency || !t.in_span) return std::nullopt;
  return t.amplitude * std::pow(static_cast<double>(m), -t.exponent);
}

double Spectrum::tail_trace_bound() const {
  // Two modes per frequency, frequencies of one class spaced by 2: integral estimate.
  double bound = 0.0;
  for (const auto& t : tail) {
    if (!t.in_span || t.exponent <= 1.0) continue;
    const double start = resolved_frequency + 1.0;
    bound += t.amplitude * std::pow(start, 1.0 - t.exponent) / (t.exponent - 1.0);
  }
  return bound;
}

namespace {

// Fits the top half of the resolved band for one parity class. The tail is
// only extrapolated when the class decays into the null threshold (or runs
// into the frequency cutoff) rather than stopping abruptly.
SpectralTail fit_tail(const std::vector<double>& c, int resolved, int max_frequency,
                      double threshold, int parity) {
  SpectralTail tail;
  std::vector<double> log_m, log_c;
  int members = 0;
  int last_positive = -1;
  for (int m = std::max(1, resolved / 2 + 1); m <= resolved; ++m) {
    if (m % 2 != parity) continue;
    ++members;
    if (c[static_cast<std::size_t>(m)] >= threshold) {
      log_m.push_back(std::log(static_cast<double>(m)));
      log_c.push_back(std::log(c[static_cast<std::size_t>(m)]));
      last_positive = m;
    }
  }
  if (log_m.size() < 3 || 2 * static_cast<int>(log_m.size()) <= members) return tail;
  const LineFit fit = least_squares(log_m, log_c);
  if (fit.slope >= -1.0) return tail;
  const bool hit_cutoff = resolved + 2 > max_frequency;
  const bool decayed = c[static_cast<std::size_t>(last_positive)] < 1e3 * threshold;
  if (!hit_cutoff && !decayed) return tail;
  tail.in_span = true;
  tail.exponent = -fit.slope;
  tail.amplitude = std::exp(fit.intercept);
  return tail;
}

}  // namespace

Spectrum mercer_spectrum(const ZonalKernel& kernel, int max_frequency, int quad_nodes) {
  if (max_frequency < 1) throw DomainError("mercer_spectrum: max_frequency must be >= 1");
  if (quad_nodes < 4 * max_frequency) {
    throw QuadratureResolutionError("mercer_spectrum: need quad_nodes >= 4 * max_frequency (got " +
                                    std::to_string(quad_nodes) + " for " +
                                    std::to_string(max_frequency) + ")");
  }
  const auto nodes = static_cast<std::size_t>(quad_nodes);

  // Periodic trapezoid on theta_j = 2 pi j / N. Cosines are read from a table
  // indexed by (m j mod N) so every argument is reduced exactly.
  std::vector<double> profile(nodes);
  std::vector<double> cosines(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
    profile[j] = kernel.profile(std::min(theta, kTwoPi - theta));
    cosines[j] = std::cos(theta);
  }

  Spectrum s;
  s.max_frequency = max_frequency;
  s.kappa0 = kernel.diagonal();
  s.frequency_eigenvalues.resize(static_cast<std::size_t>(max_frequency) + 1);
  for (int m = 0; m <= max_frequency; ++m) {
    long double sum = 0.0L;
    std::size_t index = 0;
    const auto step = static_cast<std::size_t>(m) % nodes;
    for (std::size_t j = 0; j < nodes; ++j) {
      sum += static_cast<long double>(profile[j]) * cosines[index];
      index += step;
      if (index >= nodes) index -= nodes;
    }
    s.frequency_eigenvalues[static_cast<std::size_t>(m)] =
        static_cast<double>(sum / static_cast<long double>(nodes));
  }

  const double threshold = kNullEigenvalueThreshold * s.kappa0;
  for (int m = 0; m <= max_frequency; ++m) {
    if (s.frequency_eigenvalues[static_cast<std::size_t>(m)] >= threshold) s.resolved_frequency = m;
  }
  for (int m = 0; m <= s.resolved_frequency; ++m) {
    const double lambda = s.frequency_eigenvalues[static_cast<std::size_t>(m)];
    auto& bucket = lambda >= threshold ? s.modes : s.null_modes;
    const double stored = lambda >= threshold ? lambda : std::max(lambda, 0.0);
    if (m == 0) {
      bucket.push_back({0, Parity::constant, stored});
    } else {
      bucket.push_back({m, Parity::cosine, stored});
      bucket.push_back({m, Parity::sine, stored});
    }
  }
  std::stable_sort(s.modes.begin(), s.modes.end(), [](const Mode& a, const Mode& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue > b.eigenvalue;
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    return static_cast<int>(a.parity) < static_cast<int>(b.parity);
  });
  s.positive_count = s.modes.size();
  for (int parity = 0; parity < 2; ++parity) {
    s.tail[static_cast<std::size_t>(parity)] = fit_tail(
        s.frequency_eigenvalues, s.resolved_frequency, max_frequency, threshold, parity);
  }
  return s;
}

Spectrum mercer_spectrum(KernelSpec spec, int max_frequency, int quad_nodes) {
  return mercer_spectrum(ZonalKernel(spec), max_frequency, quad_nodes);
}

ZonalKernel truncated_mercer_kernel(const Spectrum& spectrum, int frequencies) {
  const int top = std::min(frequencies, spectrum.max_frequency + 1);
  std::vector<double> c(spectrum.frequency_eigenvalues.begin(),
                        spectrum.frequency_eigenvalues.begin() + top);
  for (auto& value : c) value = std::max(value, 0.0);
  auto profile = [c = std::move(c)](double delta) {
    double sum = c[0];
    for (std::size_t m = 1; m < c.size(); ++m) {
      sum += 2.0 * c[m] * std::cos(static_cast<double>(m) * delta);
    }
    return sum;
  };
  return ZonalKernel(std::move(profile), "mercer-truncated-" + std::to_string(frequencies));
}

double estimate_alpha(const Spectrum& spectrum, RankWindow window) {
  const std::size_t last = std::min(window.last, spectrum.positive_count);
  const std::size_t first = std::max<std::size_t>(window.first, 1);
  if (last < first || last - first + 1 < 10) {
    throw InsufficientDataError("estimate_alpha: fewer than 10 positive eigenvalues in window");
  }
  std::vector<double> log_p, log_lambda;
  for (std::size_t p = first; p <= last; ++p) {
    log_p.push_back(std::log(static_cast<double>(p)));
    log_lambda.push_back(std::log(spectrum.modes[p - 1].eigenvalue));
  }
  return -least_squares(log_p, log_lambda).slope;
}

double estimate_tail_alpha(const Spectrum& spectrum) {
  double sum = 0.0;
  int classes = 0;
  for (const auto& tail : spectrum.tail) {
    if (!tail.in_span) continue;
    sum += tail.exponent;
    ++classes;
  }
  if (classes == 0) throw InsufficientDataError("estimate_tail_alpha: no decaying tail class");
  return sum / classes;
}

}  // namespace gplab
