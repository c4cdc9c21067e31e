#pragma once

// Mercer decomposition of zonal kernels on S^1 under the uniform measure.
// Frequency m >= 1 contributes a cosine and a sine eigenfunction, both with
// eigenvalue c_m = (1/pi) int_0^pi kappa(u) cos(m u) du; frequency 0 is the
// constant function with eigenvalue c_0.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gplab/kernels.hpp"
#include "gplab/targets.hpp"

namespace gplab {

enum class Parity { constant, cosine, sine };

std::string to_string(Parity parity);

struct Mode {
  int frequency = 0;
  Parity parity = Parity::constant;
  double eigenvalue = 0.0;
};

/// constant -> 1, cosine -> sqrt(2) cos(m theta), sine -> sqrt(2) sin(m theta).
double eigenfunction_value(const Mode& mode, double theta);

/// Power-law extrapolation lambda(m) = amplitude * m^-exponent for one parity
/// class of frequencies above the resolved band.
struct SpectralTail {
  bool in_span = false;
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct Spectrum {
  /// Positive modes, descending eigenvalue; ties by frequency, then cosine first.
  std::vector<Mode> modes;
  std::size_t positive_count = 0;
  /// Modes whose eigenvalue is numerically zero (below 1e-12 * kappa(0)).
  std::vector<Mode> null_modes;
  int max_frequency = 0;
  /// Highest frequency with a positive eigenvalue.
  int resolved_frequency = 0;
  double kappa0 = 0.0;
  /// Raw quadrature coefficients c_m for m = 0..max_frequency.
  std::vector<double> frequency_eigenvalues;
  /// Extrapolation for frequencies above resolved_frequency, indexed by m % 2.
  std::array<SpectralTail, 2> tail{};

  [[nodiscard]] bool is_null_frequency(int m) const;
  /// Whether frequency m carries positive eigenvalue, extrapolating above the band.
  [[nodiscard]] bool frequency_in_span(int m) const;
  /// Extrapolated eigenvalue for m > resolved_frequency, nullopt if out of span.
  [[nodiscard]] std::optional<double> tail_eigenvalue(int m) const;
  /// Estimated sum of lambda_p over all modes beyond the resolved band.
  [[nodiscard]] double tail_trace_bound() const;
};

inline constexpr int kDefaultMaxFrequency = 512;
inline constexpr int kDefaultSpectralNodes = 32768;
inline constexpr double kNullEigenvalueThreshold = 1e-12;

/// Throws QuadratureResolutionError unless quad_nodes >= 4 * max_frequency.
Spectrum mercer_spectrum(const ZonalKernel& kernel, int max_frequency = kDefaultMaxFrequency,
                         int quad_nodes = kDefaultSpectralNodes);
Spectrum mercer_spectrum(KernelSpec spec, int max_frequency = kDefaultMaxFrequency,
                         int quad_nodes = kDefaultSpectralNodes);

/// Kernel rebuilt from the first `frequencies` Fourier frequencies of a
/// spectrum: kappa(d) = c_0 + 2 sum_{1 <= m < frequencies} c_m cos(m d).
ZonalKernel truncated_mercer_kernel(const Spectrum& spectrum, int frequencies);

/// Inclusive 1-based rank window. `last` is clipped to the positive count.
struct RankWindow {
  std::size_t first = 5;
  std::size_t last = 200;
};

/// Negated OLS slope of log lambda_p against log p over the window.
/// Throws InsufficientDataError with fewer than 10 ranks.
double estimate_alpha(const Spectrum& spectrum, RankWindow window = {});

/// Decay exponent of the extrapolated spectral tail (mean over in-span parity
/// classes). Rank and frequency scale alike asymptotically, so this estimates
/// alpha without the head bias of a finite rank window. Throws
/// InsufficientDataError when no parity class decays into the null threshold.
double estimate_tail_alpha(const Spectrum& spectrum);

/// Ordinary least squares of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct TargetExpansion {
  /// mu_p aligned with Spectrum::modes.
  std::vector<double> mu;
  /// Mass orthogonal to every positive-eigenvalue eigenfunction.
  double mu0 = 0.0;
  double l2_norm = 0.0;
  /// In-span mass above the resolved band (known only for closed-form targets).
  double tail_energy = 0.0;
  int resolved_frequency = 0;
  /// Copied from the target when available; lets theory curves extend the tail.
  std::optional<FourierSeries> series;

  [[nodiscard]] bool mu0_positive() const;
};

inline constexpr int kDefaultTargetNodes = 8192;

/// Projects a target onto the spectrum. Closed-form targets use their Fourier
/// series exactly; others use trapezoid quadrature on quad_nodes offset nodes,
/// in which case mu0 also absorbs any in-span mass above the resolved band.
TargetExpansion target_expansion(const Target& target, const Spectrum& spectrum,
                                 int quad_nodes = kDefaultTargetNodes);

/// Negated OLS slope of log |mu_p| against log p over nonzero coefficients
/// (|mu_p| > 1e-10) past rank 3. Returns +inf when fewer than 3 exist.
double estimate_beta(const TargetExpansion& expansion);

/// Karhunen-Loeve draw mu_p = sqrt(lambda_p) * omega_p for p <= truncation.
TargetExpansion sample_target_from_prior(const Spectrum& spectrum, std::size_t truncation,
                                         std::uint64_t seed);

/// The function whose expansion equals `expansion` on the spectrum's modes.
Target target_from_expansion(const Spectrum& spectrum, const TargetExpansion& expansion,
                             std::string name);

}  // namespace gplab
