#pragma once

// Target functions on S^1. Built-in targets carry their classical Fourier
// series in closed form, so out-of-span mass and spectral tails can be summed
// exactly instead of estimated from a finite quadrature.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gplab {

enum class Trig { cosine, sine };
enum class FrequencyClass { all, odd, even };

bool in_class(int frequency, FrequencyClass cls);

/// Coefficient family c(m) = amplitude * (alternating ? (-1)^m : 1) / m^power
/// on every m >= 1 of the given class.
struct CoefficientFamily {
  Trig trig = Trig::cosine;
  FrequencyClass cls = FrequencyClass::all;
  double amplitude = 0.0;
  int power = 1;
  bool alternating = false;

  [[nodiscard]] double coefficient(int m) const;
};

struct FourierTerm {
  int frequency = 0;
  Trig trig = Trig::cosine;
  double coefficient = 0.0;
};

/// f(theta) = constant + sum_m a_m cos(m theta) + b_m sin(m theta).
/// Families must not overlap on the same (trig, m); explicit terms may be added
/// anywhere.
struct FourierSeries {
  double constant = 0.0;
  std::vector<FourierTerm> terms;
  std::vector<CoefficientFamily> families;

  [[nodiscard]] double cos_coefficient(int m) const;
  [[nodiscard]] double sin_coefficient(int m) const;
  /// Squared L2 mass carried by frequency m under the uniform measure:
  /// a_0^2 for m = 0, (a_m^2 + b_m^2) / 2 otherwise.
  [[nodiscard]] double energy(int m) const;
  /// Sum of energy(m) over m > above with m in cls, in closed form.
  [[nodiscard]] double tail_energy(int above, FrequencyClass cls) const;
  /// Partial sum evaluated at theta (for checks; truncated at max_frequency).
  [[nodiscard]] double evaluate(double theta, int max_frequency) const;
};

class Target {
 public:
  Target(std::string name, std::function<double(double)> f,
         std::optional<FourierSeries> series = std::nullopt,
         std::optional<double> l2_norm_sq = std::nullopt);

  [[nodiscard]] double operator()(double theta) const { return f_(theta); }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::optional<FourierSeries>& series() const { return series_; }
  /// ||f||_2^2 under the uniform density, when known in closed form.
  [[nodiscard]] const std::optional<double>& l2_norm_sq() const { return l2_norm_sq_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::optional<FourierSeries> series_;
  std::optional<double> l2_norm_sq_;
};

namespace targets {

Target zero();
/// cos(2 theta)
Target cos2();
/// theta^2
Target theta_squared();
/// (|theta| - pi/2)^2
Target shifted_abs_squared();
/// pi/2 - |theta|
Target tent();
/// sign(theta)
Target sign();
/// pi/2 - theta on [0, pi), -pi/2 - theta on [-pi, 0)
Target sawtooth();

/// Built-in target by short name: zero, cos2, theta_sq, abs_shift_sq, tent,
/// sign, sawtooth. Throws DomainError otherwise.
Target by_name(const std::string& name);

/// Target built from a finite series (used for prior draws).
Target from_series(std::string name, FourierSeries series);

}  // namespace targets

}  // namespace gplab
