#include "gplab/targets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include "gplab/errors.hpp"
#include "gplab/kernels.hpp"

namespace gplab {

bool in_class(int frequency, FrequencyClass cls) {
  switch (cls) {
    case FrequencyClass::all:
      return true;
    case FrequencyClass::odd:
      return frequency % 2 != 0;
    case FrequencyClass::even:
      return frequency % 2 == 0;
  }
  return false;
}

double CoefficientFamily::coefficient(int m) const {
  if (m < 1 || !in_class(m, cls)) return 0.0;
  const double sign = (alternating && m % 2 != 0) ? -1.0 : 1.0;
  return sign * amplitude / std::pow(static_cast<double>(m), power);
}

namespace {

// sum_{k >= 0} (q + k)^-s for integer s >= 2.
double hurwitz_zeta(int s, double q) {
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  return sign * boost::math::polygamma(s - 1, q) / boost::math::factorial<double>(s - 1);
}

// sum over m > above, m in cls, of m^-s.
double power_tail(int s, int above, FrequencyClass cls) {
  above = std::max(above, 0);
  const double all = hurwitz_zeta(s, above + 1.0);
  const double even = std::pow(2.0, -s) * hurwitz_zeta(s, std::floor(above / 2.0) + 1.0);
  switch (cls) {
    case FrequencyClass::all:
      return all;
    case FrequencyClass::even:
      return even;
    case FrequencyClass::odd:
      return all - even;
  }
  return 0.0;
}

std::optional<FrequencyClass> intersect(FrequencyClass a, FrequencyClass b) {
  if (a == FrequencyClass::all) return b;
  if (b == FrequencyClass::all || a == b) return a;
  return std::nullopt;
}

}  // namespace

double FourierSeries::cos_coefficient(int m) const {
  if (m == 0) return constant;
  double sum = 0.0;
  for (const auto& term : terms) {
    if (term.frequency == m && term.trig == Trig::cosine) sum += term.coefficient;
  }
  for (const auto& family : families) {
    if (family.trig == Trig::cosine) sum += family.coefficient(m);
  }
  return sum;
}

double FourierSeries::sin_coefficient(int m) const {
  if (m == 0) return 0.0;
  double sum = 0.0;
  for (const auto& term : terms) {
    if (term.frequency == m && term.trig == Trig::sine) sum += term.coefficient;
  }
  for (const auto& family : families) {
    if (family.trig == Trig::sine) sum += family.coefficient(m);
  }
  return sum;
}

double FourierSeries::energy(int m) const {
  if (m == 0) return constant * constant;
  const double a = cos_coefficient(m);
  const double b = sin_coefficient(m);
  return 0.5 * (a * a + b * b);
}

double FourierSeries::tail_energy(int above, FrequencyClass cls) const {
  double total = 0.0;
  for (const auto& family : families) {
    const auto overlap = intersect(family.cls, cls);
    if (!overlap) continue;
    total += 0.5 * family.amplitude * family.amplitude * power_tail(2 * family.power, above, *overlap);
  }
  // Explicit terms: replace the family-only energy at their frequencies by the exact one.
  std::set<int> explicit_frequencies;
  for (const auto& term : terms) {
    if (term.frequency > above && term.frequency > 0 && in_class(term.frequency, cls)) {
      explicit_frequencies.insert(term.frequency);
    }
  }
  for (const int m : explicit_frequencies) {
    double family_only = 0.0;
    for (const auto& family : families) {
      const double c = family.coefficient(m);
      family_only += 0.5 * c * c;
    }
    total += energy(m) - family_only;
  }
  return total;
}

double FourierSeries::evaluate(double theta, int max_frequency) const {
  double sum = constant;
  for (int m = 1; m <= max_frequency; ++m) {
    const double a = cos_coefficient(m);
    const double b = sin_coefficient(m);
    if (a != 0.0) sum += a * std::cos(m * theta);
    if (b != 0.0) sum += b * std::sin(m * theta);
  }
  return sum;
}

Target::Target(std::string name, std::function<double(double)> f,
               std::optional<FourierSeries> series, std::optional<double> l2_norm_sq)
    : name_(std::move(name)),
      f_(std::move(f)),
      series_(std::move(series)),
      l2_norm_sq_(l2_norm_sq) {}

namespace targets {

Target zero() {
  return Target("zero", [](double) { return 0.0; }, FourierSeries{}, 0.0);
}

Target cos2() {
  FourierSeries series;
  series.terms.push_back({2, Trig::cosine, 1.0});
  return Target("cos2", [](double theta) { return std::cos(2.0 * theta); }, series, 0.5);
}

Target theta_squared() {
  FourierSeries series;
  series.constant = kPi * kPi / 3.0;
  series.families.push_back({Trig::cosine, FrequencyClass::all, 4.0, 2, true});
  return Target("theta_sq", [](double theta) { return theta * theta; }, series,
                std::pow(kPi, 4) / 5.0);
}

Target shifted_abs_squared() {
  FourierSeries series;
  series.constant = kPi * kPi / 12.0;
  series.families.push_back({Trig::cosine, FrequencyClass::even, 4.0, 2, false});
  return Target(
      "abs_shift_sq",
      [](double theta) {
        const double d = std::abs(theta) - 0.5 * kPi;
        return d * d;
      },
      series, std::pow(kPi, 4) / 80.0);
}

Target tent() {
  FourierSeries series;
  series.families.push_back({Trig::cosine, FrequencyClass::odd, 4.0 / kPi, 2, false});
  return Target("tent", [](double theta) { return 0.5 * kPi - std::abs(theta); }, series,
                kPi * kPi / 12.0);
}

Target sign() {
  FourierSeries series;
  series.families.push_back({Trig::sine, FrequencyClass::odd, 4.0 / kPi, 1, false});
  return Target(
      "sign", [](double theta) { return theta > 0.0 ? 1.0 : (theta < 0.0 ? -1.0 : 0.0); },
      series, 1.0);
}

Target sawtooth() {
  FourierSeries series;
  series.families.push_back({Trig::sine, FrequencyClass::even, 2.0, 1, false});
  return Target(
      "sawtooth",
      [](double theta) {
        const double wrapped = wrap_angle(theta);
        return wrapped >= 0.0 ? 0.5 * kPi - wrapped : -0.5 * kPi - wrapped;
      },
      series, kPi * kPi / 12.0);
}

Target by_name(const std::string& name) {
  if (name == "zero") return zero();
  if (name == "cos2") return cos2();
  if (name == "theta_sq") return theta_squared();
  if (name == "abs_shift_sq") return shifted_abs_squared();
  if (name == "tent") return tent();
  if (name == "sign") return sign();
  if (name == "sawtooth") return sawtooth();
  throw DomainError("unknown target '" + name + "'");
}

Target from_series(std::string name, FourierSeries series) {
  if (!series.families.empty()) {
    throw DomainError("from_series: only finite series (explicit terms) can be evaluated");
  }
  double l2 = series.constant * series.constant;
  for (const auto& term : series.terms) l2 += 0.5 * term.coefficient * term.coefficient;
  auto terms = series.terms;
  const double constant = series.constant;
  auto f = [terms = std::move(terms), constant](double theta) {
    double sum = constant;
    for (const auto& term : terms) {
      const double arg = term.frequency * theta;
      sum += term.coefficient * (term.trig == Trig::cosine ? std::cos(arg) : std::sin(arg));
    }
    return sum;
  };
  return Target(std::move(name), std::move(f), std::move(series), l2);
}

}  // namespace targets

}  // namespace gplab
