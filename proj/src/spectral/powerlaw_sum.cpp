#include <algorithm>
#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/theory.hpp"

namespace gplab {

double powerlaw_sum(double a1, double a2, double s1, double s2, double s3, double m,
                    std::int64_t terms) {
  if (!(a1 > 0.0 && a2 > 0.0 && s1 > 0.0 && s2 > 0.0 && s3 > 0.0 && m > 0.0)) {
    throw DomainError("powerlaw_sum: all constants must be positive");
  }
  if (terms < 1) throw DomainError("powerlaw_sum: need at least one term");
  if (terms > 100'000'000) throw DomainError("powerlaw_sum: more than 1e8 terms");
  // Smallest terms first.
  long double sum = 0.0L;
  for (std::int64_t i = terms; i >= 1; --i) {
    const double x = static_cast<double>(i);
    sum += a1 * std::pow(x, -s1) / std::pow(1.0 + a2 * m * std::pow(x, -s2), s3);
  }
  return static_cast<double>(sum);
}

std::string to_string(PowerLawRegime regime) {
  switch (regime) {
    case PowerLawRegime::head_dominated:
      return "m^((1-s1)/s2)";
    case PowerLawRegime::logarithmic:
      return "m^(-s3) log m";
    case PowerLawRegime::tail_dominated:
      return "m^(-s3)";
  }
  return "?";
}

PowerLawRegime classify_regime(double s1, double s2, double s3) {
  if (!(s1 > 1.0)) throw DomainError("classify_regime: requires s1 > 1");
  if (!(s2 > 0.0 && s3 > 0.0)) throw DomainError("classify_regime: s2, s3 must be positive");
  const double gap = s2 * s3 - (s1 - 1.0);
  if (std::abs(gap) <= 1e-12 * std::max(1.0, s1 - 1.0)) return PowerLawRegime::logarithmic;
  return gap > 0.0 ? PowerLawRegime::head_dominated : PowerLawRegime::tail_dominated;
}

double regime_scaling(PowerLawRegime regime, double s1, double s2, double s3, double m) {
  switch (regime) {
    case PowerLawRegime::head_dominated:
      return std::pow(m, (1.0 - s1) / s2);
    case PowerLawRegime::logarithmic:
      return std::pow(m, -s3) * std::log(m);
    case PowerLawRegime::tail_dominated:
      return std::pow(m, -s3);
  }
  return 0.0;
}

}  // namespace gplab
