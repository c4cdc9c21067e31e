#include "gplab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace gplab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

nlohmann::json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "rank,frequency,parity,eigenvalue\n";
  for (std::size_t p = 0; p < spectrum.modes.size(); ++p) {
    const Mode& mode = spectrum.modes[p];
    out << p + 1 << ',' << mode.frequency << ',' << to_string(mode.parity) << ','
        << format_double(mode.eigenvalue) << '\n';
  }
}

void write_expansion_csv(std::ostream& out, const TargetExpansion& expansion) {
  out << "rank,mu\n";
  for (std::size_t p = 0; p < expansion.mu.size(); ++p) {
    out << p + 1 << ',' << format_double(expansion.mu[p]) << '\n';
  }
}

nlohmann::json to_json(const Spectrum& spectrum) {
  nlohmann::json modes = nlohmann::json::array();
  for (const Mode& mode : spectrum.modes) {
    modes.push_back({{"frequency", mode.frequency},
                     {"parity", to_string(mode.parity)},
                     {"eigenvalue", mode.eigenvalue}});
  }
  nlohmann::json nulls = nlohmann::json::array();
  for (const Mode& mode : spectrum.null_modes) {
    nulls.push_back({{"frequency", mode.frequency}, {"parity", to_string(mode.parity)}});
  }
  nlohmann::json tails = nlohmann::json::array();
  for (const auto& tail : spectrum.tail) {
    tails.push_back({{"in_span", tail.in_span},
                     {"amplitude", tail.amplitude},
                     {"exponent", tail.exponent}});
  }
  return {{"max_frequency", spectrum.max_frequency},
          {"resolved_frequency", spectrum.resolved_frequency},
          {"positive_count", spectrum.positive_count},
          {"kappa0", spectrum.kappa0},
          {"modes", modes},
          {"null_modes", nulls},
          {"tail_by_parity", tails}};
}

nlohmann::json to_json(const TargetExpansion& expansion) {
  return {{"mu", expansion.mu},
          {"mu0", expansion.mu0},
          {"l2_norm", expansion.l2_norm},
          {"tail_energy", expansion.tail_energy},
          {"resolved_frequency", expansion.resolved_frequency},
          {"beta", json_number(estimate_beta(expansion))}};
}

}  // namespace gplab
