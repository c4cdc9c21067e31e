#pragma once

// CSV and JSON encodings of spectra and target expansions. Numbers are
// written with 17 significant digits so files round-trip exactly.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "gplab/spectral.hpp"

namespace gplab {

/// Header "rank,frequency,parity,eigenvalue"; ranks are 1-based.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
/// Header "rank,mu".
void write_expansion_csv(std::ostream& out, const TargetExpansion& expansion);

nlohmann::json to_json(const Spectrum& spectrum);
nlohmann::json to_json(const TargetExpansion& expansion);

/// %.17g formatting; non-finite values become "inf", "-inf" or "nan".
std::string format_double(double value);

/// Finite numbers stay numbers; infinities and NaN become strings.
nlohmann::json json_number(double value);

}  // namespace gplab
