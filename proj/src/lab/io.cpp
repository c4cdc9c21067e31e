#include <istream>
#include <ostream>
#include <sstream>

#include "gplab/errors.hpp"
#include "gplab/lab.hpp"
#include "gplab/serialize.hpp"

namespace gplab {

namespace {

constexpr const char* kCurveHeader = "n,f0_mean,f0_std,g_mean,g_std,m_mean,m_std,f0_det,g_det,m_det";

double parse_field(const std::string& text, std::size_t line_number) {
  if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw DomainError("curve csv line " + std::to_string(line_number) + ": bad number '" + text + "'");
  }
}

}  // namespace

void write_curve_csv(std::ostream& out, const LearningCurveResult& result) {
  out << kCurveHeader << '\n';
  for (const CurveRow& r : result.rows) {
    const double fields[] = {r.n,      r.f0_mean, r.f0_std, r.g_mean, r.g_std,
                             r.m_mean, r.m_std,   r.f0_det, r.g_det,  r.m_det};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i > 0) out << ',';
      out << format_double(fields[i]);
    }
    out << '\n';
  }
}

LearningCurveResult read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("curve csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCurveHeader) throw DomainError("curve csv: unexpected header '" + line + "'");
  LearningCurveResult result;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) fields.push_back(parse_field(cell, line_number));
    if (fields.size() != 10) {
      throw DomainError("curve csv line " + std::to_string(line_number) + ": expected 10 fields");
    }
    result.rows.push_back({fields[0], fields[1], fields[2], fields[3], fields[4], fields[5],
                           fields[6], fields[7], fields[8], fields[9]});
  }
  if (result.rows.empty()) throw DomainError("curve csv: no data rows");
  return result;
}

}  // namespace gplab
