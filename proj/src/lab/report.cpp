#include <cmath>

#include "gplab/errors.hpp"
#include "gplab/lab.hpp"
#include "gplab/serialize.hpp"

namespace gplab {

namespace {

RateCheck check_column(const std::string& quantity, const std::vector<double>& ns,
                       const std::vector<double>& ys, double predicted, double plateau_level,
                       double tolerance, std::size_t drop_head) {
  RateCheck check;
  check.quantity = quantity;
  check.predicted = predicted;
  check.plateau = predicted == 0.0;
  check.predicted_level = check.plateau ? plateau_level : std::numeric_limits<double>::quiet_NaN();
  check.level = ys.empty() ? std::numeric_limits<double>::quiet_NaN() : ys.back();
  for (const double y : ys) {
    if (!std::isfinite(y)) return check;
  }
  try {
    check.fit = fit_slope(ns, ys, drop_head);
  } catch (const std::exception&) {
    // Nonpositive or too few values: evaluated, but failing.
    check.evaluated = true;
    return check;
  }
  check.evaluated = true;
  if (check.plateau) {
    check.pass = std::abs(check.fit.slope) <= kPlateauSlopeTolerance;
  } else {
    check.pass = std::abs(check.fit.slope - predicted) <= tolerance &&
                 check.fit.r_squared >= kMinimumRSquared;
  }
  return check;
}

}  // namespace

bool RateReport::all_pass() const {
  for (const auto& check : checks) {
    if (check.evaluated && !check.pass) return false;
  }
  return true;
}

RateReport compare_to_theory(const LearningCurveResult& result, const RatePrediction& prediction,
                             double tolerance, std::size_t drop_head) {
  std::vector<double> ns, f0, g, m;
  for (const CurveRow& row : result.rows) {
    ns.push_back(row.n);
    f0.push_back(row.f0_mean);
    g.push_back(row.g_mean);
    m.push_back(row.m_mean);
  }
  RateReport report;
  report.label = result.label;
  report.tolerance = tolerance;
  report.checks.push_back(check_column("nsc", ns, f0, prediction.exp_nsc, kInfinity, tolerance, drop_head));
  report.checks.push_back(
      check_column("gen", ns, g, prediction.exp_gen, prediction.constant_gen, tolerance, drop_head));
  report.checks.push_back(
      check_column("mse", ns, m, prediction.exp_mse, prediction.constant_mse, tolerance, drop_head));
  return report;
}

nlohmann::json to_json(const RatePrediction& p) {
  return {{"alpha", json_number(p.alpha)},
          {"beta", json_number(p.beta)},
          {"mu0_positive", p.mu0_positive},
          {"t", p.t},
          {"exp_nsc", json_number(p.exp_nsc)},
          {"exp_gen", json_number(p.exp_gen)},
          {"exp_mse", json_number(p.exp_mse)},
          {"constant_gen", json_number(p.constant_gen)},
          {"constant_mse", json_number(p.constant_mse)}};
}

namespace {

double number_from_json(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto text = v.get<std::string>();
    if (text == "inf") return kInfinity;
    if (text == "-inf") return -kInfinity;
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw DomainError(std::string("rates: field '") + key + "' is not a number");
}

}  // namespace

RatePrediction prediction_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("rates: expected a JSON object");
  // The rates command nests the prediction under "prediction".
  const nlohmann::json& p = j.contains("prediction") ? j["prediction"] : j;
  for (const char* key : {"exp_nsc", "exp_gen", "exp_mse"}) {
    if (!p.contains(key)) throw DomainError(std::string("rates: missing '") + key + "'");
  }
  RatePrediction out;
  out.alpha = number_from_json(p, "alpha", 0.0);
  out.beta = number_from_json(p, "beta", kInfinity);
  out.mu0_positive = p.value("mu0_positive", false);
  out.t = number_from_json(p, "t", 0.0);
  out.exp_nsc = number_from_json(p, "exp_nsc", 0.0);
  out.exp_gen = number_from_json(p, "exp_gen", 0.0);
  out.exp_mse = number_from_json(p, "exp_mse", 0.0);
  out.constant_gen = number_from_json(p, "constant_gen", std::numeric_limits<double>::quiet_NaN());
  out.constant_mse = number_from_json(p, "constant_mse", std::numeric_limits<double>::quiet_NaN());
  return out;
}

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"quantity", c.quantity},
                      {"evaluated", c.evaluated},
                      {"fitted_slope", json_number(c.fit.slope)},
                      {"slope_stderr", json_number(c.fit.std_error)},
                      {"r_squared", json_number(c.fit.r_squared)},
                      {"points", c.fit.points},
                      {"predicted_exponent", json_number(c.predicted)},
                      {"plateau", c.plateau},
                      {"level", json_number(c.level)},
                      {"predicted_level", json_number(c.predicted_level)},
                      {"pass", c.pass}});
  }
  return {{"label", report.label},
          {"tolerance", report.tolerance},
          {"all_pass", report.all_pass()},
          {"checks", checks}};
}

}  // namespace gplab
