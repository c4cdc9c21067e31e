#include "gplab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gplab/errors.hpp"
#include "gplab/lab.hpp"
#include "gplab/serialize.hpp"

namespace gplab::cli {

namespace {

struct KernelFlags {
  std::string kernel = "arccos1";
  std::string bias = "off";
  int max_frequency = kDefaultMaxFrequency;
  int quad_nodes = kDefaultSpectralNodes;

  [[nodiscard]] KernelSpec spec() const { return KernelSpec::parse(kernel, bias == "on"); }
};

void add_kernel_flags(CLI::App* app, KernelFlags& flags, bool spectral_options) {
  app->add_option("--kernel", flags.kernel, "arc-cosine kernel")
      ->check(CLI::IsMember({"arccos0", "arccos1", "arccos2"}))
      ->capture_default_str();
  app->add_option("--bias", flags.bias, "bias term on/off")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  if (spectral_options) {
    app->add_option("--max-freq", flags.max_frequency, "highest Fourier frequency")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--quad", flags.quad_nodes, "spectral quadrature nodes (>= 4 * max-freq)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  return file;
}

std::string fixed(double value, int digits) {
  if (!std::isfinite(value)) return format_double(value);
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

int cmd_spectrum(const KernelFlags& flags, const std::string& out_path, const std::string& json_path,
                 std::ostream& out) {
  const Spectrum spectrum = mercer_spectrum(flags.spec(), flags.max_frequency, flags.quad_nodes);
  if (!out_path.empty()) {
    auto file = open_output(out_path);
    write_spectrum_csv(file, spectrum);
  }
  if (!json_path.empty()) {
    auto file = open_output(json_path);
    file << to_json(spectrum).dump(2) << '\n';
  }
  out << "kernel " << flags.spec().label() << '\n';
  out << "alpha≈" << fixed(estimate_tail_alpha(spectrum), 3) << '\n';
  try {
    out << "alpha_rank_window(5..200)=" << fixed(estimate_alpha(spectrum), 3) << '\n';
  } catch (const InsufficientDataError&) {
    out << "alpha_rank_window(5..200)=n/a\n";
  }
  out << "lambda_1=" << format_double(spectrum.modes.front().eigenvalue) << '\n';
  out << "positive_modes=" << spectrum.positive_count << " null_modes=" << spectrum.null_modes.size()
      << " resolved_frequency=" << spectrum.resolved_frequency << '\n';
  return kExitOk;
}

const std::vector<std::string> kBuiltinTargets = {"cos2", "theta_sq", "abs_shift_sq", "tent",
                                                  "sign", "sawtooth"};

int cmd_targets(const KernelFlags& flags, const std::string& target, const std::string& out_path,
                std::ostream& out) {
  const Spectrum spectrum = mercer_spectrum(flags.spec(), flags.max_frequency, flags.quad_nodes);
  std::vector<std::string> names = target.empty() ? kBuiltinTargets : std::vector<std::string>{target};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& name : names) {
    const Target f = targets::by_name(name);
    const TargetExpansion e = target_expansion(f, spectrum);
    rows.push_back({{"target", name},
                    {"beta_fit", json_number(estimate_beta(e))},
                    {"mu0", e.mu0},
                    {"mu0_positive", e.mu0_positive()},
                    {"l2_norm", e.l2_norm}});
    if (!out_path.empty()) {
      auto file = open_output(out_path);
      write_expansion_csv(file, e);
    }
  }
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : rate_table(flags.spec()).rows) {
    table.push_back({{"id", row.id}, {"target", row.target}});
  }
  out << nlohmann::json{{"kernel", flags.spec().label()}, {"targets", rows}, {"table_rows", table}}
             .dump(2)
      << '\n';
  return kExitOk;
}

nlohmann::json rates_json(const KernelFlags& flags, const std::string& target, double t,
                          double sigma) {
  ExperimentConfig config;
  config.kernel = flags.spec();
  config.target = target;
  config.max_frequency = flags.max_frequency;
  config.spectral_nodes = flags.quad_nodes;
  const Spectrum spectrum = mercer_spectrum(config.kernel, flags.max_frequency, flags.quad_nodes);
  const ResolvedTarget resolved = resolve_target(config, spectrum);
  const double alpha = rate_table(config.kernel).alpha;
  RateOptions options;
  options.mu0 = resolved.expansion.mu0;
  options.sigma2 = sigma * sigma;
  const RatePrediction prediction =
      predict_rates(alpha, resolved.beta, resolved.expansion.mu0_positive(), t, options);
  return {{"kernel", config.kernel.label()},
          {"target", target},
          {"alpha", alpha},
          {"alpha_fit", json_number(estimate_tail_alpha(spectrum))},
          {"beta", json_number(resolved.beta)},
          {"beta_fit", json_number(estimate_beta(resolved.expansion))},
          {"mu0", resolved.expansion.mu0},
          {"prediction", to_json(prediction)}};
}

int cmd_rates(const KernelFlags& flags, const std::string& target, double t, double sigma,
              const std::string& out_path, std::ostream& out) {
  const bool table_row = target.size() == 2 && target[0] == 'f' && target[1] >= '1' && target[1] <= '4';
  if (!table_row && target != "prior") throw UsageError("--target must be f1..f4 or prior");
  if (!(t < 1.0)) throw UsageError("--t must be below 1");
  const auto j = rates_json(flags, target, t, sigma);
  if (!out_path.empty()) {
    auto file = open_output(out_path);
    file << j.dump(2) << '\n';
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct TheoryFlags {
  std::string target = "f1";
  double sigma_model = 0.1;
  double sigma_true = 0.1;
  double t = 0.0;
  int log2_min = 4;
  int log2_max = 16;
  int drop_head = 0;
};

int cmd_theory(const KernelFlags& flags, const TheoryFlags& tf, const std::string& out_path,
               std::ostream& out) {
  if (tf.log2_max - tf.log2_min < 2) throw UsageError("--log2-max must exceed --log2-min by 2");
  if (!(tf.t < 1.0)) throw UsageError("--t must be below 1");
  ExperimentConfig config;
  config.kernel = flags.spec();
  config.target = tf.target;
  const Spectrum spectrum = mercer_spectrum(config.kernel, flags.max_frequency, flags.quad_nodes);
  ResolvedTarget resolved;
  try {
    resolved = resolve_target(config, spectrum);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  TheoryOptions options;
  options.sigma_model2 = tf.sigma_model * tf.sigma_model;
  options.sigma_true2 = tf.sigma_true * tf.sigma_true;
  options.t = tf.t;
  const auto grid = power_grid(2.0, tf.log2_min, tf.log2_max);
  const TheoryCurve curve = theory_curves(spectrum, resolved.expansion, grid, options);
  if (!out_path.empty()) {
    auto file = open_output(out_path);
    file << "n,f0_det,g_det,m_det\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      file << format_double(grid[i]) << ',' << format_double(curve.f0_det[i]) << ','
           << format_double(curve.g_det[i]) << ',' << format_double(curve.m_det[i]) << '\n';
    }
  }
  const auto drop = static_cast<std::size_t>(tf.drop_head);
  nlohmann::json slopes;
  for (const auto& [name, values] : {std::pair{"nsc", &curve.f0_det}, std::pair{"gen", &curve.g_det},
                                     std::pair{"mse", &curve.m_det}}) {
    try {
      slopes[name] = fit_slope(grid, *values, drop).slope;
    } catch (const std::exception&) {
      slopes[name] = "n/a";
    }
  }
  out << nlohmann::json{{"kernel", config.kernel.label()},
                        {"target", tf.target},
                        {"truncation", curve.truncation},
                        {"tail_bound", curve.tail_bound},
                        {"slopes", slopes}}
             .dump(2)
      << '\n';
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_path, int threads,
            std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (threads > 0) config.threads = threads;
  LearningCurveResult result;
  try {
    result = run_learning_curve(config);
  } catch (const SingularMatrixError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  auto file = open_output(out_path);
  write_curve_csv(file, result);
  out << "wrote " << result.rows.size() << " rows for " << result.label << " to " << out_path << '\n';
  return kExitOk;
}

int cmd_report(const std::string& curve_path, const std::string& rates_path, double tolerance,
               int drop_head, const std::string& out_path, std::ostream& out) {
  std::ifstream curve_in(curve_path);
  if (!curve_in) throw UsageError("cannot open curve '" + curve_path + "'");
  std::ifstream rates_in(rates_path);
  if (!rates_in) throw UsageError("cannot open rates '" + rates_path + "'");
  LearningCurveResult result;
  RatePrediction prediction;
  std::string label;
  try {
    result = read_curve_csv(curve_in);
    nlohmann::json rates;
    rates_in >> rates;
    prediction = prediction_from_json(rates);
    if (rates.contains("kernel") && rates.contains("target")) {
      label = rates["kernel"].get<std::string>() + "/" + rates["target"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("rates file: ") + e.what());
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  result.label = label.empty() ? curve_path : label;
  const RateReport report =
      compare_to_theory(result, prediction, tolerance, static_cast<std::size_t>(drop_head));
  const auto j = to_json(report);
  if (!out_path.empty()) {
    auto file = open_output(out_path);
    file << j.dump(2) << '\n';
  }
  out << j.dump(2) << '\n';
  return report.all_pass() ? kExitOk : kExitFailure;
}

struct IdentityFlags {
  int n = 8;
  double sigma = 0.1;
  std::size_t draws = 5000;
  std::uint64_t seed = 1;
  std::string target = "cos2";
  int quad = 256;
};

int cmd_identity(const KernelFlags& flags, const IdentityFlags& f, std::ostream& out) {
  ExperimentConfig config;
  config.kernel = flags.spec();
  config.seed = f.seed;
  const ZonalKernel kernel(config.kernel);
  auto target = std::make_shared<const Target>(targets::by_name(f.target));
  const Dataset data = generate_dataset(config, target, f.n, 0);
  const double sigma2 = f.sigma * f.sigma;
  const IdentityCheck analytic = gen_error_identity_analytic(kernel, data.points, sigma2, f.quad);
  const IdentityCheck stochastic =
      gen_error_identity_stochastic(kernel, data.points, *target, sigma2, f.draws, f.seed, f.quad);
  const double analytic_gap = std::abs(analytic.lhs - analytic.rhs);
  const double stochastic_gap = std::abs(stochastic.lhs - stochastic.rhs);
  const bool analytic_ok = analytic_gap <= 1e-8;
  const bool stochastic_ok = stochastic_gap <= 3.0 * stochastic.pooled_stderr();
  out << nlohmann::json{{"kernel", config.kernel.label()},
                        {"n", f.n},
                        {"analytic", {{"lhs", analytic.lhs}, {"rhs", analytic.rhs},
                                      {"abs_diff", analytic_gap}, {"pass", analytic_ok}}},
                        {"stochastic", {{"target", f.target}, {"draws", stochastic.draws},
                                        {"lhs", stochastic.lhs}, {"rhs", stochastic.rhs},
                                        {"pooled_stderr", stochastic.pooled_stderr()},
                                        {"abs_diff", stochastic_gap}, {"pass", stochastic_ok}}}}
             .dump(2)
      << '\n';
  return analytic_ok && stochastic_ok ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-process learning curves on the circle", "gp_lab"};
  app.require_subcommand(1);

  KernelFlags spectrum_flags, targets_flags, rates_flags, theory_flags, identity_flags;
  std::string spectrum_out, spectrum_json;
  auto* spectrum = app.add_subcommand("spectrum", "Mercer spectrum of an arc-cosine kernel");
  add_kernel_flags(spectrum, spectrum_flags, true);
  spectrum->add_option("--out", spectrum_out, "write rank,frequency,parity,eigenvalue CSV here");
  spectrum->add_option("--json", spectrum_json, "write the spectrum as JSON here");

  std::string targets_target, targets_out;
  auto* targets_cmd = app.add_subcommand("targets", "Expansion summary of the built-in targets");
  add_kernel_flags(targets_cmd, targets_flags, true);
  targets_cmd->add_option("--target", targets_target, "single built-in target")
      ->check(CLI::IsMember(kBuiltinTargets));
  targets_cmd->add_option("--out", targets_out, "write rank,mu CSV for --target here")
      ->needs("--target");

  std::string rates_target = "f1", rates_out;
  double rates_t = 0.0, rates_sigma = 0.1;
  auto* rates = app.add_subcommand("rates", "Predicted learning-curve exponents");
  add_kernel_flags(rates, rates_flags, false);
  rates->add_option("--target", rates_target, "f1..f4 or prior")->capture_default_str();
  rates->add_option("--t", rates_t, "noise schedule exponent, sigma^2 = sigma0^2 n^t")
      ->capture_default_str();
  rates->add_option("--sigma", rates_sigma, "noise level for plateau constants")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rates->add_option("--out", rates_out, "also write the JSON here");

  TheoryFlags tf;
  std::string theory_out;
  auto* theory = app.add_subcommand("theory", "Deterministic leading-order curves");
  add_kernel_flags(theory, theory_flags, true);
  theory->add_option("--target", tf.target, "f1..f4, prior, or a built-in name")->capture_default_str();
  theory->add_option("--sigma-model", tf.sigma_model, "model noise level")->capture_default_str();
  theory->add_option("--sigma-true", tf.sigma_true, "true noise level")->capture_default_str();
  theory->add_option("--t", tf.t, "noise schedule exponent")->capture_default_str();
  theory->add_option("--log2-min", tf.log2_min, "smallest n = 2^k")->capture_default_str();
  theory->add_option("--log2-max", tf.log2_max, "largest n = 2^k")->capture_default_str();
  theory->add_option("--drop-head", tf.drop_head, "grid points dropped before slope fits")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  theory->add_option("--out", theory_out, "write n,f0_det,g_det,m_det CSV here");

  std::string config_path, run_out;
  int run_threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Monte-Carlo learning curve from a JSON config");
  run_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  run_cmd->add_option("--out", run_out, "curve CSV path")->required();
  run_cmd->add_option("--threads", run_threads, "worker threads (overrides GP_LAB_THREADS)")
      ->check(CLI::NonNegativeNumber);

  std::string curve_path, rates_path, report_out;
  double tolerance = kDefaultSlopeTolerance;
  int drop_head = 2;
  auto* report = app.add_subcommand("report", "Compare a curve CSV with predicted exponents");
  report->add_option("--curve", curve_path, "curve CSV from run")->required();
  report->add_option("--rates", rates_path, "JSON from rates")->required();
  report->add_option("--tol", tolerance, "slope tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  report->add_option("--drop-head", drop_head, "smallest n values dropped before fitting")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  report->add_option("--out", report_out, "write the report JSON here");

  IdentityFlags idf;
  auto* identity = app.add_subcommand("identity-check", "Generalization-error identity on one dataset");
  add_kernel_flags(identity, identity_flags, false);
  identity->add_option("--n", idf.n, "training points")->check(CLI::PositiveNumber)->capture_default_str();
  identity->add_option("--sigma", idf.sigma, "noise level")->check(CLI::PositiveNumber)->capture_default_str();
  identity->add_option("--draws", idf.draws, "noise draws")->check(CLI::Range(2, 1000000))->capture_default_str();
  identity->add_option("--seed", idf.seed, "seed")->capture_default_str();
  identity->add_option("--target", idf.target, "built-in target")
      ->check(CLI::IsMember(kBuiltinTargets))
      ->capture_default_str();
  identity->add_option("--quad", idf.quad, "test-point quadrature nodes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(spectrum_flags, spectrum_out, spectrum_json, out);
    if (targets_cmd->parsed()) return cmd_targets(targets_flags, targets_target, targets_out, out);
    if (rates->parsed()) return cmd_rates(rates_flags, rates_target, rates_t, rates_sigma, rates_out, out);
    if (theory->parsed()) return cmd_theory(theory_flags, tf, theory_out, out);
    if (run_cmd->parsed()) return cmd_run(config_path, run_out, run_threads, out, err);
    if (report->parsed()) return cmd_report(curve_path, rates_path, tolerance, drop_head, report_out, out);
    if (identity->parsed()) return cmd_identity(identity_flags, idf, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const QuadratureResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gplab::cli
