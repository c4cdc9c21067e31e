#pragma once

// Monte-Carlo learning-curve experiments: seeded data generation, a grid of
// (n, repeat) cells run in parallel, log-log slope fits and the comparison
// against predicted exponents.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gplab/gpr.hpp"
#include "gplab/spectral.hpp"
#include "gplab/theory.hpp"

namespace gplab {

struct ExperimentConfig {
  KernelSpec kernel{};
  /// f1..f4 (row of the kernel's rate table), "prior" (or "prior:<seed>" to
  /// override prior_seed), or a built-in target name.
  std::string target = "f1";
  std::vector<int> n_grid = {16, 32, 64, 128, 256, 512, 1024};
  int repeats = 20;
  double sigma_true = 0.1;
  double sigma_model = 0.1;
  /// sigma_model^2(n) = sigma_model^2 * n^t.
  double t = 0.0;
  std::uint64_t seed = 1;
  int quad_nodes = kDefaultTestNodes;
  bool predictive_noise = true;
  /// Settings for target = "prior".
  std::uint64_t prior_seed = 7;
  std::size_t prior_truncation = 256;
  /// Spectrum used for the theory overlay and the prior draw.
  int max_frequency = kDefaultMaxFrequency;
  int spectral_nodes = kDefaultSpectralNodes;
  /// 0: GP_LAB_THREADS, else hardware concurrency.
  int threads = 0;

  [[nodiscard]] double sigma_model2_at(double n) const;
};

/// Throws DomainError for invalid or missing values. Unknown keys are rejected.
/// Setting "extended_grid": true appends n = 2048 to the grid.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// One row of a kernel's rate table.
struct RateTableRow {
  std::string id;
  std::string target;
  double beta = kInfinity;
  bool mu0_positive = false;
  double exp_nsc = 0.0;
  double exp_gen = 0.0;
};

struct RateTable {
  KernelSpec kernel{};
  double alpha = 0.0;
  std::vector<RateTableRow> rows;
};

/// Reference exponents for the six arc-cosine kernels, in kernel order.
const std::vector<RateTable>& rate_tables();
const RateTable& rate_table(KernelSpec kernel);
/// Row f1..f4 of the kernel's table; throws DomainError otherwise.
const RateTableRow& rate_row(KernelSpec kernel, const std::string& id);

struct ResolvedTarget {
  std::shared_ptr<const Target> target;
  TargetExpansion expansion;
  /// Nominal beta: the table value for f1..f4, alpha / 2 for prior draws,
  /// otherwise the fitted value.
  double beta = kInfinity;
};

/// Throws DomainError for an unknown target name.
ResolvedTarget resolve_target(const ExperimentConfig& config, const Spectrum& spectrum);

/// theta_i uniform on [-pi, pi), y_i = f(theta_i) + sigma_true eps_i. Inputs use
/// stream 0 and noise stream 1 of a generator keyed on (seed, n, repeat).
Dataset generate_dataset(const ExperimentConfig& config, std::shared_ptr<const Target> target,
                         int n, int repeat);

struct CurveRow {
  double n = 0.0;
  double f0_mean = 0.0, f0_std = 0.0;
  double g_mean = 0.0, g_std = 0.0;
  double m_mean = 0.0, m_std = 0.0;
  double f0_det = 0.0, g_det = 0.0, m_det = 0.0;
};

struct LearningCurveResult {
  std::string label;
  std::vector<CurveRow> rows;
  /// Per-repeat values, rows[i] <-> samples[i][repeat].
  std::vector<std::vector<double>> f0_samples, g_samples, m_samples;
};

/// Throws SingularMatrixError tagged with (n, repeat) when a fit fails.
LearningCurveResult run_learning_curve(const ExperimentConfig& config);

/// Runs several targets on the same cells; each cell's kernel factorization is
/// shared. config.target is ignored.
std::vector<LearningCurveResult> run_learning_curves(const ExperimentConfig& config,
                                                     const std::vector<std::string>& targets);

/// Header n,f0_mean,f0_std,g_mean,g_std,m_mean,m_std,f0_det,g_det,m_det.
void write_curve_csv(std::ostream& out, const LearningCurveResult& result);
/// Throws DomainError on a malformed file.
LearningCurveResult read_curve_csv(std::istream& in);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// OLS of log y on log x after dropping the drop_head smallest x. Throws
/// DomainError for nonpositive y, InsufficientDataError with fewer than 3 points.
SlopeFit fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                   std::size_t drop_head = 2);

struct RateCheck {
  std::string quantity;
  bool evaluated = false;
  SlopeFit fit;
  double predicted = 0.0;
  bool plateau = false;
  /// Mean at the largest n and the predicted plateau (NaN when not a plateau).
  double level = 0.0;
  double predicted_level = 0.0;
  bool pass = false;
};

struct RateReport {
  std::string label;
  double tolerance = 0.15;
  std::vector<RateCheck> checks;

  [[nodiscard]] bool all_pass() const;
};

inline constexpr double kDefaultSlopeTolerance = 0.15;
inline constexpr double kPlateauSlopeTolerance = 0.1;
inline constexpr double kMinimumRSquared = 0.9;

/// Checks the nsc, gen and mse columns. Power-law rows fail if the slope is
/// off by more than tolerance or R^2 < 0.9; plateau rows pass iff |slope| <= 0.1.
/// Columns with nonfinite values are reported but not evaluated.
RateReport compare_to_theory(const LearningCurveResult& result, const RatePrediction& prediction,
                             double tolerance = kDefaultSlopeTolerance, std::size_t drop_head = 2);

nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const RatePrediction& prediction);
/// Accepts the output of to_json(RatePrediction); beta may be "inf".
RatePrediction prediction_from_json(const nlohmann::json& j);

/// Worker count: GP_LAB_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

}  // namespace gplab
