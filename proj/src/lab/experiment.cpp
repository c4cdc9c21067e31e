#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

#include "gplab/errors.hpp"
#include "gplab/lab.hpp"
#include "gplab/philox.hpp"

namespace gplab {

namespace {

constexpr std::uint32_t kInputStream = 0;
constexpr std::uint32_t kNoiseStream = 1;

const std::set<std::string> kConfigKeys = {
    "kernel",         "bias",      "target",           "n_grid",        "extended_grid",
    "repeats",        "sigma_true", "sigma_model",     "t",             "seed",
    "quad_nodes",     "predictive_noise", "prior_seed", "prior_truncation", "max_frequency",
    "spectral_nodes", "threads"};

bool parse_bias(const nlohmann::json& value) {
  if (value.is_boolean()) return value.get<bool>();
  const auto text = value.get<std::string>();
  if (text == "on" || text == "true") return true;
  if (text == "off" || text == "false") return false;
  throw DomainError("config: bias must be a boolean or on/off");
}

struct CellDraw {
  std::vector<AngularPoint> points;
  Eigen::VectorXd noise;
};

CellDraw draw_cell(const ExperimentConfig& config, int n, int repeat) {
  const auto tag_n = static_cast<std::uint32_t>(n);
  const auto tag_r = static_cast<std::uint32_t>(repeat);
  const KeyedStream inputs(config.seed, kInputStream, tag_n, tag_r);
  const KeyedStream noise(config.seed, kNoiseStream, tag_n, tag_r);
  CellDraw out;
  out.points.reserve(static_cast<std::size_t>(n));
  out.noise.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto index = static_cast<std::uint32_t>(i);
    out.points.emplace_back(-kPi + kTwoPi * inputs.uniform(index));
    out.noise[i] = noise.normal(index);
  }
  return out;
}

void summarize(const std::vector<double>& values, double& mean, double& sd) {
  const auto count = static_cast<double>(values.size());
  long double sum = 0.0L;
  for (const double v : values) sum += v;
  mean = static_cast<double>(sum / count);
  if (values.size() < 2) {
    sd = 0.0;
    return;
  }
  long double ss = 0.0L;
  for (const double v : values) ss += (v - mean) * (v - mean);
  sd = static_cast<double>(std::sqrt(ss / (count - 1.0)));
}

}  // namespace

double ExperimentConfig::sigma_model2_at(double n) const {
  return sigma_model * sigma_model * std::pow(n, t);
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  for (const auto& item : j.items()) {
    if (!kConfigKeys.contains(item.key())) throw DomainError("config: unknown key '" + item.key() + "'");
  }
  ExperimentConfig c;
  try {
    const bool bias = j.contains("bias") ? parse_bias(j["bias"]) : false;
    c.kernel = KernelSpec::parse(j.value("kernel", std::string("arccos1")), bias);
    c.target = j.value("target", c.target);
    if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<int>>();
    if (j.value("extended_grid", false)) c.n_grid.push_back(2048);
    c.repeats = j.value("repeats", c.repeats);
    c.sigma_true = j.value("sigma_true", c.sigma_true);
    c.sigma_model = j.value("sigma_model", c.sigma_model);
    c.t = j.value("t", c.t);
    c.seed = j.value("seed", c.seed);
    c.quad_nodes = j.value("quad_nodes", c.quad_nodes);
    c.predictive_noise = j.value("predictive_noise", c.predictive_noise);
    c.prior_seed = j.value("prior_seed", c.prior_seed);
    c.prior_truncation = j.value("prior_truncation", c.prior_truncation);
    c.max_frequency = j.value("max_frequency", c.max_frequency);
    c.spectral_nodes = j.value("spectral_nodes", c.spectral_nodes);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  if (c.n_grid.empty()) throw DomainError("config: n_grid is empty");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] < 1) throw DomainError("config: n_grid entries must be positive");
    if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) {
      throw DomainError("config: n_grid must be strictly increasing");
    }
  }
  if (c.repeats < 1) throw DomainError("config: repeats must be >= 1");
  if (!(c.sigma_true >= 0.0) || !(c.sigma_model >= 0.0)) {
    throw DomainError("config: noise levels must be nonnegative");
  }
  if (!(c.t < 1.0)) throw DomainError("config: t must be below 1");
  if (c.quad_nodes < 1) throw DomainError("config: quad_nodes must be positive");
  if (c.threads < 0) throw DomainError("config: threads must be nonnegative");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"kernel", c.kernel.kernel_name()},
          {"bias", c.kernel.bias},
          {"target", c.target},
          {"n_grid", c.n_grid},
          {"repeats", c.repeats},
          {"sigma_true", c.sigma_true},
          {"sigma_model", c.sigma_model},
          {"t", c.t},
          {"seed", c.seed},
          {"quad_nodes", c.quad_nodes},
          {"predictive_noise", c.predictive_noise},
          {"prior_seed", c.prior_seed},
          {"prior_truncation", c.prior_truncation},
          {"max_frequency", c.max_frequency},
          {"spectral_nodes", c.spectral_nodes},
          {"threads", c.threads}};
}

ResolvedTarget resolve_target(const ExperimentConfig& config, const Spectrum& spectrum) {
  ResolvedTarget out;
  const std::string& name = config.target;
  if (name.size() == 2 && name[0] == 'f') {
    const RateTableRow& row = rate_row(config.kernel, name);
    out.target = std::make_shared<const Target>(targets::by_name(row.target));
    out.expansion = target_expansion(*out.target, spectrum);
    out.beta = row.beta;
  } else if (name == "prior" || name.starts_with("prior:")) {
    std::uint64_t seed = config.prior_seed;
    if (name.size() > 6) {
      try {
        seed = std::stoull(name.substr(6));
      } catch (const std::exception&) {
        throw DomainError("bad prior seed in target '" + name + "'");
      }
    }
    out.expansion = sample_target_from_prior(spectrum, config.prior_truncation, seed);
    out.target = std::make_shared<const Target>(target_from_expansion(spectrum, out.expansion, name));
    out.beta = rate_table(config.kernel).alpha / 2.0;
  } else {
    out.target = std::make_shared<const Target>(targets::by_name(name));
    out.expansion = target_expansion(*out.target, spectrum);
    out.beta = estimate_beta(out.expansion);
  }
  return out;
}

Dataset generate_dataset(const ExperimentConfig& config, std::shared_ptr<const Target> target,
                         int n, int repeat) {
  if (n < 1) throw DomainError("generate_dataset: n must be positive");
  CellDraw draw = draw_cell(config, n, repeat);
  Dataset data;
  data.f_values.resize(n);
  for (int i = 0; i < n; ++i) data.f_values[i] = (*target)(draw.points[static_cast<std::size_t>(i)].theta());
  data.y = data.f_values + config.sigma_true * draw.noise;
  data.points = std::move(draw.points);
  data.sigma_true2 = config.sigma_true * config.sigma_true;
  data.target = std::move(target);
  return data;
}

int default_thread_count() {
  if (const char* env = std::getenv("GP_LAB_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<LearningCurveResult> run_learning_curves(const ExperimentConfig& config,
                                                     const std::vector<std::string>& names) {
  const Spectrum spectrum = mercer_spectrum(config.kernel, config.max_frequency, config.spectral_nodes);
  std::vector<ResolvedTarget> resolved;
  for (const auto& name : names) {
    ExperimentConfig single = config;
    single.target = name;
    resolved.push_back(resolve_target(single, spectrum));
  }

  const auto grid = quadrature_grid(config.quad_nodes);
  const std::size_t targets_count = resolved.size();
  std::vector<Eigen::VectorXd> f_grid(targets_count);
  for (std::size_t k = 0; k < targets_count; ++k) {
    f_grid[k].resize(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t j = 0; j < grid.size(); ++j) {
      f_grid[k][static_cast<Eigen::Index>(j)] = (*resolved[k].target)(grid[j].theta());
    }
  }

  const std::size_t rows = config.n_grid.size();
  const auto repeats = static_cast<std::size_t>(config.repeats);
  const std::size_t cells = rows * repeats;
  // values[target][cell] = {f0, g, m}
  std::vector<std::vector<std::array<double, 3>>> values(
      targets_count, std::vector<std::array<double, 3>>(cells));
  std::vector<std::exception_ptr> failures(cells);
  const double sigma_true2 = config.sigma_true * config.sigma_true;
  const ZonalKernel kernel(config.kernel);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t row = cell / repeats;
    const int repeat = static_cast<int>(cell % repeats);
    const int n = config.n_grid[row];
    try {
      const CellDraw draw = draw_cell(config, n, repeat);
      const double sigma_model2 = config.sigma_model2_at(n);
      PosteriorState state = fit(kernel, draw.points, Eigen::VectorXd::Zero(n), sigma_model2);
      const Eigen::MatrixXd& factor = state.lower;
      const auto lower = factor.triangularView<Eigen::Lower>();
      const Eigen::MatrixXd cross = cross_gram(kernel, state.points, grid);
      Eigen::MatrixXd whitened = cross;
      lower.solveInPlace(whitened);
      Prediction prediction;
      prediction.var =
          (kernel.diagonal() - whitened.colwise().squaredNorm().array()).max(0.0).matrix();
      for (std::size_t k = 0; k < targets_count; ++k) {
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) f[i] = (*resolved[k].target)(state.points[static_cast<std::size_t>(i)].theta());
        const Eigen::VectorXd y = f + config.sigma_true * draw.noise;
        state.dual = lower.solve(y);
        lower.transpose().solveInPlace(state.dual);
        prediction.mean = cross.transpose() * state.dual;
        const TestErrors errors = test_errors(prediction, f_grid[k], sigma_model2, sigma_true2,
                                              config.predictive_noise);
        values[k][cell] = {nsc(state, y, f, sigma_true2), errors.gen_error, errors.excess_mse};
      }
    } catch (const SingularMatrixError& e) {
      failures[cell] = std::make_exception_ptr(SingularMatrixError(
          std::string(e.what()) + " (n=" + std::to_string(n) + ", repeat=" + std::to_string(repeat) + ")"));
    } catch (...) {
      failures[cell] = std::current_exception();
    }
  };

  const int threads = std::clamp(config.threads > 0 ? config.threads : default_thread_count(), 1,
                                 static_cast<int>(cells));
  // Largest n first so the expensive cells do not trail.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells; k = next++) run_cell(cells - 1 - k);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> n_values(config.n_grid.begin(), config.n_grid.end());
  TheoryOptions theory_options;
  theory_options.sigma_model2 = config.sigma_model * config.sigma_model;
  theory_options.sigma_true2 = sigma_true2;
  theory_options.t = config.t;

  std::vector<LearningCurveResult> out;
  for (std::size_t k = 0; k < targets_count; ++k) {
    const TheoryCurve theory = theory_curves(spectrum, resolved[k].expansion, n_values, theory_options);
    LearningCurveResult result;
    result.label = config.kernel.label() + "/" + names[k];
    result.f0_samples.assign(rows, {});
    result.g_samples.assign(rows, {});
    result.m_samples.assign(rows, {});
    for (std::size_t row = 0; row < rows; ++row) {
      for (std::size_t r = 0; r < repeats; ++r) {
        const auto& v = values[k][row * repeats + r];
        result.f0_samples[row].push_back(v[0]);
        result.g_samples[row].push_back(v[1]);
        result.m_samples[row].push_back(v[2]);
      }
      CurveRow line;
      line.n = n_values[row];
      summarize(result.f0_samples[row], line.f0_mean, line.f0_std);
      summarize(result.g_samples[row], line.g_mean, line.g_std);
      summarize(result.m_samples[row], line.m_mean, line.m_std);
      line.f0_det = theory.f0_det[row];
      line.g_det = theory.g_det[row];
      line.m_det = theory.m_det[row];
      result.rows.push_back(line);
    }
    out.push_back(std::move(result));
  }
  return out;
}

LearningCurveResult run_learning_curve(const ExperimentConfig& config) {
  return std::move(run_learning_curves(config, {config.target}).front());
}

}  // namespace gplab
