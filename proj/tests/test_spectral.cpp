#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"

#include "gplab/errors.hpp"
#include "gplab/philox.hpp"
#include "gplab/serialize.hpp"
#include "gplab/spectral.hpp"
#include "gplab/theory.hpp"

using namespace gplab;

namespace {

const Spectrum& cached(KernelSpec spec) {
  static std::map<std::string, Spectrum> cache;
  auto it = cache.find(spec.label());
  if (it == cache.end()) it = cache.emplace(spec.label(), mercer_spectrum(spec)).first;
  return it->second;
}

const KernelSpec kO1{ArcCosineOrder::one, false};
const KernelSpec kO1b{ArcCosineOrder::one, true};
const KernelSpec kO2{ArcCosineOrder::two, false};

double closed_form_o1(int m) {
  if (m == 0) return 4.0 / (kPi * kPi);
  if (m == 1) return 0.25;
  if (m % 2 == 1) return 0.0;
  const double d = static_cast<double>(m) * m - 1.0;
  return 4.0 / (kPi * kPi * d * d);
}

Spectrum synthetic_spectrum(double exponent, std::size_t count) {
  Spectrum s;
  for (std::size_t p = 1; p <= count; ++p) {
    s.modes.push_back({static_cast<int>(p), Parity::cosine, std::pow(static_cast<double>(p), -exponent)});
  }
  s.positive_count = count;
  return s;
}

}  // namespace

TEST_CASE("philox known answers") {
  const Philox4x32 zero(0);
  CHECK(zero({0, 0, 0, 0}) == Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const Philox4x32 ones(~std::uint64_t{0});
  CHECK(ones({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("keyed stream is addressable and standard normal") {
  const KeyedStream a(42, 1, 7, 3), b(42, 1, 7, 3), c(42, 1, 7, 4);
  CHECK(a.normal(17) == b.normal(17));
  CHECK(a.normal(17) != c.normal(17));
  double sum = 0.0, sum_sq = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double z = a.normal(static_cast<std::uint32_t>(i));
    sum += z;
    sum_sq += z * z;
    const double u = a.uniform(static_cast<std::uint32_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(std::abs(sum / count) < 4.0 / std::sqrt(count));
  CHECK(std::abs(sum_sq / count - 1.0) < 4.0 * std::sqrt(2.0 / count));
}

TEST_CASE("order-1 spectrum matches closed forms") {
  const Spectrum& s = cached(kO1);
  REQUIRE(s.modes.size() >= 3);
  CHECK(s.modes[0].parity == Parity::constant);
  CHECK(s.modes[0].eigenvalue == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-12));
  CHECK(s.modes[1].frequency == 1);
  CHECK(s.modes[1].parity == Parity::cosine);
  CHECK(s.modes[2].parity == Parity::sine);
  CHECK(s.modes[1].eigenvalue == doctest::Approx(0.25).epsilon(1e-12));
  for (int m = 2; m <= 40; m += 2) {
    const double c = s.frequency_eigenvalues[static_cast<std::size_t>(m)];
    CHECK(std::abs(c - closed_form_o1(m)) <= 1e-10 * closed_form_o1(m));
  }
  for (int m = 3; m <= s.resolved_frequency; m += 2) CHECK(s.is_null_frequency(m));
  for (const Mode& mode : s.null_modes) CHECK(mode.frequency % 2 == 1);
  CHECK_FALSE(s.frequency_in_span(601));
  CHECK(s.frequency_in_span(600));
}

TEST_CASE("spectrum ordering and trace bound") {
  for (const auto spec : all_kernel_specs()) {
    const Spectrum& s = cached(spec);
    double trace = 0.0;
    for (std::size_t p = 0; p < s.modes.size(); ++p) {
      const Mode& mode = s.modes[p];
      CHECK(mode.eigenvalue > 0.0);
      trace += mode.eigenvalue;
      if (p == 0) continue;
      const Mode& prev = s.modes[p - 1];
      CHECK(prev.eigenvalue >= mode.eigenvalue);
      if (prev.eigenvalue == mode.eigenvalue && prev.frequency == mode.frequency) {
        CHECK(prev.parity == Parity::cosine);
        CHECK(mode.parity == Parity::sine);
      }
    }
    CHECK(trace <= s.kappa0 + 1e-8);
    for (const double c : s.frequency_eigenvalues) CHECK(c >= -1e-12 * s.kappa0);
  }
}

TEST_CASE("spectrum preconditions") {
  CHECK_THROWS_AS(mercer_spectrum(kO1, 512, 2047), QuadratureResolutionError);
  CHECK_THROWS_AS(mercer_spectrum(kO1, 0, 64), DomainError);
}

TEST_CASE("eigenfunction values and orthonormality") {
  CHECK(eigenfunction_value({0, Parity::constant, 1.0}, 1.234) == 1.0);
  CHECK(eigenfunction_value({2, Parity::cosine, 1.0}, 0.0) == doctest::Approx(std::sqrt(2.0)));
  const Spectrum& s = cached(kO1b);
  const int nodes = 4096;
  std::vector<double> theta(nodes);
  for (int j = 0; j < nodes; ++j) theta[j] = -kPi + (j + 0.5) * kTwoPi / nodes;
  const std::size_t count = 50;
  Eigen::MatrixXd values(nodes, static_cast<Eigen::Index>(count));
  for (std::size_t p = 0; p < count; ++p) {
    for (int j = 0; j < nodes; ++j) values(j, static_cast<Eigen::Index>(p)) = eigenfunction_value(s.modes[p], theta[j]);
  }
  const Eigen::MatrixXd g = values.transpose() * values / nodes;
  CHECK((g - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() <= 1e-8);
  for (std::size_t p = 0; p < count; ++p) CHECK(std::abs(g(p, p) - 1.0) <= 1e-10);
}

TEST_CASE("mercer reconstruction bound") {
  for (const auto spec : all_kernel_specs()) {
    const Spectrum& s = cached(spec);
    const ZonalKernel k(spec);
    // Tail bound from the fitted power law, summed to a large cutoff plus an integral remainder.
    double tail = 0.0;
    for (int m = s.resolved_frequency + 1; m <= 1 << 22; ++m) {
      if (const auto lambda = s.tail_eigenvalue(m)) tail += 2.0 * *lambda;
    }
    tail += s.tail_trace_bound() * 1e-3;
    double worst = 0.0;
    for (int i = 0; i < 1024; ++i) {
      const double delta = kPi * i / 1023.0;
      const double theta1 = 0.3, theta2 = 0.3 + delta;
      double sum = 0.0;
      for (const Mode& mode : s.modes) {
        sum += mode.eigenvalue * eigenfunction_value(mode, theta1) * eigenfunction_value(mode, theta2);
      }
      worst = std::max(worst, std::abs(k.profile(delta) - sum));
    }
    INFO(spec.label());
    CHECK(worst <= tail + 1e-8);
  }
}

TEST_CASE("truncated mercer kernel reproduces the kernel") {
  const Spectrum& s = cached(kO1);
  const ZonalKernel approx = truncated_mercer_kernel(s, s.max_frequency + 1);
  const ZonalKernel exact(kO1);
  for (int i = 0; i <= 20; ++i) {
    const double delta = kPi * i / 20.0;
    CHECK(approx.profile(delta) == doctest::Approx(exact.profile(delta)).epsilon(1e-6));
  }
}

TEST_CASE("alpha estimation") {
  CHECK(estimate_alpha(synthetic_spectrum(3.0, 300)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_alpha(synthetic_spectrum(3.0, 12)), InsufficientDataError);
}

TEST_CASE("rank-window alpha on arc-cosine spectra") {
  CHECK(estimate_alpha(cached(kO1)) == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  CHECK(estimate_alpha(cached(kO2)) == doctest::Approx(6.0).epsilon(0.15 / 6.0));
  CHECK(std::abs(estimate_alpha(cached(kO1b)) - 4.0) <= 0.15);
}

TEST_CASE("tail alpha estimation") {
  const std::map<int, double> nominal = {{0, 2.0}, {1, 4.0}, {2, 6.0}};
  for (const auto spec : all_kernel_specs()) {
    INFO(spec.label());
    CHECK(std::abs(estimate_tail_alpha(cached(spec)) - nominal.at(spec.order_value())) <= 0.05);
  }
}

TEST_CASE("least squares") {
  const LineFit fit = least_squares({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(least_squares({1.0}, {1.0}), InsufficientDataError);
}

TEST_CASE("target expansion examples") {
  const Spectrum& s = cached(kO1);
  const TargetExpansion cos2 = target_expansion(targets::cos2(), s);
  for (std::size_t p = 0; p < s.modes.size(); ++p) {
    const Mode& mode = s.modes[p];
    if (mode.frequency == 2 && mode.parity == Parity::cosine) {
      CHECK(cos2.mu[p] == doctest::Approx(1.0 / std::sqrt(2.0)));
    } else {
      CHECK(cos2.mu[p] == 0.0);
    }
  }
  CHECK(cos2.mu0 == 0.0);
  CHECK(estimate_beta(cos2) == kInfinity);

  // theta^2: the odd cosine coefficients 4 (-1)^m / m^2 for m >= 3 are out of span.
  const TargetExpansion sq = target_expansion(targets::theta_squared(), s);
  long double oracle = 0.0L;
  for (long m = 3; m < 20000001; m += 2) oracle += 0.5L * 16.0L / (static_cast<long double>(m) * m * m * m);
  CHECK(sq.mu0_positive());
  CHECK(sq.mu0 == doctest::Approx(std::sqrt(static_cast<double>(oracle))).epsilon(1e-12));
  CHECK(target_expansion(targets::theta_squared(), cached(kO1b)).mu0 == 0.0);

  CHECK(estimate_beta(target_expansion(targets::sawtooth(), s)) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(estimate_beta(target_expansion(targets::shifted_abs_squared(), s)) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("quadrature expansion agrees with the closed form") {
  const Spectrum& s = cached(kO1b);
  const Target user("user_cos2", [](double t) { return std::cos(2.0 * t); });
  const TargetExpansion numeric = target_expansion(user, s);
  const TargetExpansion exact = target_expansion(targets::cos2(), s);
  for (std::size_t p = 0; p < s.modes.size(); ++p) CHECK(std::abs(numeric.mu[p] - exact.mu[p]) <= 1e-10);
  CHECK(numeric.mu0 <= 1e-6);
  CHECK_THROWS_AS(target_expansion(user, s, 64), QuadratureResolutionError);
}

TEST_CASE("parseval for the built-in targets") {
  for (const auto spec : all_kernel_specs()) {
    for (const char* name : {"zero", "cos2", "theta_sq", "abs_shift_sq", "tent", "sign", "sawtooth"}) {
      const Target f = targets::by_name(name);
      const TargetExpansion e = target_expansion(f, cached(spec));
      double captured = 0.0;
      for (const double mu : e.mu) captured += mu * mu;
      const double norm_sq = e.l2_norm * e.l2_norm;
      INFO(spec.label() << " " << name);
      CHECK(std::abs(captured + e.tail_energy + e.mu0 * e.mu0 - norm_sq) <= 1e-6 * std::max(norm_sq, 1e-300));
      CHECK(e.mu0 >= 0.0);
    }
  }
}

TEST_CASE("closed-form norms agree with quadrature") {
  for (const char* name : {"cos2", "theta_sq", "abs_shift_sq", "tent", "sign", "sawtooth"}) {
    const Target f = targets::by_name(name);
    const int nodes = 1 << 16;
    long double sum = 0.0L;
    for (int j = 0; j < nodes; ++j) {
      const double v = f(-kPi + (j + 0.5) * kTwoPi / nodes);
      sum += static_cast<long double>(v) * v;
    }
    INFO(name);
    CHECK(static_cast<double>(sum / nodes) == doctest::Approx(*f.l2_norm_sq()).epsilon(1e-6));
    CHECK(f.series()->energy(0) + f.series()->tail_energy(0, FrequencyClass::all) ==
          doctest::Approx(*f.l2_norm_sq()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(targets::by_name("nope"), DomainError);
}

TEST_CASE("rate predictions") {
  RatePrediction p = predict_rates(4.0, kInfinity, false);
  CHECK(p.exp_nsc == doctest::Approx(0.25));
  CHECK(p.exp_gen == doctest::Approx(-0.75));
  p = predict_rates(4.0, 1.0, false);
  CHECK(p.exp_nsc == doctest::Approx(0.75));
  CHECK(p.exp_gen == doctest::Approx(-0.25));
  RateOptions options;
  options.mu0 = 0.3;
  p = predict_rates(4.0, 2.0, true, 0.0, options);
  CHECK(p.exp_nsc == 1.0);
  CHECK(p.exp_gen == 0.0);
  CHECK(p.constant_gen == doctest::Approx(0.09 / 0.02));
  CHECK(p.constant_mse == doctest::Approx(0.09));
  CHECK(predict_rates(2.0, 1.0, false).exp_gen == doctest::Approx(-0.5));
  options.noiseless = true;
  CHECK(predict_rates(4.0, 1.0, false, 0.0, options).exp_mse == doctest::Approx(-0.25));
  CHECK_THROWS_AS(predict_rates(1.0, 2.0, false), DomainError);
  CHECK_THROWS_AS(predict_rates(4.0, 0.5, false), DomainError);
  CHECK_THROWS_AS(predict_rates(4.0, 2.0, false, 1.0), DomainError);
}

TEST_CASE("rate prediction invariants and monotonicity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(1.01, 10.0), ub(0.51, 6.0), uu(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = ua(rng), beta = ub(rng);
    // Noise exponents with 1 - alpha < t < 1.
    const double t = 1.0 - alpha + (alpha - 1e-3) * uu(rng);
    const RatePrediction p = predict_rates(alpha, beta, false, t);
    CHECK(p.exp_nsc > 0.0);
    CHECK(p.exp_nsc <= 1.0);
    CHECK(p.exp_gen <= 0.0);
    CHECK(p.exp_mse <= 0.0);
    CHECK(predict_rates(alpha, beta + 0.5, false, t).exp_gen <= p.exp_gen);
    CHECK(predict_rates(alpha, beta, true, t).exp_nsc >= p.exp_nsc);
  }
}

TEST_CASE("theory curves: trivial limits") {
  const Spectrum& s = cached(kO1);
  const auto grid = power_grid(2.0, 4, 16);
  TheoryOptions noiseless;
  noiseless.sigma_true2 = 0.0;
  const TheoryCurve zero = theory_curves(s, target_expansion(targets::zero(), s), grid, noiseless);
  for (const double m : zero.m_det) CHECK(m == 0.0);
  const TargetExpansion sq = target_expansion(targets::theta_squared(), s);
  const TheoryCurve plateau = theory_curves(s, sq, power_grid(2.0, 20, 30));
  CHECK(plateau.g_det.back() == doctest::Approx(sq.mu0 * sq.mu0 / 0.02).epsilon(1e-3));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::isfinite(zero.f0_det[i]));
    if (i > 0) {
      CHECK(zero.g_det[i] <= zero.g_det[i - 1]);
    }
  }
}

TEST_CASE("theory curves against the closed-form order-1 spectrum") {
  const Spectrum& s = cached(kO1);
  const auto grid = power_grid(2.0, 4, 16);
  const TheoryCurve curve = theory_curves(s, target_expansion(targets::cos2(), s), grid);
  const double s2 = 0.01;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = grid[i];
    long double f0 = 0.0L, g = 0.0L, m = 0.0L;
    for (int freq = 0; freq <= 1 << 20; ++freq) {
      const double lambda = closed_form_o1(freq);
      if (lambda == 0.0) continue;
      const double count = freq == 0 ? 1.0 : 2.0;
      const double x = n * lambda / s2;
      f0 += 0.5 * count * (std::log1p(x) - x / (1.0 + x));
      g += count * lambda * x / ((1.0 + x) * (1.0 + x));
    }
    const double x2 = n * closed_form_o1(2) / s2;
    m = g + 0.5 / ((1.0 + x2) * (1.0 + x2));
    f0 += n / (2.0 * s2) * 0.5 / (1.0 + x2);
    g = (g + 0.5 / ((1.0 + x2) * (1.0 + x2))) / (2.0 * s2);
    CHECK(curve.f0_det[i] == doctest::Approx(static_cast<double>(f0)).epsilon(1e-6));
    CHECK(curve.g_det[i] == doctest::Approx(static_cast<double>(g)).epsilon(1e-6));
    CHECK(curve.m_det[i] == doctest::Approx(static_cast<double>(m)).epsilon(1e-6));
  }
}

TEST_CASE("theory curve slope for cos2 on order 1") {
  const Spectrum& s = cached(kO1);
  const auto grid = power_grid(2.0, 8, 16);
  const TheoryCurve curve = theory_curves(s, target_expansion(targets::cos2(), s), grid);
  std::vector<double> lx, lg;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lx.push_back(std::log(grid[i]));
    lg.push_back(std::log(curve.g_det[i]));
  }
  CHECK(least_squares(lx, lg).slope == doctest::Approx(-0.75).epsilon(0.05 / 0.75));
}

TEST_CASE("theory curves truncation guard") {
  const Spectrum& s = cached(KernelSpec{ArcCosineOrder::zero, false});
  TheoryOptions strict;
  strict.tail_tol = 1e-8;
  const auto grid = power_grid(2.0, 4, 6);
  CHECK_THROWS_AS(theory_curves(s, target_expansion(targets::tent(), s), grid, strict), TruncationError);
  CHECK_NOTHROW(theory_curves(s, target_expansion(targets::tent(), s), grid));
}

TEST_CASE("power-law sum regimes") {
  CHECK(classify_regime(3.0, 2.0, 2.0) == PowerLawRegime::head_dominated);
  CHECK(classify_regime(2.0, 1.0, 1.0) == PowerLawRegime::logarithmic);
  CHECK(classify_regime(4.0, 1.0, 1.0) == PowerLawRegime::tail_dominated);
  CHECK_THROWS_AS(classify_regime(1.0, 1.0, 1.0), DomainError);
  CHECK(to_string(PowerLawRegime::head_dominated) == "m^((1-s1)/s2)");
  std::vector<double> ratios;
  for (const double m : {1e3, 1e4, 1e5}) ratios.push_back(powerlaw_sum(1.0, 1.0, 3.0, 2.0, 2.0, m, 1000000) / (1.0 / m));
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo <= 1.5);
  CHECK(powerlaw_sum(2.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(powerlaw_sum(1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 100000001), DomainError);
  CHECK_THROWS_AS(powerlaw_sum(-1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 10), DomainError);
}

TEST_CASE("prior samples") {
  const Spectrum& s = cached(kO1);
  const TargetExpansion a = sample_target_from_prior(s, 50, 99);
  const TargetExpansion b = sample_target_from_prior(s, 50, 99);
  CHECK(a.mu == b.mu);
  CHECK(a.mu0 == 0.0);
  CHECK_THROWS_AS(sample_target_from_prior(s, s.positive_count + 1, 1), DomainError);

  const int draws = 10000;
  std::vector<double> second_moment(10, 0.0);
  for (int d = 0; d < draws; ++d) {
    const TargetExpansion e = sample_target_from_prior(s, 10, static_cast<std::uint64_t>(d) + 1000);
    for (int p = 0; p < 10; ++p) second_moment[p] += e.mu[p] * e.mu[p] / draws;
  }
  for (int p = 0; p < 10; ++p) CHECK(second_moment[p] == doctest::Approx(s.modes[p].eigenvalue).epsilon(0.05));

  const TargetExpansion wide = sample_target_from_prior(s, 400, 3);
  CHECK(std::abs(estimate_beta(wide) - 2.0) <= 0.2);

  // The reconstructed function has the sampled expansion.
  const Target f = target_from_expansion(s, a, "draw");
  const TargetExpansion back = target_expansion(f, s);
  for (std::size_t p = 0; p < 50; ++p) CHECK(back.mu[p] == doctest::Approx(a.mu[p]).epsilon(1e-12));
}

TEST_CASE("serialization") {
  const Spectrum& s = cached(kO1);
  std::ostringstream csv;
  write_spectrum_csv(csv, s);
  std::istringstream in(csv.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "rank,frequency,parity,eigenvalue");
  CHECK(first.rfind("1,0,constant,0.40528473456935", 0) == 0);
  const auto j = to_json(s);
  CHECK(j["modes"].size() == s.modes.size());
  const auto e = to_json(target_expansion(targets::cos2(), s));
  CHECK(e["beta"] == "inf");
  std::ostringstream mu;
  write_expansion_csv(mu, target_expansion(targets::cos2(), s));
  CHECK(mu.str().rfind("rank,mu\n1,0\n", 0) == 0);
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(0.1) == "0.10000000000000001");
}
