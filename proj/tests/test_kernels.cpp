#include <cmath>
#include <random>

#include "doctest.h"

#include "gplab/errors.hpp"
#include "gplab/kernels.hpp"

using namespace gplab;

namespace {

std::vector<AngularPoint> uniform_grid(int n) {
  std::vector<AngularPoint> out;
  for (int i = 0; i < n; ++i) out.emplace_back(-kPi + kTwoPi * i / n);
  return out;
}

std::vector<AngularPoint> random_points(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<AngularPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(u(rng));
  return out;
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("angular points wrap into [-pi, pi)") {
  CHECK(AngularPoint(kPi).theta() == doctest::Approx(-kPi));
  CHECK(AngularPoint(3.0 * kPi + 0.25).theta() == doctest::Approx(-kPi + 0.25));
  CHECK(AngularPoint(-kPi).theta() == doctest::Approx(-kPi));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = AngularPoint(u(rng)).theta();
    CHECK(t >= -kPi);
    CHECK(t < kPi);
  }
}

TEST_CASE("angle_between") {
  CHECK(angle_between(AngularPoint(0.0), AngularPoint(0.0)) == 0.0);
  CHECK(angle_between(AngularPoint(0.0), AngularPoint(kPi)) == doctest::Approx(kPi));
  CHECK(angle_between(AngularPoint(0.0), AngularPoint(kPi / 3)) == doctest::Approx(kPi / 3));
  // Agrees with the arccos of the inner product.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    const double inner = std::clamp(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b), -1.0, 1.0);
    CHECK(angle_between(AngularPoint(a), AngularPoint(b)) == doctest::Approx(std::acos(inner)).epsilon(1e-7));
  }
}

TEST_CASE("zonal profile values") {
  const KernelSpec o1{ArcCosineOrder::one, false};
  const KernelSpec o1b{ArcCosineOrder::one, true};
  const KernelSpec o0{ArcCosineOrder::zero, false};
  CHECK(zonal_profile(o1, 0.0) == doctest::Approx(1.0));
  CHECK(zonal_profile(o1, kPi) == doctest::Approx(0.0));
  CHECK(zonal_profile(o1b, kPi) == doctest::Approx(1.0 / kPi));
  CHECK(zonal_profile(o0, kPi / 2) == doctest::Approx(0.5));
  CHECK(zonal_profile(KernelSpec{ArcCosineOrder::two, false}, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("bias angle matches the direct arccos form") {
  for (const auto spec : all_kernel_specs()) {
    if (!spec.bias) continue;
    for (int i = 0; i <= 200; ++i) {
      const double delta = kPi * i / 200.0;
      const double psi = std::acos(0.5 * (std::cos(delta) + 1.0));
      const KernelSpec plain{spec.order, false};
      CHECK(zonal_profile(spec, delta) == doctest::Approx(zonal_profile(plain, psi)).epsilon(1e-7));
    }
  }
}

TEST_CASE("zonal profile domain") {
  const KernelSpec o1{};
  CHECK_THROWS_AS(zonal_profile(o1, -0.1), DomainError);
  CHECK_THROWS_AS(zonal_profile(o1, kPi + 0.1), DomainError);
  CHECK_NOTHROW(zonal_profile(o1, -1e-13));
  CHECK_NOTHROW(zonal_profile(o1, kPi + 1e-13));
}

TEST_CASE("profiles are finite and maximal on the diagonal") {
  for (const auto spec : all_kernel_specs()) {
    const double peak = zonal_profile(spec, 0.0);
    for (int i = 0; i <= 1000; ++i) {
      const double v = zonal_profile(spec, kPi * i / 1000.0);
      CHECK(std::isfinite(v));
      CHECK(v <= peak + 1e-15);
    }
  }
}

TEST_CASE("kernel spec parsing and names") {
  CHECK(KernelSpec::parse("arccos2", true) == KernelSpec{ArcCosineOrder::two, true});
  CHECK(KernelSpec::parse("arccos0", false).label() == "arccos0/nobias");
  CHECK_THROWS_AS(KernelSpec::parse("bogus", false), DomainError);
  CHECK_THROWS_AS(KernelSpec::parse("arccos3", false), DomainError);
  CHECK(all_kernel_specs().size() == 6);
}

TEST_CASE("gram examples") {
  const ZonalKernel k(KernelSpec{});
  const std::vector<AngularPoint> same = {AngularPoint(0.0), AngularPoint(0.0)};
  const GramMatrix g = gram(k, same);
  CHECK(g.entries.isApprox(Eigen::MatrixXd::Ones(2, 2)));
  CHECK(g.jitter_used == 0.0);
  const std::vector<AngularPoint> opposite = {AngularPoint(0.0), AngularPoint(kPi)};
  const GramMatrix h = gram(k, opposite);
  CHECK((h.entries - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("64-point uniform grid gram of order 2 with bias is PSD") {
  const ZonalKernel k(KernelSpec{ArcCosineOrder::two, true});
  const GramMatrix g = gram(k, uniform_grid(64));
  CHECK(min_eigenvalue(g.entries) >= -1e-8);
}

TEST_CASE("gram is symmetric, rotation invariant and PSD") {
  unsigned seed = 1;
  for (const auto spec : all_kernel_specs()) {
    const ZonalKernel k(spec);
    for (const std::size_t n : {5u, 64u, 256u}) {
      const auto points = random_points(n, seed++);
      const GramMatrix g = gram(k, points);
      CHECK(g.entries == g.entries.transpose());
      CHECK(min_eigenvalue(g.entries) >= -1e-8 * k.diagonal());
      std::vector<AngularPoint> rotated;
      for (const auto p : points) rotated.push_back(p.rotated(0.7314));
      const GramMatrix r = gram(k, rotated);
      CHECK((r.entries - g.entries).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("cross gram matches pointwise evaluation") {
  const ZonalKernel k(KernelSpec{ArcCosineOrder::zero, true});
  const auto rows = random_points(7, 5);
  const auto cols = random_points(3, 6);
  const Eigen::MatrixXd c = cross_gram(k, rows, cols);
  REQUIRE(c.rows() == 7);
  REQUIRE(c.cols() == 3);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(c(i, j) == k(rows[i], cols[j]));
  }
}

TEST_CASE("jitter policy") {
  const ZonalKernel k(KernelSpec{});
  // Duplicated inputs make K singular; the policy regularizes it.
  const std::vector<AngularPoint> dup(4, AngularPoint(0.3));
  const GramMatrix g = gram(k, dup, JitterPolicy{});
  CHECK(g.jitter_used > 0.0);
  CHECK(g.jitter_used <= 1e-6);
  const CholeskyFactor f = jittered_cholesky(gram(k, dup).entries, 0.0, 1.0);
  Eigen::MatrixXd rebuilt = f.lower * f.lower.transpose();
  rebuilt.diagonal().array() -= f.jitter_used;
  CHECK((rebuilt - Eigen::MatrixXd::Ones(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
  // No shift is needed once the noise term is present.
  CHECK(jittered_cholesky(gram(k, dup).entries, 0.01, 1.0).jitter_used == 0.0);
  // An indefinite matrix exhausts the schedule.
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(jittered_cholesky(bad, 0.0, 1.0), SingularMatrixError);
}

TEST_CASE("cholesky log determinant") {
  Eigen::MatrixXd a(2, 2);
  a << 4.0, 2.0, 2.0, 3.0;
  const CholeskyFactor f = jittered_cholesky(a, 1.0, 1.0);
  CHECK(f.log_det == doctest::Approx(std::log(5.0 * 4.0 - 4.0)));
}
