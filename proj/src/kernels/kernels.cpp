#include "gplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gplab/errors.hpp"

namespace gplab {

double wrap_angle(double theta) {
  double wrapped = theta - kTwoPi * std::floor((theta + kPi) / kTwoPi);
  // floor can land exactly on the excluded endpoint through rounding
  if (wrapped >= kPi) wrapped -= kTwoPi;
  if (wrapped < -kPi) wrapped = -kPi;
  return wrapped;
}

double angle_between(AngularPoint a, AngularPoint b) {
  // |remainder| equals arccos(cos(a - b)) without the cancellation near 0.
  const double delta = std::abs(std::remainder(a.theta() - b.theta(), kTwoPi));
  return std::min(delta, kPi);
}

std::string KernelSpec::kernel_name() const {
  return "arccos" + std::to_string(order_value());
}

std::string KernelSpec::label() const {
  return kernel_name() + (bias ? "/bias" : "/nobias");
}

KernelSpec KernelSpec::parse(std::string_view kernel_name, bool bias) {
  if (kernel_name == "arccos0") return {ArcCosineOrder::zero, bias};
  if (kernel_name == "arccos1") return {ArcCosineOrder::one, bias};
  if (kernel_name == "arccos2") return {ArcCosineOrder::two, bias};
  throw DomainError("unknown kernel '" + std::string(kernel_name) +
                    "' (expected arccos0, arccos1 or arccos2)");
}

std::vector<KernelSpec> all_kernel_specs() {
  return {{ArcCosineOrder::one, false}, {ArcCosineOrder::one, true},
          {ArcCosineOrder::two, false}, {ArcCosineOrder::two, true},
          {ArcCosineOrder::zero, false}, {ArcCosineOrder::zero, true}};
}

double zonal_profile(KernelSpec spec, double delta) {
  constexpr double kSlack = 1e-12;
  if (!(delta >= -kSlack && delta <= kPi + kSlack)) {
    throw DomainError("zonal_profile: delta outside [0, pi]");
  }
  delta = std::clamp(delta, 0.0, kPi);

  double psi = delta;
  double sin_psi = std::sin(delta);
  double cos_psi = std::cos(delta);
  if (spec.bias) {
    // cos(psi_bar) = (cos delta + 1) / 2 = cos^2(delta / 2); build sin and the
    // angle from half-angle terms so small delta keeps full precision.
    const double s = std::sin(0.5 * delta);
    const double c = std::cos(0.5 * delta);
    cos_psi = c * c;
    sin_psi = s * std::sqrt(1.0 + c * c);
    psi = std::atan2(sin_psi, cos_psi);
  }

  switch (spec.order) {
    case ArcCosineOrder::zero:
      return (kPi - psi) / kPi;
    case ArcCosineOrder::one:
      return (sin_psi + (kPi - psi) * cos_psi) / kPi;
    case ArcCosineOrder::two:
      return (3.0 * sin_psi * cos_psi + (kPi - psi) * (1.0 + 2.0 * cos_psi * cos_psi)) / kPi;
  }
  return 0.0;
}

ZonalKernel::ZonalKernel(KernelSpec spec)
    : profile_([spec](double delta) { return zonal_profile(spec, delta); }),
      name_(spec.label()),
      diagonal_(zonal_profile(spec, 0.0)) {}

ZonalKernel::ZonalKernel(std::function<double(double)> profile, std::string name)
    : profile_(std::move(profile)), name_(std::move(name)), diagonal_(profile_(0.0)) {}

GramMatrix gram(const ZonalKernel& kernel, std::span<const AngularPoint> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  GramMatrix out;
  out.entries.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.entries(j, j) = kernel(points[j], points[j]);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double value = kernel(points[i], points[j]);
      out.entries(i, j) = value;
      out.entries(j, i) = value;
    }
  }
  return out;
}

GramMatrix gram(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                const JitterPolicy& policy) {
  GramMatrix out = gram(kernel, points);
  const CholeskyFactor factor =
      jittered_cholesky(out.entries, 0.0, kernel.diagonal(), policy);
  out.jitter_used = factor.jitter_used;
  return out;
}

Eigen::MatrixXd cross_gram(const ZonalKernel& kernel, std::span<const AngularPoint> rows,
                           std::span<const AngularPoint> cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = kernel(rows[i], cols[j]);
    }
  }
  return out;
}

namespace {

bool try_cholesky(const Eigen::MatrixXd& a, double shift, CholeskyFactor& out) {
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() += shift;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) return false;
  Eigen::MatrixXd lower = llt.matrixL();
  const auto diag = lower.diagonal().array();
  if (!diag.allFinite() || (diag <= 0.0).any()) return false;
  out.log_det = 2.0 * diag.log().sum();
  out.lower = std::move(lower);
  return true;
}

}  // namespace

CholeskyFactor jittered_cholesky(const Eigen::MatrixXd& a, double shift, double scale,
                                 const JitterPolicy& policy) {
  CholeskyFactor out;
  if (try_cholesky(a, shift, out)) return out;
  const double ceiling = policy.max * scale * (1.0 + 1e-9);
  for (double jitter = policy.initial * scale; jitter <= ceiling; jitter *= policy.growth) {
    if (try_cholesky(a, shift + jitter, out)) {
      out.jitter_used = jitter;
      return out;
    }
  }
  throw SingularMatrixError("Cholesky failed after jitter escalation to " +
                            std::to_string(policy.max) + " * kappa(0)");
}

}  // namespace gplab
