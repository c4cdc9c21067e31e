#pragma once

// Arc-cosine kernels on the unit circle, written as zonal profiles of the
// angle between two inputs, plus Gram-matrix assembly and a jittered
// Cholesky used by every solver in the library.

#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gplab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps any real angle into [-pi, pi).
double wrap_angle(double theta);

/// A point x = (cos theta, sin theta) on S^1, stored by its canonical angle.
class AngularPoint {
 public:
  constexpr AngularPoint() = default;
  explicit AngularPoint(double theta) : theta_(wrap_angle(theta)) {}

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] AngularPoint rotated(double by) const { return AngularPoint(theta_ + by); }

 private:
  double theta_ = 0.0;
};

/// Geodesic angle in [0, pi] between two points.
double angle_between(AngularPoint a, AngularPoint b);

enum class ArcCosineOrder { zero = 0, one = 1, two = 2 };

struct KernelSpec {
  ArcCosineOrder order = ArcCosineOrder::one;
  bool bias = false;

  /// "arccos0" / "arccos1" / "arccos2".
  [[nodiscard]] std::string kernel_name() const;
  /// Kernel name plus "/bias" or "/nobias".
  [[nodiscard]] std::string label() const;
  [[nodiscard]] int order_value() const { return static_cast<int>(order); }

  /// Throws DomainError for anything but arccos0/1/2.
  static KernelSpec parse(std::string_view kernel_name, bool bias);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// All six arc-cosine kernels in table order (order 1, 2, 0; each without then with bias).
std::vector<KernelSpec> all_kernel_specs();

/// kappa(delta) for the arc-cosine kernel. With bias the angle is replaced by
/// arccos((cos delta + 1) / 2). Throws DomainError if delta leaves [0, pi]
/// by more than 1e-12.
double zonal_profile(KernelSpec spec, double delta);

/// Type-erased zonal kernel k(x, x') = profile(angle_between(x, x')).
class ZonalKernel {
 public:
  explicit ZonalKernel(KernelSpec spec);
  ZonalKernel(std::function<double(double)> profile, std::string name);

  [[nodiscard]] double profile(double delta) const { return profile_(delta); }
  [[nodiscard]] double operator()(AngularPoint a, AngularPoint b) const {
    return profile_(angle_between(a, b));
  }
  /// kappa(0), the prior variance at any point.
  [[nodiscard]] double diagonal() const { return diagonal_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::function<double(double)> profile_;
  std::string name_;
  double diagonal_;
};

struct GramMatrix {
  Eigen::MatrixXd entries;
  double jitter_used = 0.0;
};

/// Diagonal regularization schedule: start at initial * kappa(0), multiply by
/// growth until max * kappa(0), then give up.
struct JitterPolicy {
  double initial = 1e-10;
  double max = 1e-6;
  double growth = 10.0;
};

/// K_ij = k(p_i, p_j); exactly symmetric, no regularization.
GramMatrix gram(const ZonalKernel& kernel, std::span<const AngularPoint> points);

/// As above, but escalates diagonal jitter until K itself admits a Cholesky
/// factorization; jitter_used records what was added.
GramMatrix gram(const ZonalKernel& kernel, std::span<const AngularPoint> points,
                const JitterPolicy& policy);

/// Rectangular cross-covariance: rows follow `rows`, columns follow `cols`.
Eigen::MatrixXd cross_gram(const ZonalKernel& kernel, std::span<const AngularPoint> rows,
                           std::span<const AngularPoint> cols);

struct CholeskyFactor {
  Eigen::MatrixXd lower;
  double jitter_used = 0.0;
  /// log det(L L^T).
  double log_det = 0.0;
};

/// Lower Cholesky factor of (a + shift * I). On failure adds jitter following
/// the policy, scaled by `scale`; throws SingularMatrixError when exhausted.
CholeskyFactor jittered_cholesky(const Eigen::MatrixXd& a, double shift, double scale,
                                 const JitterPolicy& policy = {});

}  // namespace gplab
