#pragma once

// ABC fields on the flat three-torus: velocity, curl, divergence, the
// associated contact form ι_u g, Reeb conditions and singular set; plus
// the standard tight form on the unit three-sphere.
//
// Metric and volume are the flat ones (dx² + dy² + dz², dx∧dy∧dz), so
// vectors and covectors are identified componentwise.

#include <array>
#include <variant>
#include <vector>

#include "knotflow/geometry.hpp"

namespace knotflow::beltrami {

class AbcParams {
 public:
  constexpr AbcParams(double a, double b, double c) : a_(a), b_(b), c_(c) {}

  constexpr double A() const { return a_; }
  constexpr double B() const { return b_; }
  constexpr double C() const { return c_; }

  /// 1 = A ≥ B ≥ C ≥ 0.
  bool is_normalized() const;
  /// The sum of squares of the two smaller parameters is below the square
  /// of the largest one. For normalized parameters this reads B² + C² < 1.
  bool is_nonsingular() const;

  friend bool operator==(const AbcParams&, const AbcParams&) = default;

 private:
  double a_, b_, c_;
};

/// Affine symmetry of T³ relating two ABC fields:
/// q' = L q + shift, and u'(q') = time_scale · L u(q).
struct TorusSymmetry {
  std::array<std::array<int, 3>, 3> linear{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 shift{};
  double time_scale = 1.0;

  Point3 apply(const Point3& q) const;
  Vec3 push(const Vec3& v) const;
};

struct Normalized {
  AbcParams params;
  TorusSymmetry symmetry;
};

/// Reorder and rescale to 1 = A ≥ B ≥ C ≥ 0 using the cyclic and
/// transposition symmetries of the ABC family. Throws std::invalid_argument
/// for negative or all-zero parameters.
Normalized normalize(const AbcParams& p);

/// u = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).
Vec3 abc_velocity(const AbcParams& p, double x, double y, double z);
inline Vec3 abc_velocity(const AbcParams& p, const Point3& q) {
  return abc_velocity(p, q.x(), q.y(), q.z());
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Du, row i = gradient of component i.
Matrix3 abc_jacobian(const AbcParams& p, double x, double y, double z);

struct ClosedForm {};
struct FiniteDifference {
  double h = 1e-4;
};
using CurlMode = std::variant<ClosedForm, FiniteDifference>;

Vec3 abc_curl(const AbcParams& p, const Point3& q, CurlMode mode);

/// Central-difference divergence with step h.
double abc_divergence(const AbcParams& p, const Point3& q, double h);

struct SingularityReport {
  std::vector<Point3> zeros;
  /// Smallest |u| found after local refinement of the grid minima.
  double min_speed = 0.0;
  Point3 argmin;
  /// min over the grid of |u| minus Lipschitz(u) times the covering radius
  /// of the grid; when positive, |u| > 0 everywhere on T³.
  double lower_bound = 0.0;
  bool nonsingular = false;
};

/// Grid scan of |u|² followed by damped Gauss–Newton refinement.
/// Requires normalized parameters (NotNormalized otherwise) and grid_n ≥ 8.
SingularityReport abc_singular_points(const AbcParams& p, int grid_n = 64, double tol = 1e-10);

struct ContactFormValue {
  double ax = 0.0, ay = 0.0, az = 0.0;
  double operator()(const Vec3& v) const { return ax * v.vx + ay * v.vy + az * v.vz; }
};

/// α = ι_u g; the coefficients are the velocity components.
ContactFormValue abc_contact_form(const AbcParams& p, const Point3& q);

/// (α ∧ dα)/μ with dα from central differences; equals |u|² for ABC fields.
double contact_volume_density(const AbcParams& p, const Point3& q, double h = 1e-4);

struct ReebResidual {
  double r1 = 0.0;  ///< |α(X) - 1| with X = u/|u|²
  double r2 = 0.0;  ///< sup-norm of ι_X dα
};

/// Throws SingularPoint when |u(q)| < tol.
ReebResidual reeb_residual(const AbcParams& p, const Point3& q, double h = 1e-4,
                           double tol = 1e-8);

class Point4 {
 public:
  /// Throws NotOnSphere if |q| deviates from 1 by more than 1e-9.
  Point4(double x1, double x2, double x3, double x4);
  const std::array<double, 4>& coords() const { return x_; }

 private:
  std::array<double, 4> x_;
};

struct TightReeb {
  std::array<double, 4> reeb{};  ///< X₀ = 2(-x2, x1, -x4, x3), tangent to the Hopf fibre
  double alpha_on_reeb = 0.0;    ///< α₀(X₀), identically 1
  /// sup over an orthonormal tangent frame of |dα₀(X₀, e)|; zero up to rounding
  double dalpha_residual = 0.0;
};

/// α₀ = ½(x1 dx2 - x2 dx1 + x3 dx4 - x4 dx3) on the unit sphere.
TightReeb std_tight_eval(const Point4& q);

}  // namespace knotflow::beltrami
