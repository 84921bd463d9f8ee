#pragma once

// Flow machinery for ABC fields: trajectories, first-return maps to
// coordinate sections, Newton shooting for periodic orbits, Floquet
// multipliers and the splitting of separatrices under a C perturbation.
//
// Internally all integration runs on lifted (unwrapped) coordinates; the
// torus point is recovered by reduction mod 2π.

#include <array>
#include <complex>
#include <vector>

#include "knotflow/beltrami.hpp"
#include "knotflow/geometry.hpp"

namespace knotflow::flow {

using beltrami::AbcParams;
using Lift = std::array<double, 3>;

struct Sample {
  double t = 0.0;
  Point3 q;
  Lift lift{};  ///< unwrapped coordinates; lift - q is a multiple of 2π
};

struct Trajectory {
  AbcParams params{1.0, 0.0, 0.0};
  std::vector<Sample> samples;
  double tol = 0.0;
};

/// Adaptive Dormand–Prince 5(4) integration, one sample per accepted step.
/// Throws StepUnderflow when the step size collapses below 1e-14.
Trajectory integrate(const AbcParams& p, const Point3& q0, double t_end, double tol = 1e-10);

/// Time-t flow map on lifted coordinates.
Lift flow_map(const AbcParams& p, const Lift& q0, double t, double tol = 1e-10);

/// For C = 0 the (x, z) subsystem has the first integral
/// H = -B sin x - A cos z. Returns max |H(t) - H(0)| over the samples.
/// Throws WrongParams when C ≠ 0.
double conserved_quantity_C0(const Trajectory& traj);

enum class Axis { X = 0, Y = 1, Z = 2 };

struct SectionSpec {
  Axis coordinate = Axis::Y;
  double value = 0.0;  ///< reduced to [0, 2π)
  int direction = 1;   ///< +1 or -1: sign of the crossing velocity

  SectionSpec() = default;
  SectionSpec(Axis c, double v, int dir);
};

struct Return {
  Point3 q1;
  Lift lift{};
  double flight = 0.0;
};

/// First directed return of the orbit through q0 to the section. q0 must
/// lie on the section (within 1e-8) with the field transverse there.
/// Throws NoReturn when max_time elapses first.
Return poincare_map(const AbcParams& p, const SectionSpec& s, const Point3& q0, double max_time,
                    double tol = 1e-10);

enum class Stability { Hyperbolic, Elliptic, Parabolic };

struct Multipliers {
  std::complex<double> first;   ///< larger modulus
  std::complex<double> second;
  Stability kind = Stability::Parabolic;

  std::complex<double> product() const { return first * second; }
};

const char* to_string(Stability s);

struct PeriodicOrbit {
  Point3 base;
  double period = 0.0;
  Multipliers multipliers;
  double residual = 0.0;  ///< |Φ_T(base) - base| on the torus
  SectionSpec section;
};

struct ShootingOptions {
  double tol = 1e-10;        ///< Newton stops when the return error is below this
  int max_iter = 50;
  double integration_tol = 1e-11;
  double max_time = 100.0;   ///< return-time budget per map evaluation
};

/// Newton shooting on (return map - identity) in the two section
/// coordinates, Jacobian from the variational equations. The section
/// coordinate of `guess` is replaced by the section value.
/// Throws NoConvergence after opts.max_iter iterations.
PeriodicOrbit find_periodic_orbit(const AbcParams& p, const SectionSpec& s, const Point3& guess,
                                  const ShootingOptions& opts = {});

using Matrix3 = beltrami::Matrix3;

/// Monodromy Φ_T(base) of the linearized flow, as the product of
/// transition matrices over segments of length ≤ 1; `det` is the product
/// of the segment determinants.
struct Monodromy {
  Matrix3 matrix{};
  double det = 1.0;
};
Monodromy monodromy(const AbcParams& p, const Lift& base, double period, double tol = 1e-11);

enum class MonodromyMode { Variational, FiniteDifference };

/// Transverse multipliers: eigenvalues of the monodromy induced on the
/// quotient by the flow direction.
Multipliers floquet(const AbcParams& p, const PeriodicOrbit& orbit, double tol = 1e-11,
                    MonodromyMode mode = MonodromyMode::Variational);

struct SplittingProfile {
  double C = 0.0;
  std::vector<double> section_param;    ///< y at the transversal, ascending in [0, 2π)
  std::vector<double> signed_distance;  ///< z_unstable - z_stable

  double max_abs() const;
  /// Number of cyclic sign changes between consecutive samples.
  int sign_changes() const;
};

struct SplittingOptions {
  double offset = 1e-7;
  double tol = 1e-11;
  double max_time = 200.0;
};

/// Splitting of the separatrix of the saddle orbit through (π/2, ·, π) at
/// parameters (1, B, C). The unstable manifold of the orbit and the stable
/// manifold of its translate by 2π in x are grown from offsets along the
/// Floquet vectors and cut with the plane x = 3π/2; the profile is the
/// z-gap between the two curves, sampled over one period in y.
/// `base` must be (1, B, 0) with 0 < B < 1. Throws NoConvergence when the
/// saddle orbit cannot be found at the requested C.
SplittingProfile separatrix_splitting(const AbcParams& base, double C, int n_samples,
                                      const SplittingOptions& opts = {});

}  // namespace knotflow::flow
