#pragma once

// Characteristic foliations in the model contact structure
// λ = dz + r² dθ on R³ (cylindrical coordinates), and annuli
// r = √g(θ, z) over S¹ × [-1, 1] whose leaf-sliding monodromy from
// z = -1 to z = +1 is a prescribed circle diffeomorphism.

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "knotflow/geometry.hpp"

namespace knotflow::contact {

/// Slope dz/dθ of the characteristic line of the cylinder {r = const}.
double characteristic_slope(double r);

/// Orientation-preserving circle map stored as uniform samples of a lift,
/// F(θ_i) at θ_i = 2πi/N, interpolated by monotone piecewise cubics
/// (Fritsch–Carlson) and extended by F(θ + 2π) = F(θ) + 2π.
class CircleMap {
 public:
  static constexpr int kSamples = 256;

  /// Samples `lift` on the uniform grid; the lift must satisfy
  /// F(θ + 2π) = F(θ) + 2π.
  static CircleMap from_lift(const std::function<double(double)>& lift);
  /// Takes N lift samples directly (N ≥ 4).
  static CircleMap from_samples(std::vector<double> lift);
  static CircleMap rotation(double delta);
  /// θ ↦ θ + shift + amplitude·sin θ.
  static CircleMap sine(double shift, double amplitude);

  /// Lift value at any real θ.
  double operator()(double theta) const;
  double derivative(double theta) const;
  const std::vector<double>& samples() const { return f_; }
  int size() const { return static_cast<int>(f_.size()); }
  double node(int i) const { return kTwoPi * i / size(); }

  /// All secants and interpolation derivatives strictly positive.
  bool orientation_preserving() const;
  /// Sup over the sample nodes of |F - G - 2πk|, with the integer k
  /// chosen to best match the two lifts.
  double distance(const CircleMap& other) const;

  /// (*this) ∘ inner, sampled on this map's grid.
  CircleMap compose(const CircleMap& inner) const;

 private:
  explicit CircleMap(std::vector<double> f);
  std::vector<double> f_;
  std::vector<double> d_;  // node derivatives
};

struct GridSize {
  int n_theta = 256;
  int n_z = 257;
};

/// Graph r = √g(θ, z) over the grid θ_i = 2πi/n_theta, z_j = -1 + 2j/(n_z - 1).
class AnnulusSurface {
 public:
  AnnulusSurface(GridSize grid, double eps, std::vector<double> g, int winding = 0);

  /// Constant g, i.e. the cylinder r = √value.
  static AnnulusSurface constant(GridSize grid, double value);

  int n_theta() const { return grid_.n_theta; }
  int n_z() const { return grid_.n_z; }
  GridSize grid() const { return grid_; }
  double eps() const { return eps_; }
  /// Signed number of turns added to the leaves by the construction (≤ 0).
  int winding() const { return winding_; }

  double theta(int i) const { return kTwoPi * i / grid_.n_theta; }
  double z(int j) const { return -1.0 + 2.0 * j / (grid_.n_z - 1); }
  double g(int i, int j) const { return g_[static_cast<std::size_t>(j) * grid_.n_theta + i]; }
  double radius(int i, int j) const;
  const std::vector<double>& values() const { return g_; }

  /// Cubic interpolation, periodic in θ.
  double interpolate(double theta, double z) const;

 private:
  GridSize grid_;
  double eps_;
  std::vector<double> g_;
  int winding_;
};

/// Builds an annulus whose characteristic leaves carry (θ, -1) to
/// (f(θ), +1). Each leaf is the cubic Hermite curve θ(z) from θ0 to
/// F(θ0) - 2πk with end slopes dθ/dz = -1/ε², so that g(θ, ±1) = ε².
/// k is the least integer making every leaf slope negative unless
/// `winding` (= -k) is given.
/// Throws NotMonotone if f is not orientation-preserving and
/// SlopeSignViolation if the leaves are not strictly decreasing.
AnnulusSurface annulus_from_monodromy(const CircleMap& f, double eps, GridSize grid = {},
                                      std::optional<int> winding = std::nullopt);

/// Slides along leaves dθ/dz = -1/g(θ, z) from z = -1 to z = +1 for every
/// sample node of a CircleMap.
CircleMap annulus_monodromy(const AnnulusSurface& a, double tol = 1e-8);

/// Embedded surface sampled on a (u, v) grid of Cartesian points, u
/// optionally periodic.
struct SurfaceGrid {
  int nu = 0, nv = 0;
  bool periodic_u = false;
  std::vector<Vec3> points;  // row-major in v: points[j * nu + i]

  const Vec3& at(int i, int j) const { return points[static_cast<std::size_t>(j) * nu + i]; }
};

SurfaceGrid to_cartesian(const AnnulusSurface& a);

struct TransversalityReport {
  bool transverse = true;
  std::vector<std::pair<int, int>> tangencies;  ///< failing (i, j) grid indices
  /// Smallest sine of the angle between the surface normal and the
  /// normal of ker λ over the grid.
  double min_sine = 1.0;
};

/// Flags grid points where the tangent plane (central differences)
/// coincides with ker λ, λ = dz + x dy - y dx, up to the sine tolerance.
TransversalityReport transversality_check(const SurfaceGrid& s, double tol = 1e-6);
TransversalityReport transversality_check(const AnnulusSurface& a, double tol = 1e-6);

/// CSV with header `theta,z,r`, one row per grid point.
void write_surface_csv(std::ostream& out, const AnnulusSurface& a);

}  // namespace knotflow::contact
