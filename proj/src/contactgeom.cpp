#include "knotflow/contactgeom.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "knotflow/errors.hpp"
#include "knotflow/ode.hpp"

namespace knotflow::contact {

double characteristic_slope(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  return -r * r;
}

// ---------------------------------------------------------------- CircleMap

CircleMap::CircleMap(std::vector<double> f) : f_(std::move(f)) {
  const int n = size();
  if (n < 4) throw std::invalid_argument("circle map needs at least 4 samples");
  const double h = kTwoPi / n;
  std::vector<double> sec(n);
  for (int i = 0; i < n; ++i) {
    const double next = i + 1 < n ? f_[i + 1] : f_[0] + kTwoPi;
    sec[i] = (next - f_[i]) / h;
  }
  d_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = sec[(i + n - 1) % n], b = sec[i];
    d_[i] = (a * b <= 0.0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
  }
}

CircleMap CircleMap::from_lift(const std::function<double(double)>& lift) {
  std::vector<double> f(kSamples);
  for (int i = 0; i < kSamples; ++i) f[i] = lift(kTwoPi * i / kSamples);
  return CircleMap(std::move(f));
}

CircleMap CircleMap::from_samples(std::vector<double> lift) { return CircleMap(std::move(lift)); }

CircleMap CircleMap::rotation(double delta) {
  return from_lift([delta](double t) { return t + delta; });
}

CircleMap CircleMap::sine(double shift, double amplitude) {
  return from_lift([=](double t) { return t + shift + amplitude * std::sin(t); });
}

namespace {
// Locate θ in the periodic grid: node index i, local coordinate s, turns.
struct Cell {
  int i;
  double s;
  double turns;
};
Cell locate(double theta, int n) {
  const double turns = std::floor(theta / kTwoPi);
  const double u = (theta - turns * kTwoPi) / (kTwoPi / n);
  int i = static_cast<int>(std::floor(u));
  double s = u - i;
  if (i >= n) {
    i = n - 1;
    s = 1.0;
  }
  return {i, s, turns};
}
}  // namespace

double CircleMap::operator()(double theta) const {
  const int n = size();
  const Cell c = locate(theta, n);
  const double h = kTwoPi / n;
  const double f0 = f_[c.i];
  const double f1 = c.i + 1 < n ? f_[c.i + 1] : f_[0] + kTwoPi;
  const double d0 = d_[c.i], d1 = d_[(c.i + 1) % n];
  const double s = c.s, s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 +
                   (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * h * d1;
  return v + c.turns * kTwoPi;
}

double CircleMap::derivative(double theta) const {
  const int n = size();
  const Cell c = locate(theta, n);
  const double h = kTwoPi / n;
  const double f0 = f_[c.i];
  const double f1 = c.i + 1 < n ? f_[c.i + 1] : f_[0] + kTwoPi;
  const double d0 = d_[c.i], d1 = d_[(c.i + 1) % n];
  const double s = c.s, s2 = s * s;
  return ((6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * f1 +
          (3 * s2 - 2 * s) * h * d1) /
         h;
}

bool CircleMap::orientation_preserving() const {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    const double next = i + 1 < n ? f_[i + 1] : f_[0] + kTwoPi;
    if (!(next > f_[i]) || !(d_[i] > 0.0)) return false;
  }
  return true;
}

double CircleMap::distance(const CircleMap& other) const {
  if (other.size() != size()) throw std::invalid_argument("circle maps sampled differently");
  double mean = 0.0;
  for (int i = 0; i < size(); ++i) mean += f_[i] - other.f_[i];
  mean /= size();
  const double shift = kTwoPi * std::round(mean / kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) worst = std::max(worst, std::fabs(f_[i] - other.f_[i] - shift));
  return worst;
}

CircleMap CircleMap::compose(const CircleMap& inner) const {
  std::vector<double> f(size());
  for (int i = 0; i < size(); ++i) f[i] = (*this)(inner(node(i)));
  return CircleMap(std::move(f));
}

// ------------------------------------------------------------ AnnulusSurface

AnnulusSurface::AnnulusSurface(GridSize grid, double eps, std::vector<double> g, int winding)
    : grid_(grid), eps_(eps), g_(std::move(g)), winding_(winding) {
  if (grid_.n_theta < 4 || grid_.n_z < 3) throw std::invalid_argument("annulus grid too small");
  if (g_.size() != static_cast<std::size_t>(grid_.n_theta) * grid_.n_z)
    throw std::invalid_argument("annulus grid size mismatch");
}

AnnulusSurface AnnulusSurface::constant(GridSize grid, double value) {
  if (!(value > 0.0)) throw std::invalid_argument("g must be positive");
  return AnnulusSurface(grid, std::sqrt(value),
                        std::vector<double>(static_cast<std::size_t>(grid.n_theta) * grid.n_z, value));
}

double AnnulusSurface::radius(int i, int j) const { return std::sqrt(g(i, j)); }

namespace {
// Cubic through four equally spaced values at -1, 0, 1, 2, evaluated at s ∈ [0, 1].
double catmull_rom(double p0, double p1, double p2, double p3, double s) {
  const double s2 = s * s, s3 = s2 * s;
  return 0.5 * (2 * p1 + (-p0 + p2) * s + (2 * p0 - 5 * p1 + 4 * p2 - p3) * s2 +
                (-p0 + 3 * p1 - 3 * p2 + p3) * s3);
}
}  // namespace

double AnnulusSurface::interpolate(double theta, double z) const {
  const int nt = grid_.n_theta, nz = grid_.n_z;
  const double ut = wrap_angle(theta) / (kTwoPi / nt);
  int i = static_cast<int>(std::floor(ut));
  const double st = ut - i;
  i %= nt;
  const double uz = std::clamp((z + 1.0) / (2.0 / (nz - 1)), 0.0, static_cast<double>(nz - 1));
  int j = std::min(static_cast<int>(std::floor(uz)), nz - 2);
  const double sz = uz - j;

  const auto row = [&](int jj) {
    const int idx[4] = {(i + nt - 1) % nt, i, (i + 1) % nt, (i + 2) % nt};
    return catmull_rom(g(idx[0], jj), g(idx[1], jj), g(idx[2], jj), g(idx[3], jj), st);
  };
  const double r1 = row(j), r2 = row(j + 1);
  // Linear extrapolation supplies the missing neighbour at the z boundary.
  const double r0 = j > 0 ? row(j - 1) : 2 * r1 - r2;
  const double r3 = j + 2 < nz ? row(j + 2) : 2 * r2 - r1;
  return catmull_rom(r0, r1, r2, r3, sz);
}

// ------------------------------------------------------------- construction

namespace {

struct LeafFamily {
  const CircleMap& f;
  double m;      // end slope dθ/dz = -1/ε²
  double shift;  // 2πk

  double drop(double theta0) const { return f(theta0) - theta0 - shift; }

  // θ along the leaf starting at θ0, at parameter s = (z + 1)/2.
  double position(double theta0, double s) const {
    const double D = drop(theta0);
    const double h1 = s * s * (3 - 2 * s);
    const double h23 = s * (1 - s) * (1 - 2 * s);  // h2 + h3
    return theta0 + D * h1 + 2 * m * h23;
  }

  // dθ/dz along the leaf.
  double slope(double theta0, double s) const {
    const double u = s * (1 - s);
    return m + u * (3 * drop(theta0) - 6 * m);
  }
};

}  // namespace

AnnulusSurface annulus_from_monodromy(const CircleMap& f, double eps, GridSize grid,
                                      std::optional<int> winding) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (grid.n_theta < 4 || grid.n_z < 3) throw std::invalid_argument("annulus grid too small");
  if (!f.orientation_preserving()) throw NotMonotone("monodromy is not orientation-preserving");

  const double e2 = eps * eps;
  const double bound = -2.0 / (3.0 * e2);  // every drop must lie strictly below this
  double max_drop = -std::numeric_limits<double>::infinity();
  const int probe = 4 * f.size();
  for (int i = 0; i < probe; ++i) {
    const double t = kTwoPi * i / probe;
    max_drop = std::max(max_drop, f(t) - t);
  }
  int k;
  if (winding) {
    k = -*winding;
  } else {
    k = static_cast<int>(std::floor((max_drop - bound) / kTwoPi)) + 1;
  }
  if (!(max_drop - kTwoPi * k < bound))
    throw SlopeSignViolation("winding " + std::to_string(-k) +
                             " leaves a leaf with non-negative slope");

  const LeafFamily leaves{f, -1.0 / e2, kTwoPi * k};
  std::vector<double> g(static_cast<std::size_t>(grid.n_theta) * grid.n_z);
  boost::math::tools::eps_tolerance<double> tol_fn(50);
  for (int j = 0; j < grid.n_z; ++j) {
    const double z = -1.0 + 2.0 * j / (grid.n_z - 1);
    const double s = 0.5 * (z + 1.0);
    for (int i = 0; i < grid.n_theta; ++i) {
      double val;
      if (j == 0 || j == grid.n_z - 1) {
        val = e2;
      } else {
        const double target = kTwoPi * i / grid.n_theta;
        const auto F = [&](double t0) { return leaves.position(t0, s) - target; };
        // position(θ0 + 2π) = position(θ0) + 2π, so one period brackets the root.
        double lo = target - kTwoPi, hi = target + kTwoPi;
        while (F(lo) > 0) lo -= kTwoPi;
        while (F(hi) < 0) hi += kTwoPi;
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(F, lo, hi, tol_fn, iters);
        const double t0 = 0.5 * (r.first + r.second);
        const double sl = leaves.slope(t0, s);
        if (!(sl < 0.0)) throw SlopeSignViolation("leaf slope is not negative");
        val = -1.0 / sl;
      }
      g[static_cast<std::size_t>(j) * grid.n_theta + i] = val;
    }
  }
  return AnnulusSurface(grid, eps, std::move(g), -k);
}

CircleMap annulus_monodromy(const AnnulusSurface& a, double tol) {
  for (double v : a.values())
    if (!(v > 0.0)) throw std::invalid_argument("g must be positive on the grid");
  ode::Options opt;
  opt.tol = tol;
  opt.h_max = 0.05;
  const auto rhs = [&a](double z, const ode::State<1>& y, ode::State<1>& dy) {
    dy[0] = -1.0 / a.interpolate(y[0], z);
  };
  std::vector<double> out(CircleMap::kSamples);
  for (int i = 0; i < CircleMap::kSamples; ++i) {
    const double t0 = kTwoPi * i / CircleMap::kSamples;
    out[i] = ode::integrate<1>(rhs, ode::State<1>{t0}, -1.0, 1.0, opt)[0];
  }
  return CircleMap::from_samples(std::move(out));
}

// ----------------------------------------------------------- transversality

SurfaceGrid to_cartesian(const AnnulusSurface& a) {
  SurfaceGrid s;
  s.nu = a.n_theta();
  s.nv = a.n_z();
  s.periodic_u = true;
  s.points.reserve(static_cast<std::size_t>(s.nu) * s.nv);
  for (int j = 0; j < s.nv; ++j)
    for (int i = 0; i < s.nu; ++i) {
      const double r = a.radius(i, j), t = a.theta(i);
      s.points.push_back({r * std::cos(t), r * std::sin(t), a.z(j)});
    }
  return s;
}

TransversalityReport transversality_check(const SurfaceGrid& s, double tol) {
  if (s.nu < 2 || s.nv < 2 || s.points.size() != static_cast<std::size_t>(s.nu) * s.nv)
    throw std::invalid_argument("malformed surface grid");
  TransversalityReport rep;
  for (int j = 0; j < s.nv; ++j)
    for (int i = 0; i < s.nu; ++i) {
      Vec3 tu, tv;
      if (s.periodic_u) {
        tu = s.at((i + 1) % s.nu, j) - s.at((i + s.nu - 1) % s.nu, j);
      } else {
        tu = s.at(std::min(i + 1, s.nu - 1), j) - s.at(std::max(i - 1, 0), j);
      }
      tv = s.at(i, std::min(j + 1, s.nv - 1)) - s.at(i, std::max(j - 1, 0));
      const Vec3 n = cross(tu, tv);
      const Vec3& p = s.at(i, j);
      const Vec3 w{-p.vy, p.vx, 1.0};  // λ = dz + x dy - y dx
      const double sine = norm(cross(n, w)) / (norm(n) * norm(w));
      rep.min_sine = std::min(rep.min_sine, sine);
      if (!(sine > tol)) {
        rep.transverse = false;
        rep.tangencies.emplace_back(i, j);
      }
    }
  return rep;
}

TransversalityReport transversality_check(const AnnulusSurface& a, double tol) {
  return transversality_check(to_cartesian(a), tol);
}

void write_surface_csv(std::ostream& out, const AnnulusSurface& a) {
  out << "theta,z,r\n";
  out.precision(17);
  for (int j = 0; j < a.n_z(); ++j)
    for (int i = 0; i < a.n_theta(); ++i)
      out << a.theta(i) << ',' << a.z(j) << ',' << a.radius(i, j) << '\n';
}

}  // namespace knotflow::contact
