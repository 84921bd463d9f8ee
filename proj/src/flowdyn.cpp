#include "knotflow/flowdyn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "knotflow/errors.hpp"
#include "knotflow/ode.hpp"

namespace knotflow::flow {

namespace {

using ode::State;
using State3 = State<3>;
using State12 = State<12>;

struct VelocityRhs {
  AbcParams p;
  void operator()(double, const State3& y, State3& dy) const {
    const Vec3 u = beltrami::abc_velocity(p, y[0], y[1], y[2]);
    dy = {u.vx, u.vy, u.vz};
  }
};

// Reversed-time field, used to grow stable manifolds.
struct BackwardRhs {
  AbcParams p;
  void operator()(double, const State3& y, State3& dy) const {
    const Vec3 u = beltrami::abc_velocity(p, y[0], y[1], y[2]);
    dy = {-u.vx, -u.vy, -u.vz};
  }
};

// Position plus the fundamental matrix Φ (row-major), dΦ/dt = Du Φ.
struct VariationalRhs {
  AbcParams p;
  void operator()(double, const State12& y, State12& dy) const {
    const Vec3 u = beltrami::abc_velocity(p, y[0], y[1], y[2]);
    const Matrix3 J = beltrami::abc_jacobian(p, y[0], y[1], y[2]);
    dy[0] = u.vx;
    dy[1] = u.vy;
    dy[2] = u.vz;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += J[i][k] * y[3 + 3 * k + j];
        dy[3 + 3 * i + j] = s;
      }
  }
};

ode::Options options(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  ode::Options o;
  o.tol = tol;
  return o;
}

State12 with_identity(const Lift& q) {
  State12 y{};
  y[0] = q[0];
  y[1] = q[1];
  y[2] = q[2];
  y[3] = y[7] = y[11] = 1.0;
  return y;
}

Matrix3 fundamental(const State12& y) {
  Matrix3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = y[3 + 3 * i + j];
  return m;
}

Matrix3 matmul(const Matrix3& a, const Matrix3& b) {
  Matrix3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Lift lift_of(const Point3& q) { return {q.x(), q.y(), q.z()}; }

// First directed crossing of coordinate c through a level v + 2πk,
// starting from y0 at t = 0. Crossings are strict: the start itself does
// not count even when it lies on a level.
template <std::size_t N, class Rhs>
std::pair<double, State<N>> first_crossing(const Rhs& f, const State<N>& y0, int c, double v,
                                           int dir, double max_time, double tol) {
  const ode::Options opt = options(tol);
  bool hit = false;
  double t_hit = 0.0;
  State<N> y_hit{};
  auto observe_step = [&](double tp, const State<N>& yp, double t, const State<N>& y) {
    const double prev = yp[c];
    const double cur = y[c];
    double level;
    if (dir > 0) {
      level = v + kTwoPi * (std::floor((prev - v) / kTwoPi) + 1.0);
      if (!(level <= cur)) return true;
    } else {
      level = v + kTwoPi * (std::ceil((prev - v) / kTwoPi) - 1.0);
      if (!(level >= cur)) return true;
    }
    const auto g = [&](const State<N>& s) { return s[c] - level; };
    auto [s, ys] = ode::locate_event<N>(f, tp, yp, t - tp, g, prev - level, cur - level);
    ys[c] = level;
    t_hit = tp + s;
    y_hit = ys;
    hit = true;
    return false;
  };
  ode::integrate<N>(f, y0, 0.0, max_time, opt, observe_step);
  if (!hit) throw NoReturn("no directed section crossing within time " + std::to_string(max_time));
  return {t_hit, y_hit};
}

int axis_index(Axis a) { return static_cast<int>(a); }

// Orthonormal basis of the plane orthogonal to the unit vector f.
std::pair<Vec3, Vec3> complement_basis(const Vec3& f) {
  Vec3 seed{1.0, 0.0, 0.0};
  if (std::fabs(f.vy) < std::fabs(f[0]) && std::fabs(f.vy) <= std::fabs(f.vz)) seed = {0.0, 1.0, 0.0};
  else if (std::fabs(f.vz) < std::fabs(f[0])) seed = {0.0, 0.0, 1.0};
  Vec3 e1 = seed - dot(seed, f) * f;
  e1 = (1.0 / norm(e1)) * e1;
  const Vec3 e2 = cross(f, e1);
  return {e1, e2};
}

Vec3 apply(const Matrix3& m, const Vec3& v) {
  return {m[0][0] * v.vx + m[0][1] * v.vy + m[0][2] * v.vz,
          m[1][0] * v.vx + m[1][1] * v.vy + m[1][2] * v.vz,
          m[2][0] * v.vx + m[2][1] * v.vy + m[2][2] * v.vz};
}

Multipliers transverse_multipliers(const Matrix3& m, double det, const Vec3& flow_dir) {
  const Vec3 f = (1.0 / norm(flow_dir)) * flow_dir;
  const auto [e1, e2] = complement_basis(f);
  const Vec3 m1 = apply(m, e1);
  const Vec3 m2 = apply(m, e2);
  const double tr = dot(e1, m1) + dot(e2, m2);
  const double disc = tr * tr - 4.0 * det;
  Multipliers out;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double big = 0.5 * (tr + (tr >= 0.0 ? sq : -sq));
    out.first = big;
    out.second = big != 0.0 ? det / big : 0.0;
    const double a = std::abs(out.first), b = std::abs(out.second);
    out.kind = (a > 1.0 + 1e-9 && b < 1.0 - 1e-9) ? Stability::Hyperbolic : Stability::Parabolic;
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    out.first = {0.5 * tr, im};
    out.second = {0.5 * tr, -im};
    out.kind = Stability::Elliptic;
  }
  return out;
}

// Periodic cubic Hermite interpolation of samples (x_i, v_i), x ascending
// in [0, 2π), derivatives by centered differences.
class PeriodicHermite {
 public:
  PeriodicHermite(std::vector<double> x, std::vector<double> v) : x_(std::move(x)), v_(std::move(v)) {
    const std::size_t n = x_.size();
    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
      double xp = x_[ip], xm = x_[im];
      if (ip == 0) xp += kTwoPi;
      if (i == 0) xm -= kTwoPi;
      d_[i] = (v_[ip] - v_[im]) / (xp - xm);
    }
  }

  double operator()(double q) const {
    const std::size_t n = x_.size();
    q = wrap_angle(q);
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    std::size_t hi = static_cast<std::size_t>(it - x_.begin());
    std::size_t lo;
    double xl, xh;
    if (hi == 0) {
      lo = n - 1;
      hi = 0;
      xl = x_[lo] - kTwoPi;
      xh = x_[0];
    } else if (hi == n) {
      lo = n - 1;
      hi = 0;
      xl = x_[lo];
      xh = x_[0] + kTwoPi;
    } else {
      lo = hi - 1;
      xl = x_[lo];
      xh = x_[hi];
    }
    const double h = xh - xl;
    const double s = (q - xl) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v_[lo] + (s3 - 2 * s2 + s) * h * d_[lo] +
           (-2 * s3 + 3 * s2) * v_[hi] + (s3 - s2) * h * d_[hi];
  }

 private:
  std::vector<double> x_, v_, d_;
};

}  // namespace

Trajectory integrate(const AbcParams& p, const Point3& q0, double t_end, double tol) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  const ode::Options opt = options(tol);
  Trajectory traj{p, {}, tol};
  const Lift y0 = lift_of(q0);
  traj.samples.push_back({0.0, q0, y0});
  ode::integrate<3>(VelocityRhs{p}, y0, 0.0, t_end, opt,
                    [&](double, const State3&, double t, const State3& y) {
                      traj.samples.push_back({t, Point3(y[0], y[1], y[2]), y});
                      return true;
                    });
  return traj;
}

Lift flow_map(const AbcParams& p, const Lift& q0, double t, double tol) {
  return ode::integrate<3>(VelocityRhs{p}, q0, 0.0, t, options(tol));
}

double conserved_quantity_C0(const Trajectory& traj) {
  const AbcParams& p = traj.params;
  if (p.C() != 0.0) throw WrongParams("conserved quantity requires C = 0");
  if (traj.samples.empty()) return 0.0;
  const auto H = [&](const Sample& s) {
    return -p.B() * std::sin(s.lift[0]) - p.A() * std::cos(s.lift[2]);
  };
  const double h0 = H(traj.samples.front());
  double drift = 0.0;
  for (const Sample& s : traj.samples) drift = std::max(drift, std::fabs(H(s) - h0));
  return drift;
}

SectionSpec::SectionSpec(Axis c, double v, int dir) : coordinate(c), value(wrap_angle(v)), direction(dir) {
  if (dir != 1 && dir != -1) throw std::invalid_argument("section direction must be +1 or -1");
}

Return poincare_map(const AbcParams& p, const SectionSpec& s, const Point3& q0, double max_time,
                    double tol) {
  const int c = axis_index(s.coordinate);
  if (std::fabs(wrap_delta(q0[c] - s.value)) > 1e-8)
    throw std::invalid_argument("start point is not on the section");
  State3 y0 = lift_of(q0);
  y0[c] = s.value;
  const auto [t, y] = first_crossing<3>(VelocityRhs{p}, y0, c, s.value, s.direction, max_time, tol);
  return {Point3(y[0], y[1], y[2]), y, t};
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Hyperbolic: return "hyperbolic";
    case Stability::Elliptic: return "elliptic";
    case Stability::Parabolic: return "parabolic";
  }
  return "parabolic";
}

Monodromy monodromy(const AbcParams& p, const Lift& base, double period, double tol) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  const ode::Options opt = options(tol);
  const int segments = std::max(1, static_cast<int>(std::ceil(period)));
  const double len = period / segments;
  Monodromy out;
  out.matrix = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Lift q = base;
  for (int k = 0; k < segments; ++k) {
    const State12 y = ode::integrate<12>(VariationalRhs{p}, with_identity(q), 0.0, len, opt);
    const Matrix3 phi = fundamental(y);
    out.matrix = matmul(phi, out.matrix);
    out.det *= det3(phi);
    q = {y[0], y[1], y[2]};
  }
  return out;
}

Multipliers floquet(const AbcParams& p, const PeriodicOrbit& orbit, double tol, MonodromyMode mode) {
  const Lift base = lift_of(orbit.base);
  Matrix3 m{};
  double det = 1.0;
  if (mode == MonodromyMode::Variational) {
    const Monodromy mono = monodromy(p, base, orbit.period, tol);
    m = mono.matrix;
    det = mono.det;
  } else {
    const double h = 1e-6;
    for (int j = 0; j < 3; ++j) {
      Lift qp = base, qm = base;
      qp[j] += h;
      qm[j] -= h;
      const Lift fp = flow_map(p, qp, orbit.period, tol);
      const Lift fm = flow_map(p, qm, orbit.period, tol);
      for (int i = 0; i < 3; ++i) m[i][j] = (fp[i] - fm[i]) / (2 * h);
    }
    det = det3(m);
  }
  return transverse_multipliers(m, det, beltrami::abc_velocity(p, orbit.base));
}

namespace {

struct ShotResult {
  Lift end{};
  double flight = 0.0;
  Matrix3 phi{};
};

ShotResult shoot(const AbcParams& p, const SectionSpec& s, const Lift& start, const ShootingOptions& o) {
  const int c = axis_index(s.coordinate);
  const auto [t, y] = first_crossing<12>(VariationalRhs{p}, with_identity(start), c, s.value,
                                         s.direction, o.max_time, o.integration_tol);
  return {{y[0], y[1], y[2]}, t, fundamental(y)};
}

}  // namespace

namespace {

// Multiple shooting from the straight-line guess: K points spaced one lap
// along the section coordinate, unknowns (q0 minus its section coordinate,
// q1..q_{K-1}, T). Keeps each segment short enough that a hyperbolic orbit
// stays in its linear regime. Returns the improved base point.
Lift multiple_shooting(const AbcParams& p, const SectionSpec& s, const Lift& guess,
                       const ShootingOptions& o, double target, int& iterations) {
  const int c = axis_index(s.coordinate);
  const int a = (c + 1) % 3, b = (c + 2) % 3;
  const double uc = beltrami::abc_velocity(p, guess[0], guess[1], guess[2])[c];
  if (std::fabs(uc) < 1e-3) throw NoConvergence("guess is nearly tangent to the section");
  double T = kTwoPi / std::fabs(uc);
  if (T > o.max_time) throw NoConvergence("estimated return time exceeds the time budget");
  const int K = std::max(4, static_cast<int>(std::ceil(T / 1.5)));
  const int n = 3 * K;
  const ode::Options opt = options(o.integration_tol);

  std::vector<Lift> q(K);
  for (int i = 0; i < K; ++i) {
    q[i] = guess;
    q[i][c] = s.value + s.direction * kTwoPi * i / K;
  }

  // Unknown vector layout: [q0[a], q0[b], q1 (3), ..., q_{K-1} (3), T].
  const auto pack = [&](const std::vector<Lift>& qs, double t) {
    Eigen::VectorXd z(n);
    z(0) = qs[0][a];
    z(1) = qs[0][b];
    for (int i = 1; i < K; ++i)
      for (int k = 0; k < 3; ++k) z(2 + 3 * (i - 1) + k) = qs[i][k];
    z(n - 1) = t;
    return z;
  };
  const auto unpack = [&](const Eigen::VectorXd& z, std::vector<Lift>& qs, double& t) {
    qs[0][a] = z(0);
    qs[0][b] = z(1);
    qs[0][c] = s.value;
    for (int i = 1; i < K; ++i)
      for (int k = 0; k < 3; ++k) qs[i][k] = z(2 + 3 * (i - 1) + k);
    t = z(n - 1);
  };
  const auto col_of = [&](int i, int k) {  // column of q_i[k], -1 if fixed
    if (i == 0) return k == a ? 0 : (k == b ? 1 : -1);
    return 2 + 3 * (i - 1) + k;
  };

  struct Eval {
    Eigen::VectorXd r;
    std::vector<Matrix3> phi;
    std::vector<Vec3> f;
  };
  const auto evaluate = [&](const std::vector<Lift>& qs, double t) {
    if (!(t > 0.0) || t > o.max_time) throw NoConvergence("shooting period left the admissible range");
    Eval e{Eigen::VectorXd(n), std::vector<Matrix3>(K), std::vector<Vec3>(K)};
    for (int i = 0; i < K; ++i) {
      const State12 y = ode::integrate<12>(VariationalRhs{p}, with_identity(qs[i]), 0.0, t / K, opt);
      const Lift& next = qs[(i + 1) % K];
      for (int k = 0; k < 3; ++k) e.r(3 * i + k) = wrap_delta(y[k] - next[k]);
      e.phi[i] = fundamental(y);
      e.f[i] = beltrami::abc_velocity(p, y[0], y[1], y[2]);
    }
    return e;
  };

  Eval e = evaluate(q, T);
  for (; iterations < o.max_iter; ++iterations) {
    if (e.r.lpNorm<Eigen::Infinity>() < target) return q[0];
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < K; ++i) {
      const int inext = (i + 1) % K;
      for (int row = 0; row < 3; ++row) {
        for (int k = 0; k < 3; ++k) {
          const int ci = col_of(i, k);
          if (ci >= 0) J(3 * i + row, ci) += e.phi[i][row][k];
          const int cn = col_of(inext, k);
          if (cn >= 0 && k == row) J(3 * i + row, cn) -= 1.0;
        }
        J(3 * i + row, n - 1) = e.f[i][row] / K;
      }
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-e.r);
    if (!step.allFinite()) throw NoConvergence("singular multiple-shooting Jacobian");
    const Eigen::VectorXd z0 = pack(q, T);
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
      std::vector<Lift> qt = q;
      double Tt = T;
      unpack(z0 + lambda * step, qt, Tt);
      Eval et;
      try {
        et = evaluate(qt, Tt);
      } catch (const NoConvergence&) {
        continue;
      }
      if (et.r.norm() < e.r.norm() || ls == 11) {
        q = qt;
        T = Tt;
        e = std::move(et);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NoConvergence("multiple-shooting line search failed");
  }
  throw NoConvergence("Newton shooting did not converge in " + std::to_string(o.max_iter) +
                      " iterations");
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const AbcParams& p, const SectionSpec& s, const Point3& guess,
                                  const ShootingOptions& opts) {
  const int c = axis_index(s.coordinate);
  const int a = (c + 1) % 3, b = (c + 2) % 3;
  Lift q = lift_of(guess);
  q[c] = s.value;

  const auto residual = [&](const ShotResult& r, const Lift& start) {
    return std::array<double, 2>{wrap_delta(r.end[a] - start[a]), wrap_delta(r.end[b] - start[b])};
  };
  const auto size = [](const std::array<double, 2>& f) { return std::hypot(f[0], f[1]); };

  try {
    int ms_iter = 0;
    q = multiple_shooting(p, s, q, opts, 1e-7, ms_iter);

    // Single shooting polishes the full-period return error.
    ShotResult r = shoot(p, s, q, opts);
    std::array<double, 2> F = residual(r, q);
    for (int it = 0; it < opts.max_iter; ++it) {
      if (size(F) < opts.tol) {
        PeriodicOrbit orbit;
        orbit.base = Point3(q[0], q[1], q[2]);
        orbit.period = r.flight;
        orbit.residual = size(F);
        orbit.section = s;
        orbit.multipliers = floquet(p, orbit, opts.integration_tol);
        return orbit;
      }
      // Derivative of the return map: project Φ along the flow onto the section.
      const Vec3 f1 = beltrami::abc_velocity(p, r.end[0], r.end[1], r.end[2]);
      const double fc = f1[c];
      if (std::fabs(fc) < 1e-14) throw NoConvergence("flow tangent to the section at the return");
      const int idx[2] = {a, b};
      double J[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const int ri = idx[i], cj = idx[j];
          J[i][j] = r.phi[ri][cj] - f1[ri] * r.phi[c][cj] / fc - (i == j ? 1.0 : 0.0);
        }
      const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      if (!std::isfinite(det) || det == 0.0) throw NoConvergence("singular shooting Jacobian");
      const double d0 = -(J[1][1] * F[0] - J[0][1] * F[1]) / det;
      const double d1 = -(-J[1][0] * F[0] + J[0][0] * F[1]) / det;

      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
        Lift trial = q;
        trial[a] += lambda * d0;
        trial[b] += lambda * d1;
        ShotResult rt;
        try {
          rt = shoot(p, s, trial, opts);
        } catch (const NoReturn&) {
          continue;
        }
        const auto Ft = residual(rt, trial);
        if (size(Ft) < size(F) || ls == 11) {
          q = trial;
          r = rt;
          F = Ft;
          accepted = true;
          break;
        }
      }
      if (!accepted) throw NoConvergence("line search found no returning trial point");
    }
  } catch (const NoReturn& e) {
    throw NoConvergence(std::string("shooting lost the return: ") + e.what());
  } catch (const StepUnderflow& e) {
    throw NoConvergence(std::string("shooting integration failed: ") + e.what());
  }
  throw NoConvergence("Newton shooting did not converge in " + std::to_string(opts.max_iter) +
                      " iterations");
}

double SplittingProfile::max_abs() const {
  double m = 0.0;
  for (double d : signed_distance) m = std::max(m, std::fabs(d));
  return m;
}

int SplittingProfile::sign_changes() const {
  std::vector<double> nz;
  for (double d : signed_distance)
    if (d != 0.0) nz.push_back(d);
  if (nz.size() < 2) return 0;
  int count = 0;
  for (std::size_t i = 0; i < nz.size(); ++i)
    if ((nz[i] > 0) != (nz[(i + 1) % nz.size()] > 0)) ++count;
  return count;
}

SplittingProfile separatrix_splitting(const AbcParams& base, double C, int n_samples,
                                      const SplittingOptions& opts) {
  if (base.A() != 1.0 || base.C() != 0.0 || !(base.B() > 0.0 && base.B() < 1.0))
    throw WrongParams("splitting base must be (1, B, 0) with 0 < B < 1");
  if (!(C >= 0.0)) throw std::invalid_argument("C must be non-negative");
  if (n_samples < 4) throw std::invalid_argument("need at least 4 samples");
  const AbcParams p{1.0, base.B(), C};

  ShootingOptions so;
  so.integration_tol = opts.tol;
  const PeriodicOrbit orbit =
      find_periodic_orbit(p, SectionSpec(Axis::Y, 0.0, -1), Point3(kPi / 2, 0.0, kPi), so);
  const Lift b0 = lift_of(orbit.base);

  // Floquet vectors at the base point.
  const Monodromy mono = monodromy(p, b0, orbit.period, opts.tol);
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = mono.matrix[i][j];
  Eigen::EigenSolver<Eigen::Matrix3d> es(M);
  int iu = 0, is = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(es.eigenvalues()(k)) > std::abs(es.eigenvalues()(iu))) iu = k;
    if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(is))) is = k;
  }
  if (std::abs(es.eigenvalues()(iu).imag()) > 0.0 || std::abs(es.eigenvalues()(is).imag()) > 0.0)
    throw NoConvergence("saddle orbit lost hyperbolicity");
  const Eigen::Vector3d vu = es.eigenvectors().col(iu).real();
  const Eigen::Vector3d vs = es.eigenvectors().col(is).real();

  // Launch phases along the orbit, transporting the Floquet vectors.
  const int m = std::max(n_samples, 128);
  const ode::Options opt = options(opts.tol);
  const double xu_target = b0[0] + kPi;
  const double xs_target = b0[0] - kPi;
  std::vector<std::pair<double, double>> hits_u, hits_s;
  State12 y = with_identity(b0);
  double t_prev = 0.0;
  for (int j = 0; j < m; ++j) {
    const double sj = orbit.period * j / m;
    y = ode::integrate<12>(VariationalRhs{p}, y, t_prev, sj, opt);
    t_prev = sj;
    const Matrix3 phi = fundamental(y);
    Eigen::Matrix3d P;
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) P(r, cc) = phi[r][cc];
    Eigen::Vector3d wu = (P * vu).normalized();
    Eigen::Vector3d ws = (P * vs).normalized();
    if (wu(0) < 0) wu = -wu;
    if (ws(0) > 0) ws = -ws;

    State3 qu{y[0] + opts.offset * wu(0), y[1] + opts.offset * wu(1), y[2] + opts.offset * wu(2)};
    State3 qs{y[0] + opts.offset * ws(0), y[1] + opts.offset * ws(1), y[2] + opts.offset * ws(2)};
    // Forward along the unstable branch until x reaches the target plane.
    const auto [tu, yu] =
        first_crossing<3>(VelocityRhs{p}, qu, 0, xu_target, 1, opts.max_time, opts.tol);
    // Backward along the stable branch (forward in the reversed field).
    const auto [ts, ys] =
        first_crossing<3>(BackwardRhs{p}, qs, 0, xs_target, -1, opts.max_time, opts.tol);
    (void)tu;
    (void)ts;
    hits_u.emplace_back(wrap_angle(yu[1]), yu[2]);
    hits_s.emplace_back(wrap_angle(ys[1]), ys[2]);
  }

  const auto make_interp = [](std::vector<std::pair<double, double>> hits) {
    std::sort(hits.begin(), hits.end());
    std::vector<double> x, v;
    for (const auto& [h, z] : hits) {
      if (!x.empty() && h - x.back() < 1e-12) continue;
      x.push_back(h);
      v.push_back(z);
    }
    return PeriodicHermite(std::move(x), std::move(v));
  };
  const PeriodicHermite zu = make_interp(hits_u);
  const PeriodicHermite zs = make_interp(hits_s);

  SplittingProfile prof;
  prof.C = C;
  for (int k = 0; k < n_samples; ++k) {
    const double yk = kTwoPi * k / n_samples;
    prof.section_param.push_back(yk);
    prof.signed_distance.push_back(wrap_delta(zu(yk) - zs(yk)));
  }
  return prof;
}

}  // namespace knotflow::flow
