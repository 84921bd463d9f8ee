#include "knotflow/beltrami.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <tuple>

#include "knotflow/errors.hpp"

namespace knotflow::beltrami {

bool AbcParams::is_normalized() const {
  constexpr double eps = 1e-12;
  return std::fabs(a_ - 1.0) <= eps && b_ <= a_ + eps && c_ <= b_ + eps && c_ >= -eps;
}

bool AbcParams::is_nonsingular() const {
  std::array<double, 3> s{std::fabs(a_), std::fabs(b_), std::fabs(c_)};
  std::sort(s.begin(), s.end());
  return s[0] * s[0] + s[1] * s[1] < s[2] * s[2];
}

Point3 TorusSymmetry::apply(const Point3& q) const {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = shift[i];
    for (int j = 0; j < 3; ++j) out[i] += linear[i][j] * q[j];
  }
  return {out[0], out[1], out[2]};
}

Vec3 TorusSymmetry::push(const Vec3& v) const {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += linear[i][j] * v[j];
    out[i] = time_scale * s;
  }
  return out;
}

namespace {

struct Generator {
  TorusSymmetry sym;
  std::array<int, 3> param_source;  // new[k] = old[param_source[k]]
};

// (A,B,C) -> (B,C,A) with q' = (y, z, x).
Generator cyclic() {
  Generator g;
  g.sym.linear = {{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}};
  g.param_source = {1, 2, 0};
  return g;
}

// (A,B,C) -> (A,C,B) with q' = (-π/2 - y, -π/2 - x, -π/2 - z).
Generator transposition() {
  Generator g;
  g.sym.linear = {{{0, -1, 0}, {-1, 0, 0}, {0, 0, -1}}};
  g.sym.shift = {-kPi / 2, -kPi / 2, -kPi / 2};
  g.param_source = {0, 2, 1};
  return g;
}

TorusSymmetry compose(const TorusSymmetry& outer, const TorusSymmetry& inner) {
  TorusSymmetry r;
  for (int i = 0; i < 3; ++i) {
    r.shift[i] = outer.shift[i];
    for (int j = 0; j < 3; ++j) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s += outer.linear[i][k] * inner.linear[k][j];
      r.linear[i][j] = s;
      r.shift[i] += outer.linear[i][j] * inner.shift[j];
    }
  }
  r.time_scale = outer.time_scale * inner.time_scale;
  return r;
}

}  // namespace

Normalized normalize(const AbcParams& p) {
  if (p.A() < 0 || p.B() < 0 || p.C() < 0)
    throw std::invalid_argument("ABC parameters must be non-negative");
  if (p.A() == 0 && p.B() == 0 && p.C() == 0)
    throw std::invalid_argument("ABC parameters must not all vanish");

  // Breadth-first search over the six-element symmetry group for an
  // element that sorts the parameters in decreasing order.
  struct Node {
    std::array<double, 3> params;
    TorusSymmetry sym;
  };
  const std::array<Generator, 2> gens{cyclic(), transposition()};
  std::deque<Node> queue{{{p.A(), p.B(), p.C()}, TorusSymmetry{}}};
  for (int visited = 0; !queue.empty() && visited < 64; ++visited) {
    Node n = queue.front();
    queue.pop_front();
    if (n.params[0] >= n.params[1] && n.params[1] >= n.params[2]) {
      const double scale = n.params[0];
      n.sym.time_scale = 1.0 / scale;
      return {AbcParams(1.0, n.params[1] / scale, n.params[2] / scale), n.sym};
    }
    for (const Generator& g : gens) {
      Node next;
      for (int k = 0; k < 3; ++k) next.params[k] = n.params[g.param_source[k]];
      next.sym = compose(g.sym, n.sym);
      queue.push_back(next);
    }
  }
  throw std::logic_error("symmetry search failed");
}

Vec3 abc_velocity(const AbcParams& p, double x, double y, double z) {
  return {p.A() * std::sin(z) + p.C() * std::cos(y), p.B() * std::sin(x) + p.A() * std::cos(z),
          p.C() * std::sin(y) + p.B() * std::cos(x)};
}

Matrix3 abc_jacobian(const AbcParams& p, double x, double y, double z) {
  return {{{0.0, -p.C() * std::sin(y), p.A() * std::cos(z)},
           {p.B() * std::cos(x), 0.0, -p.A() * std::sin(z)},
           {-p.B() * std::sin(x), p.C() * std::cos(y), 0.0}}};
}

namespace {

// D[i][j] = ∂_i u_j by central differences.
Matrix3 fd_gradient(const AbcParams& p, const Point3& q, double h) {
  Matrix3 d{};
  const std::array<double, 3> base{q.x(), q.y(), q.z()};
  for (int i = 0; i < 3; ++i) {
    auto plus = base, minus = base;
    plus[i] += h;
    minus[i] -= h;
    const Vec3 up = abc_velocity(p, plus[0], plus[1], plus[2]);
    const Vec3 um = abc_velocity(p, minus[0], minus[1], minus[2]);
    for (int j = 0; j < 3; ++j) d[i][j] = (up[j] - um[j]) / (2.0 * h);
  }
  return d;
}

Vec3 curl_from_gradient(const Matrix3& d) {
  return {d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
}

}  // namespace

Vec3 abc_curl(const AbcParams& p, const Point3& q, CurlMode mode) {
  if (std::holds_alternative<ClosedForm>(mode)) return abc_velocity(p, q);
  const double h = std::get<FiniteDifference>(mode).h;
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  return curl_from_gradient(fd_gradient(p, q, h));
}

double abc_divergence(const AbcParams& p, const Point3& q, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const Matrix3 d = fd_gradient(p, q, h);
  return d[0][0] + d[1][1] + d[2][2];
}

namespace {

struct Refined {
  std::array<double, 3> q;
  double speed;
};

// Levenberg–Marquardt on ½|u|²; reduces to Gauss–Newton near a zero.
Refined refine(const AbcParams& p, std::array<double, 3> q) {
  auto speed2 = [&](const std::array<double, 3>& r) {
    const Vec3 u = abc_velocity(p, r[0], r[1], r[2]);
    return dot(u, u);
  };
  double f = speed2(q);
  double mu = 1e-6;
  for (int it = 0; it < 200 && f > 1e-30; ++it) {
    const Vec3 u = abc_velocity(p, q[0], q[1], q[2]);
    const Matrix3 j = abc_jacobian(p, q[0], q[1], q[2]);
    Eigen::Matrix3d J;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) J(a, b) = j[a][b];
    const Eigen::Vector3d r(u.vx, u.vy, u.vz);
    const Eigen::Matrix3d H = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const Eigen::Matrix3d M = H + mu * Eigen::Matrix3d::Identity();
      const Eigen::Vector3d delta = -M.ldlt().solve(g);
      std::array<double, 3> trial{q[0] + delta(0), q[1] + delta(1), q[2] + delta(2)};
      const double ft = speed2(trial);
      if (ft < f) {
        q = trial;
        const double step = delta.norm();
        f = ft;
        mu = std::max(mu / 5.0, 1e-14);
        improved = step > 1e-16;
        break;
      }
      mu *= 8.0;
    }
    if (!improved) break;
  }
  return {q, std::sqrt(f)};
}

}  // namespace

SingularityReport abc_singular_points(const AbcParams& p, int grid_n, double tol) {
  if (!p.is_normalized())
    throw NotNormalized("expected 1 = A >= B >= C >= 0, got (" + std::to_string(p.A()) + ", " +
                        std::to_string(p.B()) + ", " + std::to_string(p.C()) + ")");
  if (grid_n < 8) throw std::invalid_argument("grid_n must be at least 8");

  const int n = grid_n;
  const double d = kTwoPi / n;
  std::vector<double> s(n), c(n);
  for (int i = 0; i < n; ++i) {
    s[i] = std::sin(i * d);
    c[i] = std::cos(i * d);
  }
  auto idx = [n](int i, int j, int k) {
    return (static_cast<std::size_t>((i + n) % n) * n + (j + n) % n) * n + (k + n) % n;
  };
  std::vector<double> speed2(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double ux = p.A() * s[k] + p.C() * c[j];
        const double uy = p.B() * s[i] + p.A() * c[k];
        const double uz = p.C() * s[j] + p.B() * c[i];
        speed2[idx(i, j, k)] = ux * ux + uy * uy + uz * uz;
      }

  struct Candidate {
    double v;
    int i, j, k;
  };
  std::vector<Candidate> minima;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = speed2[idx(i, j, k)];
        if (v <= speed2[idx(i + 1, j, k)] && v <= speed2[idx(i - 1, j, k)] &&
            v <= speed2[idx(i, j + 1, k)] && v <= speed2[idx(i, j - 1, k)] &&
            v <= speed2[idx(i, j, k + 1)] && v <= speed2[idx(i, j, k - 1)])
          minima.push_back({v, i, j, k});
      }
  std::sort(minima.begin(), minima.end(), [](const Candidate& a, const Candidate& b) {
    if (a.v != b.v) return a.v < b.v;
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });

  SingularityReport report;
  const double lipschitz = std::sqrt(p.A() * p.A() + p.B() * p.B() + p.C() * p.C());
  const double cover = 0.5 * std::sqrt(3.0) * d;
  report.lower_bound = std::sqrt(minima.front().v) - lipschitz * cover;
  report.nonsingular = p.is_nonsingular();

  // The grid minima nearest zero are refined; in the nonsingular case a
  // handful is enough to pin the global minimum of |u|.
  const std::size_t budget = report.nonsingular ? 32 : 4096;
  report.min_speed = std::sqrt(minima.front().v);
  report.argmin = Point3(minima.front().i * d, minima.front().j * d, minima.front().k * d);
  for (std::size_t m = 0; m < minima.size() && m < budget; ++m) {
    const Candidate& cand = minima[m];
    if (!report.nonsingular && std::sqrt(cand.v) > lipschitz * cover) break;
    const Refined r = refine(p, {cand.i * d, cand.j * d, cand.k * d});
    if (r.speed < report.min_speed) {
      report.min_speed = r.speed;
      report.argmin = Point3(r.q[0], r.q[1], r.q[2]);
    }
    if (report.nonsingular || r.speed >= tol) continue;
    const Point3 z(r.q[0], r.q[1], r.q[2]);
    const bool seen = std::any_of(report.zeros.begin(), report.zeros.end(),
                                  [&](const Point3& w) { return w.distance(z) < 1e-7; });
    if (!seen) report.zeros.push_back(z);
  }
  return report;
}

ContactFormValue abc_contact_form(const AbcParams& p, const Point3& q) {
  const Vec3 u = abc_velocity(p, q);
  return {u.vx, u.vy, u.vz};
}

double contact_volume_density(const AbcParams& p, const Point3& q, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  // α ∧ dα = (α · curl α) dx∧dy∧dz in the flat metric.
  const ContactFormValue a = abc_contact_form(p, q);
  return a(curl_from_gradient(fd_gradient(p, q, h)));
}

ReebResidual reeb_residual(const AbcParams& p, const Point3& q, double h, double tol) {
  const Vec3 u = abc_velocity(p, q);
  const double speed2 = dot(u, u);
  if (std::sqrt(speed2) < tol)
    throw SingularPoint("|u| = " + std::to_string(std::sqrt(speed2)) + " below " +
                        std::to_string(tol));
  const Vec3 reeb = (1.0 / speed2) * u;
  const ContactFormValue alpha = abc_contact_form(p, q);

  const Matrix3 grad = fd_gradient(p, q, h);
  ReebResidual r;
  r.r1 = std::fabs(alpha(reeb) - 1.0);
  for (int j = 0; j < 3; ++j) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i) v += reeb[i] * (grad[i][j] - grad[j][i]);
    r.r2 = std::max(r.r2, std::fabs(v));
  }
  return r;
}

Point4::Point4(double x1, double x2, double x3, double x4) : x_{x1, x2, x3, x4} {
  const double n = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4);
  if (!(std::fabs(n - 1.0) <= 1e-9))
    throw NotOnSphere("|q| = " + std::to_string(n));
}

TightReeb std_tight_eval(const Point4& q) {
  const auto& [x1, x2, x3, x4] = q.coords();
  TightReeb out;
  out.reeb = {-2.0 * x2, 2.0 * x1, -2.0 * x4, 2.0 * x3};
  const auto& X = out.reeb;
  out.alpha_on_reeb = 0.5 * (x1 * X[1] - x2 * X[0] + x3 * X[3] - x4 * X[2]);
  // Orthonormal tangent frame i·q, j·q, k·q.
  const std::array<std::array<double, 4>, 3> frame{{{-x2, x1, -x4, x3},
                                                    {-x3, x4, x1, -x2},
                                                    {-x4, -x3, x2, x1}}};
  for (const auto& e : frame) {
    const double v = X[0] * e[1] - X[1] * e[0] + X[2] * e[3] - X[3] * e[2];
    out.dalpha_residual = std::max(out.dalpha_residual, std::fabs(v));
  }
  return out;
}

}  // namespace knotflow::beltrami
