#include "knotflow/knotinv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "knotflow/errors.hpp"

namespace knotflow::knots {

// ---------------------------------------------------------------- linking

namespace {

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  // Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  const double c = dot(d1, r), b = dot(d1, d2);
  const double denom = a * e - b * b;
  double s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return norm((p1 + s * d1) - (p2 + t * d2));
}

// Signed solid angle subtended by segment pair, divided by 4π
// (Klenin & Langowski 2000).
double pair_contribution(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
  const Vec3 r12 = p2 - p1, r34 = p4 - p3;
  const auto unit = [](const Vec3& v, bool& ok) {
    const double n = norm(v);
    ok = ok && n > 1e-300;
    return n > 1e-300 ? (1.0 / n) * v : v;
  };
  bool ok = true;
  const Vec3 n1 = unit(cross(r13, r14), ok);
  const Vec3 n2 = unit(cross(r14, r24), ok);
  const Vec3 n3 = unit(cross(r24, r23), ok);
  const Vec3 n4 = unit(cross(r23, r13), ok);
  if (!ok) return 0.0;
  const auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
  const double omega = as(dot(n1, n2)) + as(dot(n2, n3)) + as(dot(n3, n4)) + as(dot(n4, n1));
  const double orient = dot(cross(r34, r12), r13);
  if (orient == 0.0) return 0.0;
  return (orient > 0 ? omega : -omega) / (4.0 * kPi);
}

}  // namespace

double curve_distance(const PLCurve& c1, const PLCurve& c2) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c1.size(); ++i)
    for (std::size_t j = 0; j < c2.size(); ++j)
      best = std::min(best, segment_distance(c1[i], c1.segment_end(i), c2[j], c2.segment_end(j)));
  return best;
}

int linking_in_projection(const PLCurve& c1, const PLCurve& c2, const Vec3& direction) {
  const double dn = norm(direction);
  if (!(dn > 0.0)) throw std::invalid_argument("projection direction must be nonzero");
  const Vec3 d = (1.0 / dn) * direction;
  Vec3 seed = std::fabs(d.vx) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = seed - dot(seed, d) * d;
  e1 = (1.0 / norm(e1)) * e1;
  const Vec3 e2 = cross(d, e1);
  const auto proj = [&](const Vec3& p) { return std::array<double, 2>{dot(p, e1), dot(p, e2)}; };

  constexpr double kEdge = 1e-9;
  int sum = 0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const Vec3 &a0 = c1[i], &a1 = c1.segment_end(i);
    const auto A0 = proj(a0), A1 = proj(a1);
    for (std::size_t j = 0; j < c2.size(); ++j) {
      const Vec3 &b0 = c2[j], &b1 = c2.segment_end(j);
      const auto B0 = proj(b0), B1 = proj(b1);
      const double rx = A1[0] - A0[0], ry = A1[1] - A0[1];
      const double sx = B1[0] - B0[0], sy = B1[1] - B0[1];
      const double den = rx * sy - ry * sx;
      const double qx = B0[0] - A0[0], qy = B0[1] - A0[1];
      const double scale = std::sqrt((rx * rx + ry * ry) * (sx * sx + sy * sy));
      if (std::fabs(den) <= 1e-12 * scale) {
        // Parallel projections: degenerate only if they overlap on a line.
        if (std::fabs(qx * ry - qy * rx) <= 1e-12 * (std::hypot(qx, qy) * std::hypot(rx, ry) + 1e-300)) {
          const double rr = rx * rx + ry * ry;
          const double t0 = (qx * rx + qy * ry) / rr;
          const double t1 = t0 + (sx * rx + sy * ry) / rr;
          if (std::max(t0, t1) >= -kEdge && std::min(t0, t1) <= 1 + kEdge)
            throw DegenerateProjection("collinear overlapping segments in projection");
        }
        continue;
      }
      const double s = (qx * sy - qy * sx) / den;  // along segment of c1
      const double u = (qx * ry - qy * rx) / den;  // along segment of c2
      if (s < -kEdge || s > 1 + kEdge || u < -kEdge || u > 1 + kEdge) continue;
      if (s < kEdge || s > 1 - kEdge || u < kEdge || u > 1 - kEdge)
        throw DegenerateProjection("crossing through a projected vertex");
      const Vec3 pa = a0 + s * (a1 - a0);
      const Vec3 pb = b0 + u * (b1 - b0);
      const double ha = dot(pa, d), hb = dot(pb, d);
      if (std::fabs(ha - hb) < 1e-12) throw DegenerateProjection("curves meet over a crossing");
      const Vec3 ta = a1 - a0, tb = b1 - b0;
      const Vec3 over = ha > hb ? ta : tb;
      const Vec3 under = ha > hb ? tb : ta;
      sum += dot(cross(over, under), d) > 0 ? 1 : -1;
    }
  }
  if (sum % 2 != 0) throw DegenerateProjection("odd crossing sum");
  return sum / 2;
}

double gauss_linking(const PLCurve& c1, const PLCurve& c2, LinkingMethod method) {
  if (curve_distance(c1, c2) < 1e-9) throw CurvesIntersect("curves come within 1e-9 of each other");
  if (method == LinkingMethod::Quadrature) {
    double lk = 0.0;
    for (std::size_t i = 0; i < c1.size(); ++i)
      for (std::size_t j = 0; j < c2.size(); ++j)
        lk += pair_contribution(c1[i], c1.segment_end(i), c2[j], c2.segment_end(j));
    return lk;
  }
  // Fixed irrational-looking directions; the first regular one is used.
  for (int k = 0; k < 32; ++k) {
    const double a = 0.7548776662 * (k + 1), b = 0.5698402910 * (k + 1);
    const Vec3 d{std::cos(kTwoPi * a) * std::sin(kPi * (0.1 + 0.8 * std::fmod(b, 1.0))),
                 std::sin(kTwoPi * a) * std::sin(kPi * (0.1 + 0.8 * std::fmod(b, 1.0))),
                 std::cos(kPi * (0.1 + 0.8 * std::fmod(b, 1.0)))};
    try {
      return linking_in_projection(c1, c2, d);
    } catch (const DegenerateProjection&) {
    }
  }
  throw DegenerateProjection("no regular projection found after 32 directions");
}

// ---------------------------------------------------------------- braids

WritheSl writhe_and_self_linking(const BraidWord& b) {
  if (b.components() != 1) throw NotAKnot("braid closure has " + std::to_string(b.components()) + " components");
  const int e = b.exponent_sum();
  return {e, e - b.strands()};
}

std::vector<std::vector<LaurentPoly>> reduced_burau(const BraidWord& b) {
  const int n = b.strands();
  const int d = n - 1;
  using Matrix = std::vector<std::vector<LaurentPoly>>;
  Matrix m(d, std::vector<LaurentPoly>(d));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  if (d == 0) return m;
  const LaurentPoly t = LaurentPoly::t();
  const LaurentPoly ti = LaurentPoly::monomial(1, -1);

  for (const lorenz::BraidLetter& l : b.letters()) {
    // σ_k changes row k-1 (0-based) of the reduced space only.
    const int i = l.index - 1;
    Matrix g(d, std::vector<LaurentPoly>(d));
    for (int k = 0; k < d; ++k) g[k][k] = 1;
    const bool pos = l.sign > 0;
    if (d == 1) {
      g[0][0] = pos ? -t : -ti;
    } else {
      if (i == 0) {
        g[0][0] = pos ? -t : -ti;
        g[0][1] = pos ? LaurentPoly(1) : ti;
      } else if (i == d - 1) {
        g[d - 1][d - 2] = pos ? t : LaurentPoly(1);
        g[d - 1][d - 1] = pos ? -t : -ti;
      } else {
        g[i][i - 1] = pos ? t : LaurentPoly(1);
        g[i][i] = pos ? -t : -ti;
        g[i][i + 1] = pos ? LaurentPoly(1) : ti;
      }
    }
    Matrix r(d, std::vector<LaurentPoly>(d));
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) {
        LaurentPoly s;
        for (int k = 0; k < d; ++k)
          if (!m[a][k].is_zero() && !g[k][c].is_zero()) s = s + m[a][k] * g[k][c];
        r[a][c] = s;
      }
    m = std::move(r);
  }
  return m;
}

LaurentPoly determinant(std::vector<std::vector<LaurentPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  LaurentPoly prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return {};
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = LaurentPoly::divide_exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

LaurentPoly alexander(const BraidWord& b) {
  if (b.components() != 1) throw NotAKnot("braid closure has " + std::to_string(b.components()) + " components");
  const int n = b.strands();
  if (n == 1) return 1;
  auto m = reduced_burau(b);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) m[i][j] = (i == j ? LaurentPoly(1) : LaurentPoly()) - m[i][j];
  const LaurentPoly det = determinant(std::move(m));
  const LaurentPoly one_minus_t = LaurentPoly(1) - LaurentPoly::t();
  const LaurentPoly one_minus_tn = LaurentPoly(1) - LaurentPoly::monomial(1, n);
  return LaurentPoly::divide_exact(det * one_minus_t, one_minus_tn).symmetrized();
}

// ---------------------------------------------------------------- reports

namespace {

LaurentPoly from_ascending(std::vector<long long> c) {
  std::vector<BigInt> b(c.begin(), c.end());
  return LaurentPoly(0, std::move(b)).symmetrized();
}

struct TableEntry {
  const char* name;
  LaurentPoly delta;
  int genus;
  bool chiral_from_braid;  // needs a homogeneous braid to be named
};

const std::vector<TableEntry>& table() {
  static const std::vector<TableEntry> t = {
      {"trefoil", from_ascending({1, -1, 1}), 1, false},
      {"figure-eight", from_ascending({1, -3, 1}), 1, false},
      {"cinquefoil T(2,5)", from_ascending({1, -1, 1, -1, 1}), 2, true},
      {"torus knot T(2,7)", from_ascending({1, -1, 1, -1, 1, -1, 1}), 3, true},
      {"torus knot T(3,4)", from_ascending({1, -1, 0, 1, 0, -1, 1}), 3, true},
      {"torus knot T(3,5)", from_ascending({1, -1, 0, 1, -1, 1, 0, -1, 1}), 4, true},
  };
  return t;
}

}  // namespace

std::string identify(const KnotReport& r) {
  const LaurentPoly& a = r.alexander;
  if (a == LaurentPoly(1)) return r.genus_bound == 0 ? "unknot" : "unknown";
  for (const TableEntry& e : table()) {
    if (!(a == e.delta)) continue;
    // The Seifert surface of the braid must realize the Alexander genus.
    if (r.genus_bound != e.genus) return "unknown";
    const std::string name = e.name;
    if (name == "trefoil") {
      if (r.homogeneity > 0) return "trefoil (right-handed)";
      if (r.homogeneity < 0) return "trefoil (left-handed)";
      return "trefoil";
    }
    if (name == "figure-eight") return name;
    if (r.homogeneity > 0) return name;
    if (r.homogeneity < 0) return name + " (mirror)";
    return "unknown";
  }
  return "unknown";
}

KnotReport knot_report(const std::string& word, const BraidWord& b) {
  KnotReport r;
  r.word = word;
  r.strands = b.strands();
  r.crossings = b.crossings();
  const WritheSl ws = writhe_and_self_linking(b);
  r.exponent_sum = ws.writhe;
  r.self_linking = ws.self_linking;
  r.genus_bound = (r.crossings - r.strands + 1) / 2;
  r.alexander = alexander(b);
  r.homogeneity = b.positive() ? 1 : (b.negative() ? -1 : 0);
  r.name = identify(r);
  return r;
}

nlohmann::json to_json(const LaurentPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
      terms.push_back({e, static_cast<long long>(c)});
    else
      terms.push_back({e, c.str()});
  }
  return terms;
}

nlohmann::json to_json(const KnotReport& r) {
  return {{"word", r.word},
          {"strands", r.strands},
          {"crossings", r.crossings},
          {"exponent_sum", r.exponent_sum},
          {"self_linking", r.self_linking},
          {"genus_bound", r.genus_bound},
          {"alexander", to_json(r.alexander)},
          {"name", r.name}};
}

}  // namespace knotflow::knots
