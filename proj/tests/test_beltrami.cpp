#include <doctest.h>

#include <cmath>

#include "knotflow/beltrami.hpp"
#include "knotflow/errors.hpp"
#include "oracles.hpp"

using namespace knotflow;
using namespace knotflow::beltrami;

namespace {

void check_vec(const Vec3& v, double x, double y, double z, double tol) {
  CHECK(std::fabs(v.vx - x) <= tol);
  CHECK(std::fabs(v.vy - y) <= tol);
  CHECK(std::fabs(v.vz - z) <= tol);
}

}  // namespace

TEST_CASE("velocity at tabulated points") {
  check_vec(abc_velocity({1, 1, 1}, 0, 0, 0), 1, 1, 1, 1e-15);
  check_vec(abc_velocity({1, 0.5, 0}, kPi / 2, 0, kPi), 0, -0.5, 0, 1e-15);
  for (double y : {0.0, 1.0, 2.5, 4.0, 6.0}) {
    const Vec3 u = abc_velocity({1, 1, 0}, kPi / 2, y, kPi);
    CHECK(norm(u) < 1e-15);
  }
}

TEST_CASE("velocity agrees with the written-out field at random points") {
  oracle::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const double A = rng.uniform(0, 2), B = rng.uniform(0, 2), C = rng.uniform(0, 2);
    const double x = rng.uniform(-10, 10), y = rng.uniform(-10, 10), z = rng.uniform(-10, 10);
    const Vec3 u = abc_velocity({A, B, C}, x, y, z);
    const auto r = oracle::abc(A, B, C, x, y, z);
    CHECK(std::fabs(u.vx - r[0]) < 1e-14);
    CHECK(std::fabs(u.vy - r[1]) < 1e-14);
    CHECK(std::fabs(u.vz - r[2]) < 1e-14);
  }
}

TEST_CASE("closed-form curl is the velocity") {
  oracle::Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const AbcParams p{1, rng.uniform(), rng.uniform()};
    const Point3 q(rng.uniform(0, 7), rng.uniform(0, 7), rng.uniform(0, 7));
    const Vec3 d = abc_curl(p, q, ClosedForm{}) - abc_velocity(p, q);
    CHECK(sup_norm(d) == 0.0);
  }
}

TEST_CASE("finite-difference curl matches the oracle and converges at second order") {
  const AbcParams p{1, 1, 1};
  const Point3 q(0.3, 0.7, 1.1);
  const Vec3 fd = abc_curl(p, q, FiniteDifference{1e-4});
  const auto o = oracle::curl_fd(1, 1, 1, 0.3, 0.7, 1.1, 1e-4);
  CHECK(std::fabs(fd.vx - o[0]) < 1e-10);
  CHECK(std::fabs(fd.vy - o[1]) < 1e-10);
  CHECK(std::fabs(fd.vz - o[2]) < 1e-10);
  CHECK(sup_norm(fd - abc_velocity(p, q)) < 1e-6);

  oracle::Rng rng(5);
  double e1 = 0, e2 = 0;
  const AbcParams p2{1, 0.5, 0.3};
  for (int k = 0; k < 100; ++k) {
    const Point3 r(rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi));
    e1 = std::fmax(e1, sup_norm(abc_curl(p2, r, FiniteDifference{1e-3}) - abc_velocity(p2, r)));
    e2 = std::fmax(e2, sup_norm(abc_curl(p2, r, FiniteDifference{5e-4}) - abc_velocity(p2, r)));
  }
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("divergence vanishes") {
  CHECK(std::fabs(abc_divergence({1, 1, 1}, Point3(0, 0, 0), 1e-4)) < 1e-8);
  CHECK(std::fabs(abc_divergence({1, 0.5, 0}, Point3(1.2, 2.3, 0.4), 1e-4)) < 1e-8);
  CHECK_THROWS_AS(abc_divergence({1, 1, 1}, Point3(0, 0, 0), 0.0), std::invalid_argument);
}

TEST_CASE("normalization") {
  const Normalized n = normalize({0.3, 2.0, 1.0});
  CHECK(n.params.A() == 1.0);
  CHECK(n.params.B() == doctest::Approx(0.5));
  CHECK(n.params.C() == doctest::Approx(0.15));
  CHECK(n.params.is_normalized());
  CHECK(normalize(n.params).params == n.params);
  CHECK_THROWS_AS(normalize({-1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(normalize({0, 0, 0}), std::invalid_argument);

  SUBCASE("the symmetry conjugates the two fields") {
    oracle::Rng rng(9);
    for (int k = 0; k < 20; ++k) {
      const AbcParams raw{rng.uniform(0.1, 3), rng.uniform(0.1, 3), rng.uniform(0.1, 3)};
      const Normalized m = normalize(raw);
      const Point3 q(rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6));
      const Vec3 lhs = abc_velocity(m.params, m.symmetry.apply(q));
      const Vec3 rhs = m.symmetry.push(abc_velocity(raw, q));
      CHECK(sup_norm(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("nonsingular flag") {
  CHECK(AbcParams(1, 0.5, 0.5).is_nonsingular());
  CHECK_FALSE(AbcParams(1, 1, 0).is_nonsingular());
  CHECK_FALSE(AbcParams(1, 1, 0.5).is_nonsingular());
  CHECK(AbcParams(1, 0, 0).is_nonsingular());
}

TEST_CASE("singular set") {
  SUBCASE("certified nonsingular") {
    const SingularityReport r = abc_singular_points({1, 0.5, 0.5});
    CHECK(r.zeros.empty());
    CHECK(r.nonsingular);
    CHECK(r.lower_bound > 0.0);
  }
  SUBCASE("constant speed") {
    const SingularityReport r = abc_singular_points({1, 0, 0});
    CHECK(r.zeros.empty());
    CHECK(r.min_speed == doctest::Approx(1.0));
  }
  SUBCASE("the circles at (1, 1, 0)") {
    const SingularityReport r = abc_singular_points({1, 1, 0});
    CHECK_FALSE(r.nonsingular);
    REQUIRE_FALSE(r.zeros.empty());
    int on_first = 0;
    for (const Point3& z : r.zeros) {
      CHECK(norm(abc_velocity({1, 1, 0}, z)) < 1e-10);
      const bool first = std::hypot(z.x() - kPi / 2, z.z() - kPi) < 1e-8;
      const bool second = std::hypot(z.x() - 3 * kPi / 2, wrap_delta(z.z())) < 1e-8;
      CHECK((first || second));
      on_first += first;
    }
    CHECK(on_first > 0);
  }
  CHECK_THROWS_AS(abc_singular_points({2, 1, 0}), NotNormalized);
  CHECK_THROWS_AS(abc_singular_points({1, 0.5, 0.2}, 4), std::invalid_argument);
}

TEST_CASE("contact form") {
  const ContactFormValue a = abc_contact_form({1, 1, 1}, Point3(0, 0, 0));
  CHECK(a.ax == 1.0);
  CHECK(a(abc_velocity({1, 1, 1}, 0, 0, 0)) == doctest::Approx(3.0));
  const AbcParams p{1, 0.5, 0};
  CHECK(abc_contact_form(p, Point3(kPi / 2, 0, kPi))(abc_velocity(p, kPi / 2, 0, kPi)) == doctest::Approx(0.25));

  CHECK(std::fabs(contact_volume_density({1, 1, 1}, Point3(0, 0, 0)) - 3.0) < 1e-5);
  CHECK(std::fabs(contact_volume_density({1, 1, 0}, Point3(kPi / 2, 0, kPi))) < 1e-6);
  CHECK(std::fabs(contact_volume_density({1, 0, 0}, Point3(0.4, 1.7, 5.1)) - 1.0) < 1e-5);

  oracle::Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const AbcParams q{1, rng.uniform(), rng.uniform()};
    const Point3 r(rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6));
    const Vec3 u = abc_velocity(q, r);
    CHECK(std::fabs(contact_volume_density(q, r) - dot(u, u)) < 1e-6);
  }
}

TEST_CASE("Reeb residuals") {
  const ReebResidual r = reeb_residual({1, 1, 1}, Point3(0, 0, 0));
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 < 1e-6);

  oracle::Rng rng(17);
  double r1 = 0, r2 = 0;
  const AbcParams p{1, 0.5, 0.1};
  for (int k = 0; k < 100; ++k) {
    const ReebResidual s =
        reeb_residual(p, Point3(rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)));
    r1 = std::fmax(r1, s.r1);
    r2 = std::fmax(r2, s.r2);
  }
  CHECK(r1 < 1e-12);
  CHECK(r2 < 1e-5);
  CHECK_THROWS_AS(reeb_residual({1, 1, 0}, Point3(kPi / 2, 0, kPi)), SingularPoint);
}

TEST_CASE("standard tight form") {
  const TightReeb a = std_tight_eval(Point4(1, 0, 0, 0));
  CHECK(a.reeb[0] == 0.0);
  CHECK(a.reeb[1] == 2.0);
  CHECK(a.alpha_on_reeb == 1.0);
  const TightReeb b = std_tight_eval(Point4(0, 0, 1, 0));
  CHECK(b.reeb[3] == 2.0);
  CHECK(b.alpha_on_reeb == 1.0);

  oracle::Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    double x[4], n = 0;
    for (double& v : x) {
      v = rng.uniform(-1, 1);
      n += v * v;
    }
    n = std::sqrt(n);
    const TightReeb t = std_tight_eval(Point4(x[0] / n, x[1] / n, x[2] / n, x[3] / n));
    CHECK(std::fabs(t.alpha_on_reeb - 1.0) < 1e-12);
    CHECK(t.dalpha_residual < 1e-12);
  }
  CHECK_THROWS_AS(Point4(1, 1, 0, 0), NotOnSphere);
}
