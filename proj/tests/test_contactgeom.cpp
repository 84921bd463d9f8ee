#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "knotflow/contactgeom.hpp"
#include "knotflow/errors.hpp"
#include "oracles.hpp"

using namespace knotflow;
using namespace knotflow::contact;

namespace {

// Fixed-step RK4 slide along dθ/dz = -1/g using the surface interpolant.
double slide(const AnnulusSurface& a, double theta, int steps = 4000) {
  const double h = 2.0 / steps;
  auto f = [&](double z, double th) { return -1.0 / a.interpolate(th, z); };
  double z = -1.0;
  for (int k = 0; k < steps; ++k, z += h) {
    const double k1 = f(z, theta), k2 = f(z + h / 2, theta + h / 2 * k1);
    const double k3 = f(z + h / 2, theta + h / 2 * k2), k4 = f(z + h, theta + h * k3);
    theta += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return theta;
}

// Horizontal cap z = 0.3 over [-1, 1]²; the plane field is horizontal
// only on the z axis, which the odd grid hits at its centre.
SurfaceGrid horizontal_cap(int n) {
  SurfaceGrid s{n, n, false, {}};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) s.points.push_back({-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1), 0.3});
  return s;
}

}  // namespace

TEST_CASE("characteristic slope of cylinders") {
  CHECK(characteristic_slope(0.0) == 0.0);
  CHECK(characteristic_slope(1.0) == -1.0);
  CHECK(characteristic_slope(2.0) == -4.0);
  CHECK_THROWS_AS(characteristic_slope(-1.0), std::invalid_argument);
}

TEST_CASE("circle maps") {
  const CircleMap r = CircleMap::rotation(0.7);
  CHECK(r(1.0) == doctest::Approx(1.7));
  CHECK(r(1.0 + 2 * kPi) == doctest::Approx(1.7 + 2 * kPi));
  CHECK(r.derivative(0.3) == doctest::Approx(1.0));
  CHECK(r.orientation_preserving());

  const CircleMap s = CircleMap::sine(-4, 0.5);
  for (double t : {0.1, 1.0, 2.9, 5.5}) {
    CHECK(s(t) == doctest::Approx(t - 4 + 0.5 * std::sin(t)).epsilon(1e-6));
    CHECK(s.derivative(t) == doctest::Approx(1 + 0.5 * std::cos(t)).epsilon(1e-3));
  }
  CHECK_FALSE(CircleMap::sine(0, 1.5).orientation_preserving());

  CHECK(CircleMap::rotation(0.1).distance(CircleMap::rotation(0.1 + 2 * kPi)) < 1e-12);
  CHECK(CircleMap::rotation(0.1).distance(CircleMap::rotation(0.3)) == doctest::Approx(0.2));
  CHECK(CircleMap::rotation(0.4).compose(CircleMap::rotation(-1.1)).distance(CircleMap::rotation(-0.7)) < 1e-12);

  const CircleMap c = s.compose(CircleMap::rotation(0.7));
  for (double t : {0.0, 2.0, 4.0}) CHECK(c(t) == doctest::Approx(t + 0.7 - 4 + 0.5 * std::sin(t + 0.7)).epsilon(1e-6));

  CHECK_THROWS_AS(CircleMap::from_samples({0, 1, 2}), std::invalid_argument);
}

TEST_CASE("cylinders slide by -2/g") {
  const GridSize grid{64, 33};
  CHECK(annulus_monodromy(AnnulusSurface::constant(grid, 1.0)).distance(CircleMap::rotation(-2)) < 1e-7);
  CHECK(annulus_monodromy(AnnulusSurface::constant(grid, 2.0)).distance(CircleMap::rotation(-1)) < 1e-7);
  CHECK(annulus_monodromy(AnnulusSurface::constant(grid, 0.5)).distance(CircleMap::rotation(-4)) < 1e-7);
  CHECK_THROWS_AS(AnnulusSurface::constant(grid, 0.0), std::invalid_argument);
}

TEST_CASE("annulus construction") {
  const double eps = 1.0;
  const CircleMap f = CircleMap::sine(-4, 0.5);
  const AnnulusSurface a = annulus_from_monodromy(f, eps);
  CHECK(a.n_theta() == 256);
  CHECK(a.n_z() == 257);
  CHECK(a.winding() <= 0);

  SUBCASE("boundary condition and positivity") {
    for (int i = 0; i < a.n_theta(); ++i) {
      CHECK(a.g(i, 0) == eps * eps);
      CHECK(a.g(i, a.n_z() - 1) == eps * eps);
    }
    for (double v : a.values()) CHECK(v > 0.0);
  }
  SUBCASE("an independent slide recovers the map") {
    for (int i = 0; i < 256; i += 37) {
      const double th = a.theta(i);
      const double end = slide(a, th);
      const double target = f(th) + 2 * kPi * a.winding();
      CHECK(std::fabs(end - target) < 1e-4);
    }
  }
  SUBCASE("library roundtrip") {
    CHECK(annulus_monodromy(a).distance(f) < 1e-4);
    CHECK(transversality_check(a).transverse);
  }
  SUBCASE("csv export") {
    std::ostringstream out;
    write_surface_csv(out, a);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,z,r");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == a.n_theta() * a.n_z());
  }
}

TEST_CASE("annulus roundtrip on random orientation-preserving maps") {
  oracle::Rng rng(41);
  for (int k = 0; k < 4; ++k) {
    const double shift = rng.uniform(-5, 5), amp = rng.uniform(-0.8, 0.8);
    const double eps = rng.uniform(0.6, 1.5);
    const CircleMap f = CircleMap::sine(shift, amp);
    const AnnulusSurface a = annulus_from_monodromy(f, eps, {128, 257});
    CAPTURE(shift);
    CAPTURE(amp);
    CHECK(annulus_monodromy(a).distance(f) < 1e-4);
    for (double v : a.values()) REQUIRE(v > 0.0);
  }
}

TEST_CASE("annulus failures") {
  CHECK_THROWS_AS(annulus_from_monodromy(CircleMap::sine(0, 1.5), 1.0), NotMonotone);
  CHECK_THROWS_AS(annulus_from_monodromy(CircleMap::rotation(1.3), 1.0, {64, 33}, 0), SlopeSignViolation);
  CHECK_THROWS_AS(annulus_from_monodromy(CircleMap::rotation(1.3), 0.0), std::invalid_argument);
}

TEST_CASE("identity monodromy needs one turn") {
  const AnnulusSurface a = annulus_from_monodromy(CircleMap::rotation(0), 1.0, {64, 129});
  CHECK(a.winding() == -1);
  CHECK(annulus_monodromy(a).distance(CircleMap::rotation(0)) < 1e-4);
}

TEST_CASE("transversality") {
  SUBCASE("horizontal cap is tangent at the centre") {
    const TransversalityReport r = transversality_check(horizontal_cap(21));
    CHECK_FALSE(r.transverse);
    REQUIRE(r.tangencies.size() == 1);
    CHECK(r.tangencies[0] == std::pair<int, int>{10, 10});
    CHECK(r.min_sine < 1e-12);
  }
  SUBCASE("even grid misses the tangency") {
    const TransversalityReport r = transversality_check(horizontal_cap(20));
    CHECK(r.transverse);
    CHECK(r.min_sine > 0.0);
  }
  SUBCASE("vertical plane") {
    SurfaceGrid s{11, 11, false, {}};
    for (int j = 0; j < 11; ++j)
      for (int i = 0; i < 11; ++i) s.points.push_back({0.5, -1.0 + 0.2 * i, -1.0 + 0.2 * j});
    CHECK(transversality_check(s).transverse);
  }
  SUBCASE("cylinders are transverse") {
    CHECK(transversality_check(AnnulusSurface::constant({64, 17}, 1.0)).transverse);
  }
}
