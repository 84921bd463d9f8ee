#include <doctest.h>

#include <cmath>

#include "knotflow/errors.hpp"
#include "knotflow/flowdyn.hpp"
#include "oracles.hpp"

using namespace knotflow;
using namespace knotflow::flow;

namespace {

// Saddle of the (x, z) subsystem at (1, 1/2, 0): eigenvalues ±1/√2 held
// for one period 4π.
const double kSaddleMultiplier = std::exp(2 * std::sqrt(2.0) * kPi);

const AbcParams kIntegrable{1, 0.5, 0};

}  // namespace

TEST_CASE("trajectories") {
  const Trajectory tr = integrate(kIntegrable, Point3(0.3, 1.0, 2.0), 5.0);
  REQUIRE(tr.samples.size() > 2);
  CHECK(tr.samples.front().t == 0.0);
  CHECK(tr.samples.back().t == doctest::Approx(5.0).epsilon(1e-14));
  for (std::size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].t > tr.samples[i - 1].t);
  for (const Sample& s : tr.samples)
    for (int c = 0; c < 3; ++c) {
      const double k = (s.lift[c] - s.q[c]) / (2 * kPi);
      CHECK(std::fabs(k - std::round(k)) < 1e-9);
    }
  CHECK_THROWS_AS(integrate(kIntegrable, Point3(0, 0, 0), -1.0), std::invalid_argument);
}

TEST_CASE("flow map solves the equation") {
  // Along a trajectory the Euler-step defect of the sampled lift is small.
  const AbcParams p{1, 0.7, 0.4};
  const Lift a = flow_map(p, {0.1, 0.2, 0.3}, 1.0);
  const Lift b = flow_map(p, a, 1e-3);
  const auto u = oracle::abc(1, 0.7, 0.4, a[0], a[1], a[2]);
  for (int c = 0; c < 3; ++c) CHECK(std::fabs((b[c] - a[c]) / 1e-3 - u[c]) < 1e-3);
}

TEST_CASE("flow group property on random data") {
  oracle::Rng rng(31);
  for (int k = 0; k < 25; ++k) {
    const AbcParams p{1, rng.uniform(), rng.uniform()};
    const Lift q{rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi)};
    const double s = rng.uniform(0, 5), t = rng.uniform(0, 5);
    const Lift two = flow_map(p, flow_map(p, q, s, 1e-12), t, 1e-12);
    const Lift one = flow_map(p, q, s + t, 1e-12);
    for (int c = 0; c < 3; ++c) CHECK(std::fabs(two[c] - one[c]) < 1e-8);
  }
}

TEST_CASE("conserved quantity of the integrable limit") {
  const Trajectory tr = integrate(kIntegrable, Point3(0.4, 0.0, 1.3), 100.0);
  CHECK(conserved_quantity_C0(tr) < 1e-6);
  const Trajectory other = integrate({1, 0.5, 0.1}, Point3(0.4, 0.0, 1.3), 1.0);
  CHECK_THROWS_AS(conserved_quantity_C0(other), WrongParams);
}

TEST_CASE("section specs") {
  const SectionSpec s(Axis::Y, 2 * kPi + 0.5, 1);
  CHECK(s.value == doctest::Approx(0.5));
  CHECK_THROWS_AS(SectionSpec(Axis::Y, 0.0, 0), std::invalid_argument);
}

TEST_CASE("first return") {
  SUBCASE("saddle orbit returns to itself after 4π") {
    const Return r = poincare_map(kIntegrable, {Axis::Y, 0.0, -1}, Point3(kPi / 2, 0, kPi), 50.0);
    CHECK(r.flight == doctest::Approx(4 * kPi).epsilon(1e-9));
    CHECK(r.q1.distance(Point3(kPi / 2, 0, kPi)) < 1e-8);
  }
  SUBCASE("centre orbit returns after 4π/3") {
    const Return r = poincare_map(kIntegrable, {Axis::Y, 0.0, 1}, Point3(kPi / 2, 0, 0), 50.0);
    CHECK(r.flight == doctest::Approx(4 * kPi / 3).epsilon(1e-9));
  }
  SUBCASE("the returned point is on the section") {
    const Return r = poincare_map({1, 0.5, 0.2}, {Axis::Z, 1.0, 1}, Point3(0.2, 0.3, 1.0), 50.0);
    CHECK(std::fabs(wrap_delta(r.q1.z() - 1.0)) < 1e-10);
    CHECK(r.flight > 0.0);
  }
  CHECK_THROWS_AS(poincare_map(kIntegrable, {Axis::Y, 0.0, 1}, Point3(0.1, 0.5, 0.2), 10.0), std::invalid_argument);
  // Straight lines in z never come back to z = 0 with growing z.
  CHECK_THROWS_AS(poincare_map({1, 0, 0}, {Axis::Z, 0.0, 1}, Point3(1, 1, 0), 50.0), NoReturn);
}

TEST_CASE("shooting finds the saddle orbit") {
  const PeriodicOrbit o = find_periodic_orbit(kIntegrable, {Axis::Y, 0.0, -1}, Point3(1.5, 0.0, 3.0));
  CHECK(o.period == doctest::Approx(4 * kPi).epsilon(1e-10));
  CHECK(o.base.distance(Point3(kPi / 2, 0, kPi)) < 1e-7);
  CHECK(o.residual < 1e-9);
  CHECK(o.multipliers.kind == Stability::Hyperbolic);
  CHECK(std::abs(o.multipliers.first) == doctest::Approx(kSaddleMultiplier).epsilon(1e-6));
  CHECK(std::abs(o.multipliers.second) == doctest::Approx(1 / kSaddleMultiplier).epsilon(1e-4));
  CHECK(std::abs(o.multipliers.product() - 1.0) < 1e-8);
  CHECK(std::string(to_string(o.multipliers.kind)) == "hyperbolic");
}

TEST_CASE("shooting finds the centre orbit") {
  const PeriodicOrbit o = find_periodic_orbit(kIntegrable, {Axis::Y, 0.0, 1}, Point3(1.4, 0.0, 0.2));
  CHECK(o.period == doctest::Approx(4 * kPi / 3).epsilon(1e-9));
  CHECK(o.multipliers.kind == Stability::Elliptic);
  CHECK(std::abs(o.multipliers.first) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(o.multipliers.product() - 1.0) < 1e-8);
}

TEST_CASE("hyperbolic orbit persists for small C") {
  const AbcParams p{1, 0.5, 0.05};
  const PeriodicOrbit o = find_periodic_orbit(p, {Axis::Y, 0.0, -1}, Point3(kPi / 2, 0, kPi));
  CHECK(o.period == doctest::Approx(12.59).epsilon(1e-2));
  CHECK(o.multipliers.kind == Stability::Hyperbolic);
  CHECK(std::abs(o.multipliers.product() - 1.0) < 1e-6);

  SUBCASE("finite-difference monodromy agrees on the unstable multiplier") {
    const Multipliers fd = floquet(p, o, 1e-11, MonodromyMode::FiniteDifference);
    CHECK(std::abs(fd.first) == doctest::Approx(std::abs(o.multipliers.first)).epsilon(1e-4));
  }
  SUBCASE("monodromy is volume preserving") {
    const Lift base{o.base.x(), o.base.y(), o.base.z()};
    const Monodromy m = monodromy(p, base, o.period);
    CHECK(m.det == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("shooting gives up on a chaotic guess") {
  CHECK_THROWS_AS(find_periodic_orbit({1, 1, 1}, {Axis::Y, 0.0, 1}, Point3(0.3, 0.0, 2.0)), NoConvergence);
}

TEST_CASE("separatrix splitting") {
  const AbcParams base{1, 0.5, 0};
  SUBCASE("no splitting in the integrable limit") {
    const SplittingProfile s = separatrix_splitting(base, 0.0, 32);
    REQUIRE(s.signed_distance.size() == 32);
    CHECK(s.max_abs() < 1e-6);
  }
  SUBCASE("the perturbed profile oscillates and is sampled on one period") {
    const SplittingProfile s = separatrix_splitting(base, 0.05, 64);
    CHECK(s.C == 0.05);
    CHECK(s.sign_changes() >= 2);
    CHECK(s.max_abs() > 1e-3);
    CHECK(s.section_param.front() >= 0.0);
    CHECK(s.section_param.back() < 2 * kPi);
    for (std::size_t i = 1; i < s.section_param.size(); ++i) CHECK(s.section_param[i] > s.section_param[i - 1]);
  }
  CHECK_THROWS_AS(separatrix_splitting({1, 0.5, 0.1}, 0.05, 16), WrongParams);
  CHECK_THROWS_AS(separatrix_splitting({1, 1.0, 0}, 0.05, 16), WrongParams);
  CHECK_THROWS_AS(separatrix_splitting(base, 0.05, 3), std::invalid_argument);
}

TEST_CASE("splitting profile helpers") {
  SplittingProfile s;
  s.signed_distance = {1, -2, 0.5, 3};
  CHECK(s.max_abs() == 3.0);
  CHECK(s.sign_changes() == 2);
  s.signed_distance = {1, 2, 3};
  CHECK(s.sign_changes() == 0);
}
