#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "renorm/bounds.hpp"
#include "renorm/errors.hpp"

using namespace renorm;
using renorm::test::alpha2_fixed_point;

namespace {

const NestedOrbit& fixed_point_orbit() {
  static const NestedOrbit orbit = nested_orbit(alpha2_fixed_point().pair(), UnimodalPermutation::doubling(), 9);
  return orbit;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("real bounds on the fixed-point orbit") {
  const auto& orbit = fixed_point_orbit();
  REQUIRE(orbit.depth() == 9);
  const auto report = real_bounds_report(orbit.cycles);
  CHECK(report.within(0.05, 0.95, 3, 8));
  CHECK(report.min_ratio > 0.09);
  CHECK(report.max_ratio < 0.41);
  // The central interval shrinks by the universal scaling at every level.
  for (int n = 1; n <= 8; ++n) CHECK(report.level(n).central_ratio == doctest::Approx(0.3995353).epsilon(1e-5));
}

TEST_CASE("level one ratios are half the interval lengths") {
  const auto& orbit = fixed_point_orbit();
  const std::vector<Cycle> one{orbit.cycles.front()};
  const auto report = real_bounds_report(one);
  const auto& level0 = report.level(0);
  REQUIRE(level0.child.size() == 2);
  for (int i = 1; i <= 2; ++i) {
    const double want = one[0].at(i).length() / 2.0;
    bool found = false;
    for (double r : level0.child) found = found || std::abs(r - want) < 1e-15;
    CHECK(found);
  }
}

TEST_CASE("geometry of a perturbed orbit approaches the fixed point's") {
  const auto& rec = alpha2_fixed_point();
  const auto phi = PolyDiffeo(fit_from_samples([](double x) { return x + 0.05 * (x * x * x - x); }));
  const double t0 = stable_manifold_t(phi, rec, 12);
  const auto other = nested_orbit(Pair(phi, QtParams(t0, 2.0)), rec.sigma, 8);
  const auto a = real_bounds_report(fixed_point_orbit().cycles);
  const auto b = real_bounds_report(other.cycles);
  // The approach oscillates with the sign of the subdominant eigenvalues, so
  // compare every other level.
  std::vector<double> diff(8, 0.0);
  for (int n = 2; n <= 7; ++n) diff[n] = std::abs(a.level(n).central_ratio - b.level(n).central_ratio);
  for (int n = 2; n <= 5; ++n) CHECK(diff[n + 2] < 0.5 * diff[n]);
  CHECK(diff[7] < 1e-6);
}

TEST_CASE("decomposition pieces decay") {
  const auto decay = decomposition_decay(fixed_point_orbit(), 2, 8);
  CHECK(decay.phi_slope < -0.1);
  CHECK(decay.q_strictly_decreasing(6));
  CHECK(decay.level(6).q_stadium.size() == 7);
  CHECK_THROWS_AS(decomposition_decay(fixed_point_orbit(), 2, 4), DomainError);
}

TEST_CASE("univalence screen") {
  const Stadium s(OrientedInterval(-1.0, 1.0, 1), 0.5);
  CHECK(univalence_check(PolyDiffeo::identity(), s));
  CHECK_FALSE(univalence_check([](Complex z) { return z * z; }, [](Complex z) { return 2.0 * z; }, s));
  CHECK(univalence_check(renorm::test::half_cubic(), Stadium(OrientedInterval(-1.0, 1.0, 1), 0.2)));
  CHECK(univalence_check(alpha2_fixed_point().phi_star, Stadium(OrientedInterval(-1.0, 1.0, 1), 0.1)));
}

TEST_CASE("stadium_propagation examples") {
  CHECK(stadium_propagation(0.0, 0.3, 5.0) == 0.3);
  CHECK(stadium_propagation(1.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(stadium_propagation(-1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("distance to identity") {
  CHECK(stadium_distance_to_identity([](Complex z) { return z; }, 0.1) == 0.0);
  CHECK(stadium_distance_to_identity([](Complex z) { return z + 0.01 * (z * z - 1.0); }, 0.1) > 0.01);
}

TEST_CASE("propagation bound holds one level down") {
  const auto r = propagation_check(fixed_point_orbit(), 3, 5);
  CHECK(r.passed());
  CHECK(r.tested > 0);
}

TEST_CASE("near-identity estimate for univalent maps") {
  const auto r = near_identity_bound_check(100.0, 2.0);
  CHECK(r.halving_ok());
  CHECK(r.max_ratio < 2.0);
  CHECK_THROWS_AS(near_identity_bound_check(4.0, 3.0), DomainError);
}

TEST_CASE("bounds CSV layout") {
  const auto& orbit = fixed_point_orbit();
  std::ostringstream out;
  write_bounds_csv(out, 2.0, real_bounds_report(orbit.cycles), decomposition_decay(orbit, 2, 6));
  CHECK(out.str().rfind("alpha,n,kind,index,value\n", 0) == 0);
}

}  // TEST_SUITE
