#include <doctest.h>

#include <cmath>
#include <sstream>

#include "renorm/errors.hpp"
#include "renorm/oracle.hpp"

using namespace renorm;

TEST_SUITE("oracle") {

TEST_CASE("first superstable parameters are the closed forms") {
  const auto c = oracle::cascade_delta(2.0, 6);
  REQUIRE(c.complete);
  REQUIRE(c.t.size() == 6);
  CHECK(c.t[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.t[1] == doctest::Approx((1 + std::sqrt(5.0)) / 4).epsilon(1e-15));
  const double d1 = (c.t[1] - c.t[0]) / (c.t[2] - c.t[1]);
  CHECK(c.ratios.front() == d1);
  CHECK(d1 > 0.0);
}

TEST_CASE("the cascade is deterministic") {
  const auto a = oracle::cascade_delta(2.0, 8);
  const auto b = oracle::cascade_delta(2.0, 8);
  CHECK(a.t == b.t);
  CHECK(a.ratios == b.ratios);
  std::ostringstream sa, sb;
  oracle::write_cascade_csv(sa, a);
  oracle::write_cascade_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("alpha,n,t_n,d_n,delta_hat\n", 0) == 0);
}

TEST_CASE("ratios converge to the Feigenbaum constant") {
  const auto c = oracle::cascade_delta(2.0, 12);
  REQUIRE(c.complete);
  for (std::size_t n = 3; n + 1 < c.ratios.size(); ++n) {
    CHECK(std::abs(c.ratios[n + 1] - c.ratios[n]) < std::abs(c.ratios[n] - c.ratios[n - 1]));
  }
  CHECK(c.delta == doctest::Approx(4.669201609).epsilon(1e-7));
}

TEST_CASE("delta depends on the exponent") {
  const auto lo = oracle::cascade_delta(1.8, 11);
  const auto hi = oracle::cascade_delta(2.2, 11);
  // Frozen from the operator spectrum after continuation.
  CHECK(lo.delta == doctest::Approx(4.342418).epsilon(1e-4));
  CHECK(hi.delta == doctest::Approx(4.977299).epsilon(1e-4));
}

TEST_CASE("scaling of the central interval") {
  const auto s = oracle::cascade_scaling(2.0, 10);
  CHECK(s.limit == doctest::Approx(1.0 / 2.502907876).epsilon(1e-5));
  const auto again = oracle::cascade_scaling(2.0, 10);
  CHECK(s.ratios == again.ratios);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(oracle::cascade_delta(2.0, 5), DomainError);
  CHECK_THROWS_AS(oracle::cascade_delta(1.0, 8), DomainError);
}

}  // TEST_SUITE
