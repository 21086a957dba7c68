#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "renorm/errors.hpp"
#include "renorm/func_core.hpp"

using namespace renorm;
using renorm::test::half_cubic;

TEST_SUITE("func_core") {

TEST_CASE("qt_eval examples") {
  CHECK(qt_eval(QtParams(1.0, 2.0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double t : {0.0, 0.3, 0.9, 1.0}) {
    for (double a : {1.5, 2.0, 3.0}) {
      CHECK(qt_eval(QtParams(t, a), 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
      CHECK(qt_eval(QtParams(t, a), -1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    }
  }
  // -1.8 * 16/81 + 0.8
  CHECK(std::abs(qt_eval(QtParams(0.9, 2.0), 4.0 / 9.0) - 4.0 / 9.0) < 1e-15);
}

TEST_CASE("qt parameters are validated") {
  CHECK_THROWS_AS(QtParams(1.2, 2.0), DomainError);
  CHECK_THROWS_AS(QtParams(-0.1, 2.0), DomainError);
  CHECK_THROWS_AS(QtParams(0.5, 1.0), DomainError);
}

TEST_CASE("qt_complex_eval examples") {
  CHECK(std::abs(qt_complex_eval(QtParams(1.0, 2.0), {0.5, 0.0}, 1) - Complex(0.5, 0.0)) < 1e-15);
  const double eps = 1e-3;
  // alpha = 2 admits the imaginary axis
  CHECK(std::abs(qt_complex_eval(QtParams(1.0, 2.0), {0.0, eps}, 1) - Complex(1.0 + 2 * eps * eps, 0.0)) < 1e-14);
  CHECK_THROWS_AS(qt_complex_eval(QtParams(1.0, 3.0), {0.0, eps}, 1), DomainError);
  CHECK_THROWS_AS(qt_complex_eval(QtParams(1.0, 3.0), {0.0, eps}, -1), DomainError);
  CHECK(std::abs(qt_complex_eval(QtParams(0.5, 3.0), {1.0, 0.0}, 1) - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("qt_complex_eval agrees with qt_eval on the real segment") {
  for (double a : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    const QtParams p(0.83, a);
    for (int j = 1; j < 200; ++j) {
      const double x = -1.0 + j / 100.0;
      if (x == 0.0) continue;
      const Complex z = qt_complex_eval(p, {x, 0.0}, x > 0 ? 1 : -1);
      CHECK(std::abs(z - Complex(qt_eval(p, x), 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("even alpha: branches agree where the sectors meet") {
  // At alpha = 2 both closed half-planes contain the imaginary axis.
  const QtParams p(0.9, 2.0);
  for (double y : {-0.7, -0.2, 0.05, 0.4, 1.1}) {
    const Complex z(0.0, y);
    CHECK(std::abs(qt_complex_eval(p, z, 1) - qt_complex_eval(p, z, -1)) < 1e-13);
  }
  // At alpha = 4 the rays arg z = +-pi/4 of branch +1 meet those of branch -1 only at 0.
  const QtParams p4(0.9, 4.0);
  CHECK(std::abs(qt_complex_eval(p4, {0.0, 0.0}, 1) - qt_complex_eval(p4, {0.0, 0.0}, -1)) < 1e-15);
}

TEST_CASE("affine_to examples") {
  const auto id = affine_to(OrientedInterval(-1.0, 1.0, 1));
  CHECK(id.scale == 1.0);
  CHECK(id.shift == 0.0);
  const auto up = affine_to(OrientedInterval(0.0, 1.0, 1));
  CHECK(up(0.0) == -1.0);
  CHECK(up(1.0) == 1.0);
  CHECK(up(0.25) == doctest::Approx(-0.5));
  const auto down = affine_to(OrientedInterval(0.0, 1.0, -1));
  CHECK(down(0.0) == 1.0);
  CHECK(down(1.0) == -1.0);
  CHECK(down(0.25) == doctest::Approx(0.5));
  CHECK_THROWS_AS(OrientedInterval(0.5, 0.5, 1), DomainError);
}

TEST_CASE("affine_to composed with its inverse is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const auto A = affine_to(OrientedInterval(a, b, k % 2 ? 1 : -1));
    const auto B = A.inverse();
    for (int j = 0; j < 100; ++j) {
      const double x = u(rng);
      CHECK(std::abs(B(A(x)) - x) < 1e-14 * std::max(1.0, std::abs(x)) * 8);
    }
  }
}

TEST_CASE("zoom examples") {
  const auto id = PolyDiffeo::identity();
  for (auto iv : {OrientedInterval(0.2, 0.7, 1), OrientedInterval(-0.9, -0.1, -1)}) {
    CHECK(sup_distance(zoom(id.as_fn(), iv).as_fn(), id.as_fn()) < 1e-14);
  }
  const auto phi = half_cubic();
  CHECK(sup_distance(zoom(phi.as_fn(), OrientedInterval(-1.0, 1.0, 1)).as_fn(), phi.as_fn()) < 1e-14);
  // 2 phi(1/2) - 1
  CHECK(zoom(phi.as_fn(), OrientedInterval(0.0, 1.0, 1))(0.0) == doctest::Approx(-0.375).epsilon(1e-14));
}

TEST_CASE("zoom of a decreasing map flips the image orientation") {
  const auto z = zoom_detailed([](double x) { return -x * x * x - x; }, OrientedInterval(0.1, 0.6, 1));
  CHECK(z.image.orientation == -1);
  CHECK(!z.map.invariant_violation());
  CHECK_THROWS_AS(zoom_detailed([](double x) { return -x; }, OrientedInterval(0.1, 0.6, 1), kDefaultDegree, 1),
                  DomainError);
  CHECK_THROWS_AS(zoom([](double x) { return x * x; }, OrientedInterval(-0.5, 0.5, 1)), DomainError);
}

TEST_CASE("zoom is idempotent on normalized maps") {
  const auto phi = half_cubic();
  for (auto iv : {OrientedInterval(0.0, 1.0, 1), OrientedInterval(-0.8, 0.3, -1), OrientedInterval(0.5, 0.55, 1)}) {
    const auto once = zoom(phi.as_fn(), iv);
    const auto twice = zoom(once.as_fn(), OrientedInterval(-1.0, 1.0, 1));
    for (int k = 0; k <= once.degree(); ++k) CHECK(std::abs(once.coeffs()[k] - twice.coeffs()[k]) < 1e-12);
  }
}

TEST_CASE("compose_refit examples") {
  const auto id = PolyDiffeo::identity();
  const auto r = compose_refit(id.as_fn(), id.as_fn());
  for (int k = 0; k <= r.map.degree(); ++k) CHECK(r.map.coeffs()[k] == doctest::Approx(k == 1 ? 1.0 : 0.0));

  const auto phi = half_cubic();
  const auto inv = compose_refit(phi.as_fn(), [&phi](double x) { return phi.inverse(x); });
  CHECK(sup_distance(inv.map.as_fn(), id.as_fn()) < 1e-10);

  const auto twice = compose_refit(phi.as_fn(), phi.as_fn());
  CHECK_FALSE(twice.precision_warning());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int j = 0; j < 17; ++j) {
    const double x = u(rng);
    CHECK(std::abs(twice.map(x) - phi(phi(x))) < 1e-12);
  }
  CHECK_THROWS_AS(compose_refit(phi.as_fn(), [](double x) { return 2.0 * x; }), DomainError);
}

TEST_CASE("fit_from_samples examples") {
  const auto id = fit_from_samples([](double x) { return x; }, 20);
  for (int k = 0; k <= 20; ++k) CHECK(id.coeffs()[k] == doctest::Approx(k == 1 ? 1.0 : 0.0));

  for (int k : {0, 3, 17, 40}) {
    const auto tk = fit_from_samples([k](double x) { return std::cos(k * std::acos(x)); }, 40);
    for (int j = 0; j <= 40; ++j) CHECK(std::abs(tk.coeffs()[j] - (j == k ? 1.0 : 0.0)) < 1e-13);
  }

  const auto s = fit_from_samples([](double x) { return std::sin(std::numbers::pi * x / 2); }, 40);
  double err = 0.0;
  for (int j = 0; j <= 4000; ++j) {
    const double x = -1.0 + j / 2000.0;
    err = std::max(err, std::abs(s(x) - std::sin(std::numbers::pi * x / 2)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("PolyDiffeo invariants") {
  CHECK_NOTHROW(half_cubic());
  CHECK_THROWS_AS(PolyDiffeo(std::vector<double>{0.1, 1.0}), DomainError);         // endpoints moved
  CHECK_THROWS_AS(PolyDiffeo(std::vector<double>{0.0, 0.0, 0.0, 1.0}), DomainError);  // T_3 is not monotone
  const auto phi = half_cubic();
  for (double y : {-0.9, -0.2, 0.0, 0.31, 0.99}) CHECK(phi(phi.inverse(y)) == doctest::Approx(y).epsilon(1e-14));
  CHECK(phi.with_degree(80).degree() == 80);
  CHECK(sup_distance(phi.with_degree(80).as_fn(), phi.as_fn()) < 1e-15);
}

TEST_CASE("stadium geometry") {
  const Stadium s(OrientedInterval(-1.0, 1.0, 1), 0.2);
  CHECK(s.contains({0.0, 0.19}));
  CHECK_FALSE(s.contains({0.0, 0.21}));
  CHECK(s.contains({1.15, 0.0}));
  CHECK(s.distance_to_base({1.0, 0.3}) == doctest::Approx(0.3));
  for (const auto& z : s.boundary(64)) CHECK(s.distance_to_base(z) == doctest::Approx(0.2));
}

}  // TEST_SUITE
