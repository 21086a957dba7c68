#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "renorm/errors.hpp"
#include "renorm/renorm.hpp"

using namespace renorm;
using renorm::test::alpha2_fixed_point;
using renorm::test::identity_pair;

namespace {

const double kT1 = 3.2 / (2.0 * std::sqrt(14.0) - 4.0);  // (0.8 - 4/9) / ((2 sqrt 14 - 4) / 9)

double sup_on_grid(const RealFn& f, const RealFn& g, int n = 400) {
  double m = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double x = -1.0 + 2.0 * j / n;
    m = std::max(m, std::abs(f(x) - g(x)));
  }
  return m;
}

UnimodalMap quadratic(double a, double b) {
  return {[a, b](double x) { return a * x * x + b; }, [a](double x) { return 2.0 * a * x; }};
}

}  // namespace

TEST_SUITE("renorm") {

TEST_CASE("renormalize at the fixed point returns the fixed point") {
  const auto& rec = alpha2_fixed_point();
  const auto r = renormalize(rec.pair(), rec.sigma);
  CHECK(std::abs(r.pair.t() - rec.t_star) <= 10 * rec.residual + 1e-14);
  CHECK(sup_distance(r.pair.phi.as_fn(), rec.phi_star.as_fn()) <= 10 * rec.residual + 1e-14);
  CHECK(r.step.t_next == doctest::Approx(rec.t_star).epsilon(1e-10));
}

TEST_CASE("renormalize of (id, 0.9)") {
  const auto pair = identity_pair(0.9);
  const auto r = renormalize(pair, UnimodalPermutation::doubling());
  CHECK(r.pair.t() == doctest::Approx(kT1).epsilon(1e-12));
  CHECK(r.step.pieces.size() == 3);
  for (const auto& piece : r.step.pieces) CHECK_FALSE(piece.invariant_violation());

  // The renormalized map against f^2 zoomed on the central interval directly;
  // -p is the endpoint sent to -1.
  const double p = -4.0 / 9.0;
  const auto f = pair.as_map();
  const auto L = compose_L(r.pair);
  for (int j = 0; j < 64; ++j) {
    const double x = -1.0 + 2.0 * (j + 0.5) / 64;
    CHECK(std::abs(L(x) - f.iterate(p * x, 2) / p) < 1e-10);
  }
}

TEST_CASE("t_next examples") {
  const auto pair = identity_pair(0.9);
  const auto cycle = find_cycle(pair, 2);
  REQUIRE(cycle);
  CHECK(t_next(pair, *cycle) == doctest::Approx(kT1).epsilon(1e-12));
  const auto& rec = alpha2_fixed_point();
  const auto fp_cycle = find_cycle(rec.pair(), 2);
  REQUIRE(fp_cycle);
  CHECK(t_next(rec.pair(), *fp_cycle) == doctest::Approx(rec.t_star).epsilon(1e-10));
  CHECK_THROWS_AS(renormalize(identity_pair(0.5), UnimodalPermutation::doubling()), DomainError);
}

TEST_CASE("classic_renormalize examples") {
  const UnimodalMap id{[](double x) { return x; }, [](double) { return 1.0; }};
  const auto rid = classic_renormalize(id, 1, 0.5);
  for (double z : {-1.0, -0.3, 0.0, 0.7}) CHECK(rid(z) == doctest::Approx(z));

  const auto f = quadratic(-1.8, 0.8);
  CHECK(classic_renormalize(f, 2, 4.0 / 9.0)(0.0) == doctest::Approx(-0.792).epsilon(1e-14));
  CHECK_THROWS_AS(classic_renormalize(f, 2, 0.0), DomainError);
  CHECK_THROWS_AS(classic_renormalize(f, 2, 0.3), DomainError);

  const auto& rec = alpha2_fixed_point();
  const auto lhs = compose_L(renormalize(rec.pair(), rec.sigma).pair);
  const auto rhs = classic_renormalize(compose_L(rec.pair()), rec.sigma);
  CHECK(sup_on_grid(lhs.value, rhs.value) < 1e-9);
}

TEST_CASE("conjugacy of the two operators on test pairs") {
  const auto sigma = UnimodalPermutation::doubling();
  for (double t : {0.8, 0.85, 0.9}) {
    const auto pair = identity_pair(t);
    const auto lhs = compose_L(renormalize(pair, sigma).pair);
    const auto rhs = classic_renormalize(compose_L(pair), sigma);
    CHECK(sup_on_grid(lhs.value, rhs.value) < 1e-9);
  }
}

TEST_CASE("compose_L examples") {
  const auto L1 = compose_L(identity_pair(1.0));
  for (double x : {-0.8, 0.0, 0.35}) CHECK(L1(x) == doctest::Approx(1.0 - 2.0 * x * x));
  const auto L0 = compose_L(identity_pair(0.0));
  for (double x : {-0.8, 0.0, 0.35}) CHECK(L0(x) == doctest::Approx(-1.0));
  const Pair p(renorm::test::half_cubic(), QtParams(0.9, 2.0));
  CHECK(compose_L(p)(0.0) == doctest::Approx(0.656).epsilon(1e-14));
  CHECK(compose_L(p)(1.0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("factorization consistency: one period-4 step equals two period-2 steps") {
  const auto& rec = alpha2_fixed_point();
  const auto s2 = UnimodalPermutation::doubling();
  // Any pair near the fixed point is twice renormalizable.
  const auto pair = Pair(rec.phi_star, QtParams(rec.t_star + 1e-4, 2.0));
  const auto once = renormalize(pair, permutation_power(s2, 2));
  const auto twice = renormalize(renormalize(pair, s2).pair, s2);
  CHECK(std::abs(once.pair.t() - twice.pair.t()) < 1e-9);
  CHECK(sup_distance(once.pair.phi.as_fn(), twice.pair.phi.as_fn()) < 1e-8);
}

TEST_CASE("dL examples and linearity") {
  const auto id = identity_pair(0.7);
  const RealFn zero = [](double) { return 0.0; };
  for (double x : {-0.9, 0.0, 0.4}) CHECK(dL(id, zero, 0.0)(x) == 0.0);
  CHECK(dL(id, zero, 1.0)(0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(dL(identity_pair(0.7, 3.0), zero, 1.0), DomainError);
  CHECK_THROWS_AS(dL(identity_pair(0.7, 2.5), zero, 1.0), DomainError);

  const auto& rec = alpha2_fixed_point();
  const auto base = rec.pair();
  const RealFn w1 = [](double x) { return 0.1 * (1 - x * x) * (1 + x); };
  const RealFn w2 = [](double x) { return 0.05 * std::sin(std::numbers::pi * x); };
  const double a = 0.7, b = -1.3, v1 = 0.2, v2 = -0.5;
  const RealFn combo = [&](double x) { return a * w1(x) + b * w2(x); };
  const auto lhs = dL(base, combo, a * v1 + b * v2);
  const auto r1 = dL(base, w1, v1), r2 = dL(base, w2, v2);
  CHECK(sup_on_grid(lhs, [&](double x) { return a * r1(x) + b * r2(x); }) < 1e-12);
}

TEST_CASE("dL matches a central finite difference") {
  const auto& rec = alpha2_fixed_point();
  const auto base = rec.pair();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double c2 = 0.2 * u(rng), c3 = 0.2 * u(rng), v = u(rng);
    const RealFn omega = [=](double x) { return (1 - x * x) * (c2 + c3 * x); };
    const double h = 1e-5;
    auto shifted = [&](double s) {
      return [&, s](double x) {
        const double q = qt_eval(QtParams(rec.t_star + s * h * v, 2.0), x);
        return rec.phi_star(q) + s * h * omega(q);
      };
    };
    const auto plus = shifted(1.0), minus = shifted(-1.0);
    const auto lin = dL(base, omega, v);
    CHECK(sup_on_grid(lin, [&](double x) { return (plus(x) - minus(x)) / (2 * h); }) < 1e-8);
  }
}

TEST_CASE("F_lift is a right inverse of dL at the fixed point") {
  const auto& rec = alpha2_fixed_point();
  const auto base = rec.pair();
  const double t = rec.t_star;
  const auto& phi = rec.phi_star;
  auto qc = [t](Complex z) { return -2.0 * t * z * z + 2.0 * t - 1.0; };

  const auto zero = F_lift([](Complex) { return Complex(0.0, 0.0); }, base);
  CHECK(std::abs(zero.b) < 1e-15);
  for (double c : zero.omega.coeffs()) CHECK(std::abs(c) < 1e-15);

  // w = 2 (1 - x^2) Dphi*(q(x)) is dL(0, 1), so b = 1 and omega = 0.
  const auto pure_t = F_lift([&](Complex z) { return 2.0 * (1.0 - z * z) * phi.derivative(qc(z)); }, base);
  CHECK(pure_t.b == doctest::Approx(1.0).epsilon(1e-10));
  for (double c : pure_t.omega.coeffs()) CHECK(std::abs(c) < 1e-9);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double c2 = 0.3 * u(rng), c4 = 0.3 * u(rng), v = u(rng);
    auto omega = [=](Complex y) { return (1.0 - y * y) * (c2 + c4 * y); };
    auto w = [&](Complex z) { return omega(qc(z)) + phi.derivative(qc(z)) * 2.0 * v * (1.0 - z * z); };
    const auto lift = F_lift(w, base);
    const auto back = dL(base, [&](double y) { return lift.omega(y); }, lift.b);
    CHECK(sup_on_grid(back, [&](double x) { return w(Complex(x, 0.0)).real(); }) < 1e-9);
  }

  CHECK_THROWS_AS(F_lift([](Complex z) { return z * (1.0 - z * z); }, base), DomainError);
}

TEST_CASE("injectivity_probe examples") {
  const auto a = identity_pair(0.8);
  CHECK(injectivity_probe(a, a) == 0.0);
  const double d = injectivity_probe(a, identity_pair(0.8001));
  CHECK(d >= 1e-5);
  CHECK(d == doctest::Approx(2e-4).epsilon(1e-3));

  // L-values of these two agree at x = +-1 and are close elsewhere, yet differ.
  const Pair b(PolyDiffeo(fit_from_samples([](double x) { return x + 1e-3 * (x * x - 1.0); })), QtParams(0.8, 2.0));
  CHECK(injectivity_probe(a, b) > 0.0);
}

}  // TEST_SUITE
