#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fixtures.hpp"
#include "renorm/errors.hpp"
#include "renorm/roots.hpp"
#include "renorm/unimodal.hpp"

using namespace renorm;
using renorm::test::identity_pair;

namespace {

// Independent reading of the definition: one q-cycle, and the graph
// r -> images[r-1] rises and then falls.
bool unimodal_by_hand(const std::vector<int>& images) {
  const int q = static_cast<int>(images.size());
  int r = 1, steps = 0;
  do {
    r = images[r - 1];
    ++steps;
  } while (r != 1 && steps <= q);
  if (steps != q) return false;
  int i = 1;
  while (i < q && images[i] > images[i - 1]) ++i;
  while (i < q && images[i] < images[i - 1]) ++i;
  return i == q;
}

// t in [lo, hi] where the critical point of q_t has period q, by bisection on f^q(0).
double superstable_by_hand(int q, double lo, double hi) {
  auto g = [q](double t) {
    double x = 0.0;
    for (int k = 0; k < q; ++k) x = -2.0 * t * x * x + 2.0 * t - 1.0;
    return x;
  };
  return roots::solve_bracketed(g, lo, hi);
}

}  // namespace

TEST_SUITE("unimodal") {

TEST_CASE("eval_pair examples") {
  CHECK(eval_pair(identity_pair(1.0), 0.0) == doctest::Approx(1.0));
  for (double t : {0.2, 0.9, 1.0}) {
    CHECK(eval_pair(identity_pair(t), 1.0) == doctest::Approx(-1.0));
    CHECK(eval_pair(identity_pair(t), -1.0) == doctest::Approx(-1.0));
  }
  CHECK(std::abs(eval_pair(identity_pair(0.9), 4.0 / 9.0) - 4.0 / 9.0) < 1e-15);
}

TEST_CASE("eval_pair is even") {
  const Pair pair(renorm::test::half_cubic(), QtParams(0.87, 2.5));
  for (int j = 0; j < 256; ++j) {
    const double x = std::cos(std::numbers::pi * (j + 0.5) / 256);
    CHECK(std::abs(eval_pair(pair, x) - eval_pair(pair, -x)) < 1e-13);
  }
}

TEST_CASE("find_cycle examples at period 2") {
  const auto cycle = find_cycle(identity_pair(0.9), 2);
  REQUIRE(cycle);
  CHECK(std::abs(cycle->p) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(cycle->at(2).lo == doctest::Approx(-4.0 / 9.0).epsilon(1e-12));
  CHECK(cycle->at(2).hi == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(cycle->at(1).lo == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(cycle->at(1).hi == doctest::Approx(2.0 * std::sqrt(14.0) / 9.0).epsilon(1e-12));
  CHECK(cycle_violations(identity_pair(0.9).as_map(), *cycle).empty());

  CHECK_FALSE(find_cycle(identity_pair(0.5), 2));
  CHECK_FALSE(find_cycle(identity_pair(1.0), 2));
  CHECK_THROWS_AS(find_cycle(identity_pair(0.9), 1), DomainError);
}

TEST_CASE("cycles found satisfy their invariants and have unimodal combinatorics") {
  for (double t : {0.8, 0.85, 0.88, 0.9, 0.95}) {
    const auto pair = identity_pair(t);
    for (int q : {2, 4}) {
      const auto cycle = find_cycle(pair, q);
      if (!cycle) continue;
      CHECK(cycle_violations(pair.as_map(), *cycle).empty());
      CHECK(is_unimodal_permutation(combinatorics_of(*cycle).images));
    }
  }
}

TEST_CASE("combinatorics_of examples") {
  const auto two = find_cycle(identity_pair(0.9), 2);
  REQUIRE(two);
  CHECK(combinatorics_of(*two) == UnimodalPermutation::doubling());

  const double t4 = superstable_by_hand(4, 0.85, 0.9);
  const double t8 = superstable_by_hand(8, t4 + 1e-6, 0.9);
  const auto four = find_cycle(identity_pair(0.5 * (t4 + t8)), 4);
  REQUIRE(four);
  CHECK(combinatorics_of(*four) == permutation_power(UnimodalPermutation::doubling(), 2));

  const double t3 = superstable_by_hand(3, 0.95, 0.965);
  const auto three = find_cycle(identity_pair(t3 + 1e-4), 3);
  REQUIRE(three);
  const auto all3 = enumerate_unimodal_permutations(3);
  REQUIRE(all3.size() == 1);
  CHECK(combinatorics_of(*three) == all3.front());
}

TEST_CASE("is_unimodal_permutation examples") {
  CHECK(is_unimodal_permutation(std::vector<int>{2, 1}));
  CHECK_FALSE(is_unimodal_permutation(std::vector<int>{1, 2, 3}));
}

TEST_CASE("is_unimodal_permutation agrees with a brute-force reading") {
  for (int q = 2; q <= 6; ++q) {
    std::vector<int> p(q);
    std::iota(p.begin(), p.end(), 1);
    int count = 0;
    do {
      const bool expected = unimodal_by_hand(p);
      CHECK(is_unimodal_permutation(p) == expected);
      count += expected;
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(static_cast<int>(enumerate_unimodal_permutations(q).size()) == count);
  }
  const auto four = enumerate_unimodal_permutations(4);
  CHECK(std::count(four.begin(), four.end(), permutation_power(UnimodalPermutation::doubling(), 2)) == 1);
}

TEST_CASE("maximal_factorization examples") {
  const auto s2 = UnimodalPermutation::doubling();
  CHECK(maximal_factorization(s2) == std::vector<UnimodalPermutation>{s2});

  const auto s4 = permutation_power(s2, 2);
  CHECK(maximal_factorization(s4) == std::vector<UnimodalPermutation>{s2, s2});
  CHECK(compose_permutations(s2, s2) == s4);

  const auto s3 = enumerate_unimodal_permutations(3).front();
  CHECK(maximal_factorization(s3) == std::vector<UnimodalPermutation>{s3});
}

TEST_CASE("factorizations recompose") {
  for (int q = 2; q <= 8; ++q) {
    for (const auto& sigma : enumerate_unimodal_permutations(q)) {
      const auto factors = maximal_factorization(sigma);
      auto product = factors.front();
      int period = factors.front().period();
      for (std::size_t i = 1; i < factors.size(); ++i) {
        product = compose_permutations(product, factors[i]);
        period *= factors[i].period();
      }
      CHECK(product == sigma);
      CHECK(period == q);
      for (const auto& f : factors) CHECK(maximal_factorization(f).size() == 1);
    }
  }
}

TEST_CASE("level_sets examples") {
  const LevelSets empty = level_sets(std::span<const Cycle>{});
  REQUIRE(empty.depth() == 0);
  CHECK(empty.levels[0] == std::vector<std::vector<int>>{{1}});

  const double t8 = superstable_by_hand(8, 0.88, 0.89);
  const auto f = identity_pair(t8).as_map();
  const auto cycles = find_nested_cycles(f, UnimodalPermutation::doubling(), 2);
  REQUIRE(cycles.size() == 2);
  const auto ls = level_sets(cycles);

  // n = 1: I_2 holds 0, I_1 does not.
  CHECK(ls.levels[1] == std::vector<std::vector<int>>{{2}, {1}});

  // n = 2 by a containment table.
  const auto& c1 = cycles[0];
  const auto& c2 = cycles[1];
  std::vector<int> sizes(3, 0);
  for (int i = 1; i <= 4; ++i) {
    const auto& iv = c2.at(i);
    int parent = 0;
    for (int j = 1; j <= 2; ++j) {
      if (c1.at(j).contains(iv.lo, 1e-12) && c1.at(j).contains(iv.hi, 1e-12)) parent = j;
    }
    REQUIRE(parent != 0);
    const int expected = iv.contains(0.0) ? 0 : ls.level_of(1, parent) + 1;
    CHECK(ls.level_of(2, i) == expected);
    ++sizes[expected];
  }
  CHECK(sizes == std::vector<int>{1, 1, 2});
}

TEST_CASE("level sets partition each cycle") {
  const auto& rec = renorm::test::alpha2_fixed_point();
  const auto cycles = find_nested_cycles(rec.pair().as_map(), UnimodalPermutation::doubling(), 6);
  REQUIRE(cycles.size() == 6);
  const auto ls = level_sets(cycles);
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> seen;
    for (const auto& lk : ls.levels[n]) seen.insert(seen.end(), lk.begin(), lk.end());
    std::sort(seen.begin(), seen.end());
    std::vector<int> all(1 << n);
    std::iota(all.begin(), all.end(), 1);
    CHECK(seen == all);
    CHECK(ls.levels[n][0].size() == 1);
  }
  std::vector<Cycle> swapped{cycles[1], cycles[0]};
  CHECK_THROWS_AS(level_sets(swapped), DomainError);
}

TEST_CASE("RenormClassParams are validated") {
  CHECK_NOTHROW(RenormClassParams(5.0, 0.1, 3));
  CHECK_THROWS_AS(RenormClassParams(0.0, 0.1), DomainError);
  CHECK_THROWS_AS(RenormClassParams(1.0, -0.1), DomainError);
  CHECK(c3_norm(PolyDiffeo::identity()) == doctest::Approx(1.0));
}

}  // TEST_SUITE
