#pragma once

// Unimodal-map semantics: pairs (phi, t) read as f = phi o q_t, cycles that
// certify renormalizability, their combinatorics and level sets.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renorm/func_core.hpp"

namespace renorm {

// Even unimodal self-map of [-1,1] with its maximum at 0 and f(+-1) = -1.
struct UnimodalMap {
  RealFn value;
  RealFn derivative;

  double operator()(double x) const { return value(x); }
  double iterate(double x, int n) const;
  // (f^n)'(x) by the chain rule.
  double iterate_derivative(double x, int n) const;
};

struct Pair {
  PolyDiffeo phi;
  QtParams params;

  // Validates that phi o q_t maps [-1,1] into itself on the check grid.
  Pair(PolyDiffeo phi_, QtParams params_);
  static Pair unchecked(PolyDiffeo phi_, QtParams params_);

  double t() const { return params.t; }
  double alpha() const { return params.alpha; }
  double operator()(double x) const { return phi(qt_eval(params, x)); }
  double derivative(double x) const { return phi.derivative(qt_eval(params, x)) * qt_derivative(params, x); }
  UnimodalMap as_map() const;

 private:
  struct NoCheck {};
  Pair(PolyDiffeo phi_, QtParams params_, NoCheck);
};

double eval_pair(const Pair& pair, double x);

// Combinatorics sigma of a cycle, stored as the induced map on positions
// 1..q ordered left to right: images[r - 1] is the position of the interval
// that follows the interval at position r.
struct UnimodalPermutation {
  std::vector<int> images;

  UnimodalPermutation() = default;
  // Throws DomainError unless the permutation passes is_unimodal_permutation.
  explicit UnimodalPermutation(std::vector<int> images_);

  int period() const { return static_cast<int>(images.size()); }
  // Position of the interval containing the critical point (the preimage of q).
  int critical_position() const;
  // Positions r_k of the k-th orbit element, k = 0..q-1, r_0 = critical position.
  std::vector<int> orbit_positions() const;
  std::string to_string() const;

  static UnimodalPermutation doubling() { return UnimodalPermutation({2, 1}); }

  friend bool operator==(const UnimodalPermutation&, const UnimodalPermutation&) = default;
};

// True iff `images` is a single q-cycle whose piecewise-linear graph rises then falls.
bool is_unimodal_permutation(std::span<const int> images);

// All unimodal permutations of period q (brute force; q <= 9).
std::vector<UnimodalPermutation> enumerate_unimodal_permutations(int q);

// Combinatorics of a twice-renormalizable map whose first renormalization has
// combinatorics `first` and whose renormalized map has combinatorics `second`.
UnimodalPermutation compose_permutations(const UnimodalPermutation& first, const UnimodalPermutation& second);

// sigma^{*n}: `sigma` composed with itself n times.
UnimodalPermutation permutation_power(const UnimodalPermutation& sigma, int n);

// Prime factors in the order the renormalizations are applied (outermost
// first). Composing them left to right with compose_permutations gives sigma.
std::vector<UnimodalPermutation> maximal_factorization(const UnimodalPermutation& sigma);

// Order type of a periodic orbit x_0, ..., x_{q-1} (x_0 the critical point).
UnimodalPermutation permutation_of_orbit(std::span<const double> orbit);

struct Cycle {
  // intervals[i - 1] is I_i; I_q = [-|p|, |p|]. Each interval's orientation is o(I_i).
  std::vector<OrientedInterval> intervals;
  double p = 0.0;  // signed periodic point, f^q(p) = p
  UnimodalPermutation combinatorics;

  int period() const { return static_cast<int>(intervals.size()); }
  const OrientedInterval& at(int i) const { return intervals.at(i - 1); }
  const OrientedInterval& central() const { return intervals.back(); }
};

struct CycleSearch {
  double scan_hi = 1.0;     // periodic points are searched in (0, scan_hi)
  int scan_samples = 1000;  // bracket scan resolution scan_hi / scan_samples
  std::optional<UnimodalPermutation> combinatorics;
};

inline constexpr double kRepellingMargin = 1e-8;
inline constexpr double kPeriodicTol = 1e-10;
inline constexpr double kOverlapTol = 1e-12;

// Cycle of period q (q >= 2) or nullopt. Among admissible cycles the one with
// the largest central interval is returned.
std::optional<Cycle> find_cycle(const UnimodalMap& f, int q, const CycleSearch& search = {});
std::optional<Cycle> find_cycle(const Pair& pair, int q, const CycleSearch& search = {});

// Lists the violated cycle invariants (empty when all hold).
std::vector<std::string> cycle_violations(const UnimodalMap& f, const Cycle& cycle);

UnimodalPermutation combinatorics_of(const Cycle& cycle);

// Cycles of f for sigma, sigma*sigma, ... (depth of them), each searched
// inside the central interval of the previous one. Stops early (shorter
// result) when a level is not found.
std::vector<Cycle> find_nested_cycles(const UnimodalMap& f, const UnimodalPermutation& sigma, int depth);

// levels[n][k] lists the 1-based cycle indices in L_k^n; levels[0] = {{1}}
// stands for [-1,1].
struct LevelSets {
  std::vector<std::vector<std::vector<int>>> levels;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  // Level k of the interval with 1-based index i in the n-th cycle.
  int level_of(int n, int i) const;
};

// Throws DomainError when a cycle is not nested in the previous one.
LevelSets level_sets(std::span<const Cycle> cycles);

// Constants of the renormalization class H_alpha(C, eta, M).
struct RenormClassParams {
  double C = 10.0;
  double eta = 0.1;
  std::optional<int> M;  // nullopt = unbounded

  RenormClassParams() = default;
  RenormClassParams(double C_, double eta_, std::optional<int> M_ = std::nullopt);
};

// max over the grid of |phi|, |phi'|, |phi''|, |phi'''|.
double c3_norm(const PolyDiffeo& phi);

}  // namespace renorm
