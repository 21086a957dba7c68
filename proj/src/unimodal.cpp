#include "renorm/unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "renorm/errors.hpp"
#include "renorm/roots.hpp"

namespace renorm {

double UnimodalMap::iterate(double x, int n) const {
  for (int i = 0; i < n; ++i) x = value(x);
  return x;
}

double UnimodalMap::iterate_derivative(double x, int n) const {
  double d = 1.0;
  for (int i = 0; i < n; ++i) {
    d *= derivative(x);
    x = value(x);
  }
  return d;
}

// ------------------------------------------------------------------ Pair

Pair::Pair(PolyDiffeo phi_, QtParams params_, NoCheck) : phi(std::move(phi_)), params(params_) {}

Pair::Pair(PolyDiffeo phi_, QtParams params_) : Pair(std::move(phi_), params_, NoCheck{}) {
  if (auto why = phi.invariant_violation()) throw DomainError("pair: " + *why);
  for (double x : cheb::check_grid()) {
    const double y = (*this)(x);
    if (!(y >= -1.0 - kEndpointTol && y <= 1.0 + kEndpointTol)) {
      throw DomainError("pair: f leaves [-1,1] at x = " + std::to_string(x));
    }
  }
}

Pair Pair::unchecked(PolyDiffeo phi_, QtParams params_) { return Pair(std::move(phi_), params_, NoCheck{}); }

UnimodalMap Pair::as_map() const {
  return {[phi = phi, p = params](double x) { return phi(qt_eval(p, x)); },
          [phi = phi, p = params](double x) { return phi.derivative(qt_eval(p, x)) * qt_derivative(p, x); }};
}

double eval_pair(const Pair& pair, double x) { return pair(x); }

// ---------------------------------------------------------- permutations

bool is_unimodal_permutation(std::span<const int> images) {
  const int q = static_cast<int>(images.size());
  if (q < 1) return false;
  std::vector<bool> seen(q + 1, false);
  for (int v : images) {
    if (v < 1 || v > q || seen[v]) return false;
    seen[v] = true;
  }
  // single q-cycle
  int pos = 1;
  for (int k = 1; k < q; ++k) {
    pos = images[pos - 1];
    if (pos == 1) return false;
  }
  if (images[pos - 1] != 1) return false;
  if (q == 1) return true;
  // rise then fall
  int i = 0;
  while (i + 1 < q && images[i + 1] > images[i]) ++i;
  while (i + 1 < q && images[i + 1] < images[i]) ++i;
  return i == q - 1;
}

UnimodalPermutation::UnimodalPermutation(std::vector<int> images_) : images(std::move(images_)) {
  if (!is_unimodal_permutation(images)) throw DomainError("not a unimodal permutation: " + to_string());
}

int UnimodalPermutation::critical_position() const {
  const int q = period();
  for (int r = 1; r <= q; ++r) {
    if (images[r - 1] == q) return r;
  }
  return 1;
}

std::vector<int> UnimodalPermutation::orbit_positions() const {
  std::vector<int> r(period());
  if (r.empty()) return r;
  r[0] = critical_position();
  for (int k = 1; k < period(); ++k) r[k] = images[r[k - 1] - 1];
  return r;
}

std::string UnimodalPermutation::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < images.size(); ++i) os << (i ? "," : "") << images[i];
  os << ']';
  return os.str();
}

std::vector<UnimodalPermutation> enumerate_unimodal_permutations(int q) {
  if (q < 1 || q > 9) throw DomainError("enumeration supports periods 1..9");
  std::vector<int> v(q);
  std::iota(v.begin(), v.end(), 1);
  std::vector<UnimodalPermutation> out;
  do {
    if (is_unimodal_permutation(v)) out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

namespace {

// Rebuilds the position map from orbit ranks rank_of[k] of the k-th point.
std::vector<int> images_from_orbit_ranks(const std::vector<int>& rank_of) {
  const int q = static_cast<int>(rank_of.size());
  std::vector<int> images(q);
  for (int k = 0; k < q; ++k) images[rank_of[k] - 1] = rank_of[(k + 1) % q];
  return images;
}

}  // namespace

UnimodalPermutation compose_permutations(const UnimodalPermutation& first, const UnimodalPermutation& second) {
  const int a = first.period();
  const int b = second.period();
  const auto rank_a = first.orbit_positions();   // rank_a[i]: position of I_i (I_0 = I_a)
  const auto rank_b = second.orbit_positions();  // rank_b[m]: position of w_m
  // s[i]: orientation of f^{i-1} on I_1, for i = 1..a.
  std::vector<int> s(a + 1, 1);
  for (int i = 1; i < a; ++i) s[i + 1] = s[i] * (rank_a[i] < rank_a[0] ? 1 : -1);

  struct Point {
    int block;
    int key;
    int k;
  };
  std::vector<Point> pts;
  pts.reserve(a * b);
  for (int m = 0; m < b; ++m) {
    for (int i = 0; i < a; ++i) {
      const int key = i == 0 ? s[a] * rank_b[m] : s[i] * rank_b[(m + 1) % b];
      pts.push_back({rank_a[i], key, m * a + i});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) {
    return x.block != y.block ? x.block < y.block : x.key < y.key;
  });
  std::vector<int> rank_of(a * b);
  for (int r = 0; r < a * b; ++r) rank_of[pts[r].k] = r + 1;
  return UnimodalPermutation(images_from_orbit_ranks(rank_of));
}

UnimodalPermutation permutation_power(const UnimodalPermutation& sigma, int n) {
  if (n < 1) throw DomainError("permutation_power needs n >= 1");
  UnimodalPermutation out = sigma;
  for (int i = 1; i < n; ++i) out = compose_permutations(out, sigma);
  return out;
}

namespace {

// Splits sigma as first * second with first of period a, when possible.
std::optional<std::pair<UnimodalPermutation, UnimodalPermutation>> split(const UnimodalPermutation& sigma, int a) {
  const int q = sigma.period();
  const int b = q / a;
  const auto r = sigma.orbit_positions();
  // Each residue class mod a must occupy a contiguous block of positions.
  std::vector<int> lo(a, q + 1), hi(a, 0);
  for (int k = 0; k < q; ++k) {
    lo[k % a] = std::min(lo[k % a], r[k]);
    hi[k % a] = std::max(hi[k % a], r[k]);
  }
  for (int i = 0; i < a; ++i) {
    if (hi[i] - lo[i] + 1 != b) return std::nullopt;
  }
  std::vector<int> order(a);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return lo[x] < lo[y]; });
  std::vector<int> rank_a(a);
  for (int pos = 0; pos < a; ++pos) rank_a[order[pos]] = pos + 1;
  auto images_a = images_from_orbit_ranks(rank_a);
  if (!is_unimodal_permutation(images_a)) return std::nullopt;

  int s_a = 1;
  for (int i = 1; i < a; ++i) s_a *= rank_a[i] < rank_a[0] ? 1 : -1;
  std::vector<int> rank_b(b);
  for (int m = 0; m < b; ++m) {
    const int rel = r[m * a] - lo[0] + 1;
    rank_b[m] = s_a > 0 ? rel : b + 1 - rel;
  }
  auto images_b = images_from_orbit_ranks(rank_b);
  if (!is_unimodal_permutation(images_b)) return std::nullopt;
  UnimodalPermutation first(std::move(images_a));
  UnimodalPermutation second(std::move(images_b));
  if (!(compose_permutations(first, second) == sigma)) return std::nullopt;
  return std::make_pair(std::move(first), std::move(second));
}

}  // namespace

std::vector<UnimodalPermutation> maximal_factorization(const UnimodalPermutation& sigma) {
  const int q = sigma.period();
  for (int a = 2; a < q; ++a) {
    if (q % a != 0) continue;
    if (auto parts = split(sigma, a)) {
      std::vector<UnimodalPermutation> out{parts->first};
      auto rest = maximal_factorization(parts->second);
      out.insert(out.end(), rest.begin(), rest.end());
      return out;
    }
  }
  return {sigma};
}

UnimodalPermutation permutation_of_orbit(std::span<const double> orbit) {
  const int q = static_cast<int>(orbit.size());
  std::vector<int> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return orbit[x] < orbit[y]; });
  std::vector<int> rank_of(q);
  for (int r = 0; r < q; ++r) rank_of[idx[r]] = r + 1;
  return UnimodalPermutation(images_from_orbit_ranks(rank_of));
}

// ------------------------------------------------------------------ cycles

UnimodalPermutation combinatorics_of(const Cycle& cycle) {
  const int q = cycle.period();
  std::vector<int> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return cycle.intervals[x].lo < cycle.intervals[y].lo; });
  std::vector<int> rank(q);  // rank[i] for interval I_{i+1}
  for (int r = 0; r < q; ++r) rank[idx[r]] = r + 1;
  std::vector<int> images(q);
  for (int i = 0; i < q; ++i) images[rank[i] - 1] = rank[(i + 1) % q];
  return UnimodalPermutation(std::move(images));
}

namespace {

// Preimage of y on the branch x = sign * u, u in [0,1]; f is decreasing in u.
std::optional<double> branch_preimage(const UnimodalMap& f, int sign, double y, double f0) {
  if (y > f0 || y < -1.0) return std::nullopt;
  if (y == f0) return 0.0;
  const double u = roots::solve_bracketed([&](double v) { return f(sign * v) - y; }, 0.0, 1.0);
  return sign * u;
}

std::optional<Cycle> build_cycle(const UnimodalMap& f, int q, double p) {
  const double ap = std::abs(p);
  if (!(ap > 0.0 && ap < 1.0)) return std::nullopt;
  std::vector<double> orbit(q + 1);
  orbit[0] = p;
  for (int i = 1; i <= q; ++i) orbit[i] = f(orbit[i - 1]);
  const double f0 = f(0.0);

  std::vector<OrientedInterval> iv(q);
  iv[q - 1] = OrientedInterval(-ap, ap, p < 0 ? 1 : -1);
  for (int i = q - 1; i >= 1; --i) {
    const double xi = orbit[i];
    if (xi == 0.0) return std::nullopt;
    const int sign = xi > 0 ? 1 : -1;
    const auto& next = iv[i];  // I_{i+1}
    auto a = branch_preimage(f, sign, next.start(), f0);
    auto b = branch_preimage(f, sign, next.finish(), f0);
    if (!a || !b || *a == *b) return std::nullopt;
    // The start of I_i is the orbit point x_i; use it exactly.
    const double start = std::abs(*a - xi) <= std::abs(*b - xi) ? xi : *a;
    const double other = start == xi ? *b : *a;
    if (start == other) return std::nullopt;
    iv[i - 1] = OrientedInterval::from_start(start, other);
  }
  Cycle c;
  c.intervals = std::move(iv);
  c.p = p;
  return c;
}

}  // namespace

std::vector<std::string> cycle_violations(const UnimodalMap& f, const Cycle& cycle) {
  std::vector<std::string> out;
  const int q = cycle.period();
  const double ap = std::abs(cycle.p);
  const auto& central = cycle.central();
  if (std::abs(central.lo + ap) > 0 || std::abs(central.hi - ap) > 0) out.emplace_back("I_q != [-|p|,|p|]");
  if (std::abs(f.iterate(cycle.p, q) - cycle.p) > kPeriodicTol) out.emplace_back("p is not periodic");
  if (!(std::abs(f.iterate_derivative(cycle.p, q)) > 1.0 + kRepellingMargin)) out.emplace_back("p is not repelling");
  for (int i = 1; i < q; ++i) {
    const auto& src = cycle.at(i);
    const auto& dst = cycle.at(i + 1);
    if (src.contains_interior(0.0)) {
      out.push_back("f is not monotone on I_" + std::to_string(i));
      continue;
    }
    // images of the grid stay inside the next interval
    for (double x : cheb::first_kind_nodes(32)) {
      const double y = f(src.center() + 0.5 * src.length() * x);
      if (!dst.contains(y, 1e-12)) {
        out.push_back("f(I_" + std::to_string(i) + ") is not inside I_" + std::to_string(i + 1));
        break;
      }
    }
  }
  const auto& first = cycle.at(1);
  if (!first.contains(f(0.0), kOverlapTol)) out.emplace_back("f(I_q) is not inside I_1");
  const double fp = f(cycle.p);
  if (std::min(std::abs(fp - first.lo), std::abs(fp - first.hi)) > kPeriodicTol) out.emplace_back("f(p) not on the boundary of I_1");
  std::vector<OrientedInterval> sorted(cycle.intervals);
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    if (sorted[k].hi > sorted[k + 1].lo + kOverlapTol) {
      out.emplace_back("interiors overlap");
      break;
    }
  }
  for (const auto& iv : cycle.intervals) {
    if (iv.lo < -1.0 - kOverlapTol || iv.hi > 1.0 + kOverlapTol) {
      out.emplace_back("interval outside [-1,1]");
      break;
    }
  }
  return out;
}

std::optional<Cycle> find_cycle(const UnimodalMap& f, int q, const CycleSearch& search) {
  if (q < 2) throw DomainError("find_cycle needs q >= 2");
  std::vector<double> candidates;
  for (int sign : {1, -1}) {
    // sign = +1: f^q(x) = x; sign = -1: f^q(x) = -x, i.e. p = -x is periodic.
    auto h = [&](double x) { return f.iterate(x, q) - sign * x; };
    for (double x : roots::scan_roots(h, 0.0, search.scan_hi, search.scan_samples)) {
      if (x <= 0.0 || x >= search.scan_hi * (1.0 - 1e-12)) continue;
      candidates.push_back(sign * x);
    }
  }
  std::optional<Cycle> best;
  for (double p : candidates) {
    if (!(std::abs(f.iterate_derivative(p, q)) > 1.0 + kRepellingMargin)) continue;
    auto cycle = build_cycle(f, q, p);
    if (!cycle) continue;
    if (!cycle_violations(f, *cycle).empty()) continue;
    cycle->combinatorics = combinatorics_of(*cycle);
    if (search.combinatorics && !(cycle->combinatorics == *search.combinatorics)) continue;
    if (!best || std::abs(cycle->p) > std::abs(best->p)) best = std::move(cycle);
  }
  return best;
}

std::optional<Cycle> find_cycle(const Pair& pair, int q, const CycleSearch& search) {
  return find_cycle(pair.as_map(), q, search);
}

std::vector<Cycle> find_nested_cycles(const UnimodalMap& f, const UnimodalPermutation& sigma, int depth) {
  std::vector<Cycle> out;
  UnimodalPermutation combinatorics = sigma;
  double hi = 1.0;
  for (int n = 1; n <= depth; ++n) {
    CycleSearch search;
    search.scan_hi = hi;
    search.combinatorics = combinatorics;
    auto c = find_cycle(f, combinatorics.period(), search);
    if (!c) break;
    hi = std::abs(c->p);
    out.push_back(std::move(*c));
    if (n < depth) combinatorics = compose_permutations(combinatorics, sigma);
  }
  return out;
}

// ---------------------------------------------------------------- levels

int LevelSets::level_of(int n, int i) const {
  const auto& lv = levels.at(n);
  for (std::size_t k = 0; k < lv.size(); ++k) {
    if (std::find(lv[k].begin(), lv[k].end(), i) != lv[k].end()) return static_cast<int>(k);
  }
  throw DomainError("interval index not present in level sets");
}

LevelSets level_sets(std::span<const Cycle> cycles) {
  LevelSets out;
  out.levels.push_back({{1}});
  std::vector<OrientedInterval> parents{OrientedInterval(-1.0, 1.0)};
  std::vector<int> parent_level{0};
  for (std::size_t n = 0; n < cycles.size(); ++n) {
    const auto& cyc = cycles[n];
    const int q = cyc.period();
    std::vector<std::vector<int>> lv(n + 2);
    std::vector<int> own_level(q);
    for (int i = 1; i <= q; ++i) {
      const auto& iv = cyc.at(i);
      int parent = -1;
      for (std::size_t j = 0; j < parents.size(); ++j) {
        if (iv.lo >= parents[j].lo - kOverlapTol && iv.hi <= parents[j].hi + kOverlapTol) {
          parent = static_cast<int>(j);
          break;
        }
      }
      if (parent < 0) {
        throw DomainError("nesting violation: I_" + std::to_string(i) + " of cycle " + std::to_string(n + 1) +
                          " lies in no interval of the previous cycle");
      }
      const int k = iv.contains(0.0) ? 0 : parent_level[parent] + 1;
      own_level[i - 1] = k;
      lv[k].push_back(i);
    }
    while (lv.size() > 1 && lv.back().empty()) lv.pop_back();
    out.levels.push_back(std::move(lv));
    parents = cyc.intervals;
    parent_level = std::move(own_level);
  }
  return out;
}

// --------------------------------------------------------------- class

RenormClassParams::RenormClassParams(double C_, double eta_, std::optional<int> M_) : C(C_), eta(eta_), M(M_) {
  if (!(C > 0.0) || !(eta > 0.0)) throw DomainError("class constants C and eta must be positive");
}

double c3_norm(const PolyDiffeo& phi) {
  const ChebSeries d1 = phi.series().derivative();
  const ChebSeries d2 = d1.derivative();
  const ChebSeries d3 = d2.derivative();
  double m = 0.0;
  for (double x : cheb::check_grid()) {
    m = std::max({m, std::abs(phi(x)), std::abs(d1(x)), std::abs(d2(x)), std::abs(d3(x))});
  }
  return m;
}

}  // namespace renorm
