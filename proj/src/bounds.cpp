#include "renorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

#include "renorm/errors.hpp"

namespace renorm {

NestedOrbit nested_orbit(const Pair& pair, const UnimodalPermutation& sigma, int depth) {
  auto cycles = find_nested_cycles(pair.as_map(), sigma, depth);
  if (static_cast<int>(cycles.size()) < depth) {
    throw NumericError("only " + std::to_string(cycles.size()) + " of " + std::to_string(depth) +
                       " nested cycles found");
  }
  auto levels = level_sets(cycles);
  return {pair, std::move(cycles), std::move(levels)};
}

// --- real bounds ----------------------------------------------------------

const LevelRatios& RealBoundsReport::level(int n) const {
  for (const auto& l : levels) {
    if (l.n == n) return l;
  }
  throw DomainError("no ratios recorded for level " + std::to_string(n));
}

bool RealBoundsReport::within(double lo, double hi, int first, int last) const {
  for (int n = first; n <= last; ++n) {
    const auto& l = level(n);
    for (double r : l.child) {
      if (!(r > lo && r < hi)) return false;
    }
    for (double r : l.gap) {
      if (!(r > lo && r < hi)) return false;
    }
  }
  return true;
}

RealBoundsReport real_bounds_report(std::span<const Cycle> cycles) {
  RealBoundsReport report;
  std::vector<OrientedInterval> parents{OrientedInterval(-1.0, 1.0)};
  OrientedInterval parent_central = parents.front();
  for (std::size_t n = 0; n < cycles.size(); ++n) {
    LevelRatios lr;
    lr.n = static_cast<int>(n);
    std::vector<std::vector<OrientedInterval>> children(parents.size());
    for (int i = 1; i <= cycles[n].period(); ++i) {
      const auto& iv = cycles[n].at(i);
      auto it = std::find_if(parents.begin(), parents.end(), [&](const OrientedInterval& p) {
        return iv.lo >= p.lo - kOverlapTol && iv.hi <= p.hi + kOverlapTol;
      });
      if (it == parents.end()) {
        throw DomainError("nesting violation: I_" + std::to_string(i) + " of cycle " + std::to_string(n + 1));
      }
      children[it - parents.begin()].push_back(iv);
    }
    for (std::size_t j = 0; j < parents.size(); ++j) {
      const auto& parent = parents[j];
      auto& kids = children[j];
      std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
      const double len = parent.length();
      double left = parent.lo;
      for (const auto& kid : kids) {
        lr.child.push_back(kid.length() / len);
        if (kid.lo - left > kGapFloor * len) lr.gap.push_back((kid.lo - left) / len);
        left = std::max(left, kid.hi);
      }
      if (parent.hi - left > kGapFloor * len) lr.gap.push_back((parent.hi - left) / len);
    }
    const auto& central = cycles[n].central();
    lr.central_ratio = central.length() / parent_central.length();
    for (double r : lr.child) {
      report.min_ratio = std::min(report.min_ratio, r);
      report.max_ratio = std::max(report.max_ratio, r);
    }
    for (double r : lr.gap) {
      report.min_ratio = std::min(report.min_ratio, r);
      report.max_ratio = std::max(report.max_ratio, r);
    }
    report.levels.push_back(std::move(lr));
    parents = cycles[n].intervals;
    parent_central = central;
  }
  if (!report.levels.empty()) report.b = std::min(report.min_ratio, 1.0 - report.max_ratio);
  return report;
}

// --- decomposition decay ----------------------------------------------------

namespace {

double real_distance(const ComplexFn& f) {
  double d = std::max(std::abs(f(-1.0) + 1.0), std::abs(f(1.0) - 1.0));
  for (double x : cheb::check_grid()) d = std::max(d, std::abs(f(x) - x));
  return d;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrientedInterval oriented_image(double a, double b, int orientation) {
  return OrientedInterval(std::min(a, b), std::max(a, b), orientation);
}

// A_image o g o A_domain^{-1} with its derivative.
ComplexPiece zoom_piece(ComplexFn g, ComplexFn dg, const OrientedInterval& domain, const OrientedInterval& image) {
  const AffineMap from_unit = affine_to(domain).inverse();
  const AffineMap to_unit = affine_to(image);
  const double chain = to_unit.scale * from_unit.scale;
  return {[=](Complex z) { return to_unit(g(from_unit(z))); }, [=](Complex z) { return chain * dg(from_unit(z)); }};
}

}  // namespace

std::vector<ComplexPiece> decomposition_pieces(const Pair& pair, const Cycle& cycle) {
  const PolyDiffeo phi = pair.phi;
  const QtParams qp = pair.params;
  const ComplexFn phi_f = [phi](Complex z) { return phi(z); };
  const ComplexFn phi_df = [phi](Complex z) { return phi.derivative(z); };
  std::vector<ComplexPiece> out;
  out.reserve(2 * cycle.period() - 1);

  const auto& first = cycle.at(1);
  const OrientedInterval domain0(phi.inverse(first.lo), phi.inverse(first.hi), first.orientation);
  out.push_back(zoom_piece(phi_f, phi_df, domain0,
                           oriented_image(phi(domain0.lo), phi(domain0.hi), first.orientation)));
  for (int i = 1; i < cycle.period(); ++i) {
    const auto& iv = cycle.at(i);
    const int next = cycle.at(i + 1).orientation;
    const int branch = iv.center() >= 0.0 ? 1 : -1;
    const ComplexFn q_f = [qp, branch](Complex z) { return qt_complex_eval(qp, z, branch); };
    const ComplexFn q_df = [qp, branch](Complex z) {
      return qp.alpha * (qt_complex_eval(qp, z, branch) - (2.0 * qp.t - 1.0)) / z;
    };
    const auto q_image = oriented_image(qt_eval(qp, iv.lo), qt_eval(qp, iv.hi), next);
    out.push_back(zoom_piece(q_f, q_df, iv, q_image));
    out.push_back(zoom_piece(phi_f, phi_df, q_image, oriented_image(phi(q_image.lo), phi(q_image.hi), next)));
  }
  return out;
}

ChebSeries chop_tail(const ChebSeries& f, double rel_tol) {
  const auto c = f.coeffs();
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  std::size_t keep = 1;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (std::abs(c[k]) > rel_tol * cmax) keep = k + 1;
  }
  return ChebSeries(std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(keep)));
}

double stadium_distance_to_identity(const ComplexFn& f, double radius, const StadiumGrid& grid) {
  double d = real_distance(f);
  const Stadium s(OrientedInterval(-1.0, 1.0), radius);
  for (int l = 1; l <= grid.layers; ++l) {
    for (const Complex z : s.boundary(grid.boundary_points, radius * l / grid.layers)) {
      d = std::max(d, std::abs(f(z) - z));
    }
  }
  return d;
}

const DecayLevel& DecayReport::level(int n) const {
  for (const auto& l : levels) {
    if (l.n == n) return l;
  }
  throw DomainError("no decay sums recorded for level " + std::to_string(n));
}

bool DecayReport::q_strictly_decreasing(int n) const {
  const auto& sums = level(n).q_stadium;
  for (std::size_t k = 2; k < sums.size(); ++k) {
    if (!(sums[k] < sums[k - 1])) return false;
  }
  return sums.size() >= 3;
}

DecayReport decomposition_decay(const NestedOrbit& orbit, int first, int last, double radius,
                                const StadiumGrid& grid) {
  if (last - first + 1 < 4) throw DomainError("decomposition decay needs at least four levels");
  if (first < 1 || last > orbit.depth()) {
    throw DomainError("levels " + std::to_string(first) + ".." + std::to_string(last) + " exceed orbit depth " +
                      std::to_string(orbit.depth()));
  }
  DecayReport report;
  report.radius = radius;
  std::vector<double> xs, ys;
  for (int n = first; n <= last; ++n) {
    const auto pieces = decomposition_pieces(orbit.pair, orbit.cycles[n - 1]);
    DecayLevel dl;
    dl.n = n;
    const int q = orbit.cycles[n - 1].period();
    for (int j = 0; j < q; ++j) {
      const auto& f = pieces[j == 0 ? 0 : 2 * j].f;
      dl.phi_real += real_distance(f);
      dl.phi_stadium += stadium_distance_to_identity(f, radius, grid);
    }
    const auto& lv = orbit.levels.levels.at(n);
    dl.q_real.assign(lv.size(), 0.0);
    dl.q_stadium.assign(lv.size(), 0.0);
    for (int i = 1; i < q; ++i) {
      const int k = orbit.levels.level_of(n, i);
      const auto& f = pieces[2 * i - 1].f;
      dl.q_real[k] += real_distance(f);
      dl.q_stadium[k] += stadium_distance_to_identity(f, radius, grid);
    }
    xs.push_back(n);
    ys.push_back(std::log(dl.phi_stadium));
    report.levels.push_back(std::move(dl));
  }
  report.phi_slope = least_squares_slope(xs, ys);
  return report;
}

// --- univalence screen ---------------------------------------------------------

namespace {

int winding_number(const std::vector<Complex>& w, Complex around) {
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Complex a = w[k] - around;
    const Complex b = w[(k + 1) % w.size()] - around;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double cross(Complex a, Complex b, Complex c) { return std::imag(std::conj(b - a) * (c - a)); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

bool simple_polygon(const std::vector<Complex>& w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_cross(w[i], w[i + 1], w[j], w[(j + 1) % n])) return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w[i] == w[j]) return false;
    }
  }
  return true;
}

// One closed curve: derivative free of zeros inside, image simple and turning once.
bool curve_screen(const std::vector<Complex>& curve, const ComplexFn& f, const ComplexFn& df, Complex inner_image) {
  std::vector<Complex> w, d;
  w.reserve(curve.size());
  d.reserve(curve.size());
  double dmax = 0.0;
  for (const Complex z : curve) {
    w.push_back(f(z));
    d.push_back(df(z));
    dmax = std::max(dmax, std::abs(d.back()));
    if (!std::isfinite(std::abs(w.back())) || !std::isfinite(dmax)) return false;
  }
  for (const Complex v : d) {
    if (std::abs(v) <= 1e-12 * std::max(1.0, dmax)) return false;
  }
  return winding_number(d, 0.0) == 0 && winding_number(w, inner_image) == 1 && simple_polygon(w);
}

}  // namespace

bool univalence_check(const ComplexFn& f, const ComplexFn& df, const Stadium& stadium, const StadiumGrid& grid) {
  for (double x : cheb::check_grid()) {
    const double y = stadium.base.lo + 0.5 * (x + 1.0) * stadium.base.length();
    if (df(y) == 0.0) return false;
  }
  const Complex inner = f(Complex(stadium.base.center(), 0.0));
  for (int l = 1; l <= grid.layers; ++l) {
    const auto curve = stadium.boundary(grid.boundary_points, stadium.radius * l / grid.layers);
    if (!curve_screen(curve, f, df, inner)) return false;
  }
  return true;
}

bool univalence_check(const ChebSeries& f_full, const Stadium& stadium, const StadiumGrid& grid) {
  const ChebSeries f = chop_tail(f_full);
  const ChebSeries df = f.derivative();
  return univalence_check([&f](Complex z) { return f(z); }, [&df](Complex z) { return df(z); }, stadium, grid);
}

bool univalence_check(const PolyDiffeo& phi, const Stadium& stadium, const StadiumGrid& grid) {
  return univalence_check(phi.series(), stadium, grid);
}

// --- stadium propagation ------------------------------------------------------------

double stadium_propagation(double dist_to_id, double rho_psi, double K) {
  if (dist_to_id < 0.0 || rho_psi < 0.0 || K < 0.0) throw DomainError("stadium propagation needs nonnegative inputs");
  return std::exp(-K * dist_to_id) * rho_psi;
}

double safe_radius(const ComplexFn& f, double target, double rho_max, double resolution, int boundary_points) {
  const Stadium unit(OrientedInterval(-1.0, 1.0), target);
  auto lands = [&](double rho) {
    const Stadium s(OrientedInterval(-1.0, 1.0), rho);
    for (const Complex z : s.boundary(boundary_points)) {
      if (!(unit.distance_to_base(f(z)) < target)) return false;
    }
    return true;
  };
  if (lands(rho_max)) return rho_max;
  double hi = rho_max;
  double lo = 0.5 * rho_max;
  while (!lands(lo)) {
    hi = lo;
    lo *= 0.5;
    if (lo < resolution) return 0.0;
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (lands(mid) ? lo : hi) = mid;
  }
  return lo;
}

PropagationReport propagation_check(const NestedOrbit& orbit, int calibration_level, int test_level,
                                    double rho_psi, double e0_radius) {
  constexpr double kResolution = 1e-4;
  constexpr double kMaxDistance = 1.0;  // |phi - id| on E_0 bounded by a fixed constant
  PropagationReport report;
  report.rho_psi = rho_psi;
  report.e0_radius = e0_radius;
  report.calibration_level = calibration_level;
  report.test_level = test_level;
  const Stadium e0(OrientedInterval(-1.0, 1.0), e0_radius);

  struct Measured {
    double dist;
    double rho;
  };
  auto measure = [&](int n) {
    std::vector<Measured> out;
    for (const auto& piece : decomposition_pieces(orbit.pair, orbit.cycles.at(n - 1))) {
      const double d = stadium_distance_to_identity(piece.f, e0_radius);
      if (d > kMaxDistance || !univalence_check(piece.f, piece.df, e0)) continue;
      out.push_back({d, safe_radius(piece.f, rho_psi, e0_radius, kResolution)});
    }
    return out;
  };

  for (const auto& m : measure(calibration_level)) {
    if (m.rho >= rho_psi || m.dist == 0.0) continue;
    const double k = m.rho > 0.0 ? std::log(rho_psi / m.rho) / m.dist : std::numeric_limits<double>::infinity();
    report.K = std::max(report.K, k);
  }
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& m : measure(test_level)) {
    const double predicted = stadium_propagation(m.dist, rho_psi, report.K);
    ++report.tested;
    const double margin = m.rho - predicted;
    report.worst_margin = std::min(report.worst_margin, margin);
    if (margin < -kResolution) ++report.violations;
  }
  return report;
}

// --- near-identity estimate ------------------------------------------------------

bool NearIdentityReport::halving_ok() const {
  bool any = false;
  for (const auto& s : samples) {
    if (s.family == "odd-cubic") continue;  // second order: distance scales like K^-2
    any = true;
    if (std::abs(s.halving - 0.5) > 0.125) return false;
  }
  return any;
}

namespace {

struct TestMap {
  std::string family;
  double parameter;
  std::function<Complex(Complex)> psi;
  std::function<Complex(Complex)> dpsi;
};

std::vector<TestMap> test_family() {
  std::vector<TestMap> out;
  for (double a : {0.3, 0.6}) {
    out.push_back({"mobius", a, [a](Complex w) { return w / (1.0 - a * w); },
                   [a](Complex w) { return 1.0 / ((1.0 - a * w) * (1.0 - a * w)); }});
  }
  for (double c : {0.2, 0.4}) {
    out.push_back({"quadratic", c, [c](Complex w) { return w + c * w * w; },
                   [c](Complex w) { return 1.0 + 2.0 * c * w; }});
  }
  for (double c : {0.15, 0.3}) {
    out.push_back({"odd-cubic", c, [c](Complex w) { return w + c * w * w * w; },
                   [c](Complex w) { return 1.0 + 3.0 * c * w * w; }});
  }
  return out;
}

std::vector<Complex> circle(double r, int points) {
  std::vector<Complex> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) out.push_back(std::polar(r, 2.0 * std::numbers::pi * k / points));
  return out;
}

}  // namespace

NearIdentityReport near_identity_bound_check(double K, double epsilon) {
  if (!(epsilon > 1.0 && epsilon < K / 2.0)) throw DomainError("near-identity check needs 1 < epsilon < K/2");
  constexpr int kPoints = 256;
  NearIdentityReport report;
  for (const auto& m : test_family()) {
    auto normalized = [&m](double k) {
      const Complex lo = k * m.psi(Complex(-1.0 / k, 0.0));
      const Complex hi = k * m.psi(Complex(1.0 / k, 0.0));
      const Complex scale = 2.0 / (hi - lo);
      const Complex shift = -1.0 - scale * lo;
      auto f = [&m, k, scale, shift](Complex z) { return scale * k * m.psi(z / k) + shift; };
      auto df = [&m, k, scale](Complex z) { return scale * m.dpsi(z / k); };
      return std::pair{std::function<Complex(Complex)>(f), std::function<Complex(Complex)>(df)};
    };
    auto distance = [&](double k) {
      const auto [f, df] = normalized(k);
      double d = 0.0;
      for (const Complex z : circle(epsilon, kPoints)) d = std::max(d, std::abs(f(z) - z));
      return d;
    };
    const auto [f, df] = normalized(K);
    if (!curve_screen(circle(0.999 * K, kPoints), f, df, f(0.0))) {
      ++report.rejected;
      continue;
    }
    NearIdentitySample s;
    s.family = m.family;
    s.parameter = m.parameter;
    s.K = K;
    s.epsilon = epsilon;
    s.distance = distance(K);
    s.ratio = s.distance / (epsilon / K);
    s.halving = distance(2.0 * K) / s.distance;
    report.max_ratio = std::max(report.max_ratio, s.ratio);
    report.samples.push_back(std::move(s));
  }
  return report;
}

// --- output ----------------------------------------------------------------

void write_bounds_csv(std::ostream& out, double alpha, const RealBoundsReport& ratios, const DecayReport& decay) {
  const auto old_precision = out.precision(17);
  out << "alpha,n,kind,index,value\n";
  for (const auto& l : ratios.levels) {
    for (std::size_t i = 0; i < l.child.size(); ++i) out << alpha << ',' << l.n << ",child_ratio," << i << ',' << l.child[i] << '\n';
    for (std::size_t i = 0; i < l.gap.size(); ++i) out << alpha << ',' << l.n << ",gap_ratio," << i << ',' << l.gap[i] << '\n';
    out << alpha << ',' << l.n << ",central_ratio,0," << l.central_ratio << '\n';
  }
  for (const auto& d : decay.levels) {
    out << alpha << ',' << d.n << ",phi_sum_real,0," << d.phi_real << '\n';
    out << alpha << ',' << d.n << ",phi_sum_stadium,0," << d.phi_stadium << '\n';
    for (std::size_t k = 1; k < d.q_real.size(); ++k) {
      out << alpha << ',' << d.n << ",q_sum_real," << k << ',' << d.q_real[k] << '\n';
      out << alpha << ',' << d.n << ",q_sum_stadium," << k << ',' << d.q_stadium[k] << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace renorm
