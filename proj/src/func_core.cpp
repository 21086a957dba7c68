#include "renorm/func_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "renorm/errors.hpp"
#include "renorm/roots.hpp"

namespace renorm {

// ---------------------------------------------------------------- PolyDiffeo

PolyDiffeo::PolyDiffeo(ChebSeries series, bool check) : series_(std::move(series)), deriv_(series_.derivative()) {
  if (check) {
    if (auto why = invariant_violation()) throw DomainError("not a diffeomorphism of [-1,1]: " + *why);
  }
}

PolyDiffeo::PolyDiffeo(ChebSeries series) : PolyDiffeo(std::move(series), true) {}

PolyDiffeo PolyDiffeo::unchecked(ChebSeries series) { return PolyDiffeo(std::move(series), false); }

PolyDiffeo PolyDiffeo::identity(int degree) {
  std::vector<double> c(std::max(degree, 1) + 1, 0.0);
  c[1] = 1.0;
  return PolyDiffeo(ChebSeries(std::move(c)), false);
}

std::optional<std::string> PolyDiffeo::invariant_violation() const {
  const double left = series_(-1.0);
  const double right = series_(1.0);
  if (!(std::abs(left + 1.0) <= kEndpointTol)) return "phi(-1) = " + std::to_string(left);
  if (!(std::abs(right - 1.0) <= kEndpointTol)) return "phi(1) = " + std::to_string(right);
  for (double x : cheb::check_grid()) {
    const double d = deriv_(x);
    if (!(d > 0.0)) return "non-positive derivative at x = " + std::to_string(x);
  }
  return std::nullopt;
}

double PolyDiffeo::inverse(double y) const {
  const double lo = series_(-1.0);
  const double hi = series_(1.0);
  if (y <= lo) return -1.0;
  if (y >= hi) return 1.0;
  return roots::solve_bracketed([&](double x) { return series_(x) - y; }, -1.0, 1.0);
}

PolyDiffeo PolyDiffeo::with_degree(int degree) const {
  if (degree >= this->degree()) return PolyDiffeo(series_.resized(degree), false);
  return PolyDiffeo(ChebSeries::interpolate([this](double x) { return series_(x); }, degree), false);
}

RealFn PolyDiffeo::as_fn() const {
  return [s = series_](double x) { return s(x); };
}

// ------------------------------------------------------------------- intervals

OrientedInterval::OrientedInterval(double lo_, double hi_, int orientation_)
    : lo(lo_), hi(hi_), orientation(orientation_ >= 0 ? 1 : -1) {
  if (!(lo < hi)) {
    throw DomainError("degenerate interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

OrientedInterval OrientedInterval::from_start(double a, double b) {
  return a < b ? OrientedInterval(a, b, 1) : OrientedInterval(b, a, -1);
}

Stadium::Stadium(OrientedInterval base_, double radius_) : base(base_), radius(radius_) {
  if (!(radius > 0.0)) throw DomainError("stadium radius must be positive");
}

double Stadium::distance_to_base(Complex z) const {
  const double x = std::clamp(z.real(), base.lo, base.hi);
  return std::abs(z - Complex(x, 0.0));
}

std::vector<Complex> Stadium::boundary(int points, std::optional<double> r_opt) const {
  const double r = r_opt.value_or(radius);
  const double len = base.length();
  const double perimeter = 2.0 * len + 2.0 * std::numbers::pi * r;
  std::vector<Complex> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    double s = perimeter * i / points;
    // bottom edge left to right, right cap, top edge right to left, left cap
    if (s < len) {
      out.emplace_back(base.lo + s, -r);
      continue;
    }
    s -= len;
    const double cap = std::numbers::pi * r;
    if (s < cap) {
      const double th = -std::numbers::pi / 2 + s / r;
      out.push_back(Complex(base.hi, 0.0) + std::polar(r, th));
      continue;
    }
    s -= cap;
    if (s < len) {
      out.emplace_back(base.hi - s, r);
      continue;
    }
    s -= len;
    const double th = std::numbers::pi / 2 + s / r;
    out.push_back(Complex(base.lo, 0.0) + std::polar(r, th));
  }
  return out;
}

QtParams::QtParams(double t_, double alpha_) : t(t_), alpha(alpha_) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0,1], got " + std::to_string(t));
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1, got " + std::to_string(alpha));
}

// -------------------------------------------------------------------- q_t

double qt_eval(const QtParams& p, double x) {
  return -2.0 * p.t * std::pow(std::abs(x), p.alpha) + 2.0 * p.t - 1.0;
}

double qt_derivative(const QtParams& p, double x) {
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  const double d = -2.0 * p.t * p.alpha * std::pow(ax, p.alpha - 1.0);
  return x > 0 ? d : -d;
}

Complex qt_complex_eval(const QtParams& p, Complex z, int branch) {
  if (z == Complex(0.0, 0.0)) return {2.0 * p.t - 1.0, 0.0};
  const Complex w = branch >= 0 ? z : -z;
  // Closed sector: the boundary ray is admitted, so alpha = 2 accepts the imaginary axis.
  if (std::abs(std::arg(w)) > std::numbers::pi / p.alpha) {
    throw DomainError("z outside the sector of branch " + std::to_string(branch));
  }
  return -2.0 * p.t * std::exp(p.alpha * std::log(w)) + 2.0 * p.t - 1.0;
}

AffineMap affine_to(const OrientedInterval& j) {
  if (!(j.lo < j.hi)) throw DomainError("degenerate interval");
  const double s = 2.0 / (j.hi - j.lo);
  if (j.orientation > 0) return {s, -(j.hi + j.lo) / (j.hi - j.lo)};
  return {-s, (j.hi + j.lo) / (j.hi - j.lo)};
}

// ------------------------------------------------------------------- zoom

Zoomed zoom_detailed(const RealFn& f, const OrientedInterval& interval, int degree,
                     std::optional<int> expected_orientation) {
  const double f_lo = f(interval.lo);
  const double f_hi = f(interval.hi);
  if (!(f_lo != f_hi)) throw DomainError("zoom: map is constant on the interval");
  const int direction = f_hi > f_lo ? 1 : -1;

  // Strict monotonicity on the check grid mapped into the interval.
  double prev = f_lo;
  const auto& grid = cheb::check_grid();
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    const double x = interval.center() + 0.5 * interval.length() * (*it);
    const double v = f(x);
    if (!((v - prev) * direction > 0.0)) {
      throw DomainError("zoom: map is not monotone on [" + std::to_string(interval.lo) + ", " +
                        std::to_string(interval.hi) + "]");
    }
    prev = v;
  }
  if (!((f_hi - prev) * direction > 0.0)) throw DomainError("zoom: map is not monotone near the right end");

  const int image_orientation = interval.orientation * direction;
  if (expected_orientation && *expected_orientation != image_orientation) {
    throw DomainError("zoom: orientation of the image does not match the expected orientation");
  }
  const OrientedInterval image(std::min(f_lo, f_hi), std::max(f_lo, f_hi), image_orientation);
  const AffineMap to_unit = affine_to(image);
  const AffineMap from_unit = affine_to(interval).inverse();
  // The endpoints land on -1 and 1 by the choice of image; evaluating them
  // through the affine maps would add rounding scaled by 1/|I|.
  auto series = ChebSeries::interpolate(
      [&](double z) {
        if (z <= -1.0) return -1.0;
        if (z >= 1.0) return 1.0;
        return to_unit(f(from_unit(z)));
      },
      degree);
  return {PolyDiffeo(std::move(series)), image};
}

PolyDiffeo zoom(const RealFn& f, const OrientedInterval& interval, int degree) {
  return zoom_detailed(f, interval, degree).map;
}

Refit compose_refit(const RealFn& outer, const RealFn& inner, int degree, double domain_lo, double domain_hi) {
  const double slack = 1e-12;
  auto composed = [&](double x) {
    const double y = inner(x);
    if (!(y >= domain_lo - slack && y <= domain_hi + slack)) {
      throw DomainError("compose_refit: inner map leaves the domain of the outer map at x = " + std::to_string(x));
    }
    return outer(std::clamp(y, domain_lo, domain_hi));
  };
  auto series = ChebSeries::interpolate(composed, degree);
  double residual = 0.0;
  for (double x : cheb::first_kind_nodes(4 * (degree + 1))) {
    residual = std::max(residual, std::abs(series(x) - composed(x)));
  }
  return {PolyDiffeo(std::move(series)), residual};
}

ChebSeries fit_from_samples(const RealFn& f, int degree) { return ChebSeries::interpolate(f, degree); }

double sup_distance(const RealFn& f, const RealFn& g) {
  double d = std::max(std::abs(f(-1.0) - g(-1.0)), std::abs(f(1.0) - g(1.0)));
  for (double x : cheb::check_grid()) d = std::max(d, std::abs(f(x) - g(x)));
  return d;
}

}  // namespace renorm
