#pragma once

// Function representation and the geometric primitives every other module
// builds on: diffeomorphisms of [-1,1], oriented intervals, affine
// normalizations, the zoom operator and the family q_t.

#include <optional>
#include <string>
#include <vector>

#include "renorm/chebyshev.hpp"

namespace renorm {

inline constexpr int kDefaultDegree = 60;
inline constexpr double kEndpointTol = 1e-12;
inline constexpr double kRefitWarnResidual = 1e-9;

// Orientation-preserving diffeomorphism of [-1,1] fixing -1 and 1, stored as a
// Chebyshev series together with its derivative.
class PolyDiffeo {
 public:
  // Validates the invariants and throws DomainError on failure.
  explicit PolyDiffeo(ChebSeries series);
  explicit PolyDiffeo(std::vector<double> coeffs) : PolyDiffeo(ChebSeries(std::move(coeffs))) {}

  // No validation; used for intermediate Newton iterates and perturbations.
  static PolyDiffeo unchecked(ChebSeries series);
  static PolyDiffeo identity(int degree = kDefaultDegree);

  double operator()(double x) const { return series_(x); }
  Complex operator()(Complex z) const { return series_(z); }
  double derivative(double x) const { return deriv_(x); }
  Complex derivative(Complex z) const { return deriv_(z); }

  // Solves phi(x) = y on [-1,1] (y is clamped to the range first).
  double inverse(double y) const;

  int degree() const { return series_.degree(); }
  std::span<const double> coeffs() const { return series_.coeffs(); }
  const ChebSeries& series() const { return series_; }

  // Same map at another truncation order: padding is exact, lowering refits.
  PolyDiffeo with_degree(int degree) const;

  // Empty optional when the endpoint and positive-derivative invariants hold.
  std::optional<std::string> invariant_violation() const;

  RealFn as_fn() const;

 private:
  PolyDiffeo(ChebSeries series, bool check);
  ChebSeries series_;
  ChebSeries deriv_;
};

// Closed interval [lo, hi] carrying an orientation; the orientation picks which
// endpoint the normalizing affine map sends to -1.
struct OrientedInterval {
  double lo = -1.0;
  double hi = 1.0;
  int orientation = 1;

  OrientedInterval() = default;
  OrientedInterval(double lo_, double hi_, int orientation_ = 1);

  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  // Endpoint sent to -1 by affine_to.
  double start() const { return orientation > 0 ? lo : hi; }
  double finish() const { return orientation > 0 ? hi : lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool contains_interior(double x) const { return x > lo && x < hi; }
  // Interval spanning a and b, oriented so that `start()` equals a.
  static OrientedInterval from_start(double a, double b);
};

struct Stadium {
  OrientedInterval base;
  double radius = 0.1;

  Stadium(OrientedInterval base_, double radius_);
  double distance_to_base(Complex z) const;
  bool contains(Complex z) const { return distance_to_base(z) < radius; }
  // Closed curve at distance `r` (default: radius) from the base, counterclockwise.
  std::vector<Complex> boundary(int points, std::optional<double> r = std::nullopt) const;
};

struct QtParams {
  double t = 1.0;
  double alpha = 2.0;

  QtParams() = default;
  QtParams(double t_, double alpha_);
};

struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;

  double operator()(double x) const { return scale * x + shift; }
  Complex operator()(Complex z) const { return scale * z + shift; }
  AffineMap inverse() const { return {1.0 / scale, -shift / scale}; }
};

// q_t(x) = -2t|x|^alpha + 2t - 1.
double qt_eval(const QtParams& p, double x);
double qt_derivative(const QtParams& p, double x);

// Sector branches: +1 uses log z (|arg z| < pi/alpha), -1 uses log(-z).
// Throws DomainError outside the requested sector.
Complex qt_complex_eval(const QtParams& p, Complex z, int branch);

// Affine map carrying J onto [-1,1]; J.start() goes to -1.
AffineMap affine_to(const OrientedInterval& j);

struct Zoomed {
  PolyDiffeo map;
  OrientedInterval image;  // f(I), oriented so that the zoomed map preserves orientation
};

// A_{f(I)} o f o A_I^{-1}, refit at `degree`. f must be strictly monotone on I
// (checked on the 512-node grid); the orientation of f(I) is derived from the
// direction of f. When `expected_orientation` is given it must match.
Zoomed zoom_detailed(const RealFn& f, const OrientedInterval& interval, int degree = kDefaultDegree,
                     std::optional<int> expected_orientation = std::nullopt);
PolyDiffeo zoom(const RealFn& f, const OrientedInterval& interval, int degree = kDefaultDegree);

struct Refit {
  PolyDiffeo map;
  double residual = 0.0;  // max-norm error on a 4x denser grid
  bool precision_warning() const { return residual > kRefitWarnResidual; }
};

// outer o inner sampled at the Lobatto nodes and transformed to coefficients.
// Throws DomainError when inner leaves [domain_lo, domain_hi].
Refit compose_refit(const RealFn& outer, const RealFn& inner, int degree = kDefaultDegree,
                    double domain_lo = -1.0, double domain_hi = 1.0);

// Chebyshev interpolant of f; exact for polynomials of degree <= degree.
ChebSeries fit_from_samples(const RealFn& f, int degree = kDefaultDegree);

// Sup of |f - g| over the 512-node grid plus the endpoints.
double sup_distance(const RealFn& f, const RealFn& g);

}  // namespace renorm
