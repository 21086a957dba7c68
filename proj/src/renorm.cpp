#include "renorm/renorm.hpp"

#include <cmath>
#include <numbers>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

OrientedInterval pull_back_through(const PolyDiffeo& phi, const OrientedInterval& target) {
  const double a = phi.inverse(target.lo);
  const double b = phi.inverse(target.hi);
  return OrientedInterval(a, b, target.orientation);
}

}  // namespace

double t_next(const Pair& pair, const Cycle& cycle) {
  const auto domain = pull_back_through(pair.phi, cycle.at(1));
  const double image = 2.0 * pair.t() * std::pow(std::abs(cycle.p), pair.alpha());
  return image / domain.length();
}

DecomposedStep decompose_with_cycle(const Pair& pair, const Cycle& cycle, int degree) {
  const int q = cycle.period();
  const QtParams& qp = pair.params;
  const RealFn phi = pair.phi.as_fn();
  const RealFn qt = [qp](double x) { return qt_eval(qp, x); };

  DecomposedStep step;
  step.cycle = cycle;
  step.pieces.reserve(2 * q - 1);
  const auto domain0 = pull_back_through(pair.phi, cycle.at(1));
  step.pieces.push_back(zoom_detailed(phi, domain0, degree, cycle.at(1).orientation).map);
  for (int i = 1; i < q; ++i) {
    const int next_orientation = cycle.at(i + 1).orientation;
    auto qi = zoom_detailed(qt, cycle.at(i), degree, next_orientation);
    auto phii = zoom_detailed(phi, qi.image, degree, next_orientation);
    step.pieces.push_back(std::move(qi.map));
    step.pieces.push_back(std::move(phii.map));
  }
  step.t_next = 2.0 * qp.t * std::pow(std::abs(cycle.p), qp.alpha) / domain0.length();
  if (step.t_next > 1.0 && step.t_next < 1.0 + 1e-12) step.t_next = 1.0;
  return step;
}

Renormalized renormalize_with_cycle(const Pair& pair, const Cycle& cycle, int degree) {
  const QtParams& qp = pair.params;
  DecomposedStep step = decompose_with_cycle(pair, cycle, degree);

  const auto& pieces = step.pieces;
  auto composed = ChebSeries::interpolate(
      [&pieces](double x) {
        for (const auto& piece : pieces) x = piece(x);
        return x;
      },
      degree);
  Pair out(PolyDiffeo(std::move(composed)), QtParams(step.t_next, qp.alpha));
  return {std::move(out), std::move(step)};
}

Renormalized renormalize(const Pair& pair, const UnimodalPermutation& sigma, const RenormOptions& options) {
  CycleSearch search = options.search;
  search.combinatorics = sigma;
  auto cycle = find_cycle(pair, sigma.period(), search);
  if (!cycle) {
    throw DomainError("pair (t = " + std::to_string(pair.t()) + ") has no cycle with combinatorics " +
                      sigma.to_string());
  }
  return renormalize_with_cycle(pair, *cycle, options.degree);
}

namespace {

struct Propagated {
  double value;
  double derivative;  // (f^m)'(z)
  double tangent;     // first-order change of f^m(z) under f -> f + df, z -> z + dz
};

template <class F, class DF, class Delta>
Propagated propagate(const F& f, const DF& df, const Delta& delta, double z, double dz, int m) {
  Propagated out{z, 1.0, dz};
  for (int i = 0; i < m; ++i) {
    const double d = df(out.value);
    out.tangent = delta(out.value) + d * out.tangent;
    out.derivative *= d;
    out.value = f(out.value);
  }
  return out;
}

}  // namespace

TangentImage renormalize_tangent(const Pair& pair, const Cycle& cycle, const ChebSeries& omega, double v,
                                 int degree) {
  const int q = cycle.period();
  const QtParams& qp = pair.params;
  const PolyDiffeo& phi = pair.phi;
  auto f = [&pair](double x) { return pair(x); };
  auto df = [&pair](double x) { return pair.derivative(x); };
  auto delta = [&](double w) {
    const double y = qt_eval(qp, w);
    return omega(y) + phi.derivative(y) * v * (2.0 - 2.0 * std::pow(std::abs(w), qp.alpha));
  };

  const double p = cycle.p;
  const auto round = propagate(f, df, delta, p, 0.0, q);
  const double dp = -round.tangent / (round.derivative - 1.0);

  // Orbit endpoints x_i and the opposite endpoints e_i, f(e_i) = e_{i+1}, e_q = -p.
  std::vector<double> x(q + 1), dx(q + 1);
  x[0] = p;
  dx[0] = dp;
  for (int i = 0; i < q; ++i) {
    dx[i + 1] = delta(x[i]) + df(x[i]) * dx[i];
    x[i + 1] = f(x[i]);
  }
  double e = -p, de = -dp;
  for (int i = q - 1; i >= 1; --i) {
    const auto& iv = cycle.at(i);
    e = std::abs(iv.start() - x[i]) <= std::abs(iv.finish() - x[i]) ? iv.finish() : iv.start();
    de = (de - delta(e)) / df(e);
  }
  // J_0 = phi^{-1}(I_1), started at phi^{-1}(x_1) = q_t(p).
  const double s0 = qt_eval(qp, p);
  const double e0 = phi.inverse(e);
  const double ds0 = (dx[1] - omega(s0)) / phi.derivative(s0);
  const double de0 = (de - omega(e0)) / phi.derivative(e0);

  TangentImage out;
  out.omega = ChebSeries::interpolate(
      [&](double xx) {
        const double s = 0.5 * (xx + 1.0);
        const double y = s0 + s * (e0 - s0);
        const double dy = ds0 + s * (de0 - ds0);
        const double py = phi(y);
        const auto tail = propagate(f, df, delta, py, omega(y), q - 1);
        const double fprime = tail.derivative * phi.derivative(y);
        return -(tail.tangent + fprime * dy) / p + tail.value * dp / (p * p);
      },
      degree);
  const double len = std::abs(e0 - s0);
  const double dlen = (e0 > s0 ? 1.0 : -1.0) * (de0 - ds0);
  const double t1 = 2.0 * qp.t * std::pow(std::abs(p), qp.alpha) / len;
  out.v = t1 * (v / qp.t + qp.alpha * dp / p - dlen / len);
  return out;
}

UnimodalMap classic_renormalize(const UnimodalMap& f, int q, double p) {
  if (!(std::abs(p) > 1e-14)) throw DomainError("classic_renormalize: p is zero");
  if (std::abs(std::abs(f.iterate(p, q)) - std::abs(p)) > kPeriodicTol) {
    throw DomainError("classic_renormalize: p is not an endpoint of a periodic central interval");
  }
  return {[f, q, p](double z) { return f.iterate(p * z, q) / p; },
          [f, q, p](double z) { return f.iterate_derivative(p * z, q); }};
}

UnimodalMap classic_renormalize(const UnimodalMap& f, const UnimodalPermutation& sigma, const CycleSearch& search) {
  CycleSearch s = search;
  s.combinatorics = sigma;
  auto cycle = find_cycle(f, sigma.period(), s);
  if (!cycle) throw DomainError("classic_renormalize: no cycle with combinatorics " + sigma.to_string());
  // The endpoint opposite to the periodic point goes to +-1 -> -1.
  return classic_renormalize(f, sigma.period(), -cycle->p);
}

UnimodalMap compose_L(const Pair& pair) { return pair.as_map(); }

int even_half_exponent(double alpha) {
  const double r = std::round(alpha / 2.0);
  if (r < 1.0 || std::abs(alpha - 2.0 * r) > 1e-12) {
    throw DomainError("DL is defined only for even integer alpha, got " + std::to_string(alpha));
  }
  return static_cast<int>(r);
}

RealFn dL(const Pair& pair, RealFn omega, double v) {
  const int r = even_half_exponent(pair.alpha());
  return [phi = pair.phi, qp = pair.params, omega = std::move(omega), v, r](double x) {
    const double y = qt_eval(qp, x);
    return omega(y) + phi.derivative(y) * 2.0 * v * (1.0 - std::pow(x, 2 * r));
  };
}

Lift F_lift(const ComplexFn& w, const Pair& base, int degree) {
  const int r = even_half_exponent(base.alpha());
  const double t = base.t();
  if (!(t > 0.0)) throw DomainError("F_lift needs t > 0");

  // w must be a function of x^{2r}: even, and for r > 1 invariant under x -> x e^{i pi / r}.
  const auto real_fit = fit_from_samples([&w](double x) { return w(Complex(x, 0.0)).real(); }, degree);
  double odd_mass = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= real_fit.degree(); ++k) {
    scale = std::max(scale, std::abs(real_fit.coeffs()[k]));
    if (k % 2 == 1) odd_mass += std::abs(real_fit.coeffs()[k]);
  }
  if (odd_mass > 1e-10 * scale) throw DomainError("F_lift: w is not of the form psi(x^{2r}) (odd part present)");
  if (r > 1) {
    const Complex rot = std::polar(1.0, std::numbers::pi / r);
    for (double x : {0.3, 0.55, 0.8}) {
      const Complex z(x, 0.1);
      if (std::abs(w(z) - w(z * rot)) > 1e-10 * scale) {
        throw DomainError("F_lift: w is not of the form psi(x^{2r}) (rotation symmetry fails)");
      }
    }
  }

  // beta = psi o A_t^{-1}, so that w = beta o q_t.
  auto beta = [&](double s) {
    const Complex y((2.0 * t - 1.0 - s) / (2.0 * t), 0.0);
    const Complex x = y == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : std::pow(y, 1.0 / (2.0 * r));
    return w(x).real();
  };
  const double beta1 = beta(1.0);
  const double dphi1 = base.phi.derivative(1.0);
  const double coef = beta1 / (2.0 * dphi1);
  Lift out;
  out.omega = fit_from_samples([&](double y) { return beta(y) - base.phi.derivative(y) * coef * (1.0 + y); }, degree);
  out.b = beta1 * t / (2.0 * dphi1);
  return out;
}

double injectivity_probe(const Pair& a, const Pair& b) {
  if (a.t() == 0.0 || b.t() == 0.0) throw DomainError("injectivity_probe needs nonzero t");
  return sup_distance([&a](double x) { return a(x); }, [&b](double x) { return b(x); });
}

}  // namespace renorm
