#include "renorm/solver.hpp"

#include <algorithm>
#include <cmath>

#include "renorm/errors.hpp"
#include "renorm/roots.hpp"

namespace renorm {

namespace {

double critical_iterate(const PolyDiffeo& phi, const QtParams& qp, int q) {
  double x = 0.0;
  for (int i = 0; i < q; ++i) x = phi(qt_eval(qp, x));
  return x;
}

// Critical orbit x_0 = 0, ..., x_{q-1}, or nullopt when two points coincide.
std::optional<std::vector<double>> critical_orbit(const PolyDiffeo& phi, const QtParams& qp, int q) {
  std::vector<double> orbit(q);
  double x = 0.0;
  for (int i = 0; i < q; ++i) {
    orbit[i] = x;
    x = phi(qt_eval(qp, x));
  }
  auto sorted = orbit;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 1; i < q; ++i) {
    if (sorted[i] - sorted[i - 1] < 1e-9) return std::nullopt;
  }
  return orbit;
}

double aitken(double a, double b, double c) {
  const double denom = c - 2.0 * b + a;
  if (denom == 0.0) return c;
  return c - (c - b) * (c - b) / denom;
}

}  // namespace

// ------------------------------------------------------------ superstable

double find_superstable_t(const PolyDiffeo& phi, double alpha, int q, double lo, double hi) {
  if (q < 1) throw DomainError("period must be positive");
  if (!(lo < hi)) throw DomainError("empty bracket");
  auto g = [&](double t) { return critical_iterate(phi, QtParams(t, alpha), q); };
  const double glo = g(lo);
  const double ghi = g(hi);
  if (glo * ghi > 0.0) {
    throw DomainError("f_t^" + std::to_string(q) + "(0) has no sign change on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return roots::solve_bracketed(g, lo, hi);
}

std::optional<double> superstable_with_combinatorics(const PolyDiffeo& phi, double alpha,
                                                     const UnimodalPermutation& sigma, double lo, double hi,
                                                     int samples) {
  const int q = sigma.period();
  lo = std::max(lo, 0.5);
  hi = std::min(hi, 1.0);
  if (!(lo < hi)) return std::nullopt;
  auto g = [&](double t) { return critical_iterate(phi, QtParams(t, alpha), q); };
  for (double t : roots::scan_roots(g, lo, hi, samples)) {
    auto orbit = critical_orbit(phi, QtParams(t, alpha), q);
    if (orbit && permutation_of_orbit(*orbit) == sigma) return t;
  }
  return std::nullopt;
}

std::vector<double> superstable_cascade(const PolyDiffeo& phi, double alpha, const UnimodalPermutation& sigma,
                                        int levels) {
  std::vector<double> ts;
  UnimodalPermutation current = sigma;
  for (int k = 1; k <= levels; ++k) {
    double lo = 0.5, hi = 1.0;
    if (k == 2) {
      lo = ts[0];
    } else if (k > 2) {
      const double w = 3.0 * std::abs(ts[k - 2] - ts[k - 3]);
      lo = ts[k - 2] - w;
      hi = ts[k - 2] + w;
    }
    auto t = superstable_with_combinatorics(phi, alpha, current, lo, hi, 2000);
    if (!t) break;
    ts.push_back(*t);
    current = compose_permutations(current, sigma);
  }
  return ts;
}

// ----------------------------------------------------------- coordinates

Eigen::VectorXd pack_pair(const Pair& pair) {
  const auto c = pair.phi.coeffs();
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::VectorXd u(n);
  for (int k = 2; k <= n; ++k) u(k - 2) = c[k];
  u(n - 1) = pair.t();
  return u;
}

namespace {

std::vector<double> complete_coeffs(const Eigen::VectorXd& u, double odd_target) {
  const int n = static_cast<int>(u.size());  // degree
  std::vector<double> c(n + 1, 0.0);
  double even = 0.0, odd = 0.0;
  for (int k = 2; k <= n; ++k) {
    c[k] = u(k - 2);
    (k % 2 == 0 ? even : odd) += c[k];
  }
  c[0] = -even;
  c[1] = odd_target - odd;
  return c;
}

}  // namespace

Pair unpack_pair(const Eigen::VectorXd& u, double alpha) {
  const int n = static_cast<int>(u.size());
  return Pair::unchecked(PolyDiffeo::unchecked(ChebSeries(complete_coeffs(u, 1.0))), QtParams(u(n - 1), alpha));
}

ChebSeries unpack_tangent(const Eigen::VectorXd& du) { return ChebSeries(complete_coeffs(du, 0.0)); }

Eigen::VectorXd renormalize_packed(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                   int degree) {
  RenormOptions options;
  options.degree = degree;
  return pack_pair(renormalize(unpack_pair(u, alpha), sigma, options).pair);
}

Eigen::MatrixXd packed_jacobian(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                int degree, double fd_step) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd jac(degree, n);
  for (int j = 0; j < n; ++j) {
    const double h = fd_step * std::max(1.0, std::abs(u(j)));
    Eigen::VectorXd up = u, um = u;
    up(j) += h;
    um(j) -= h;
    jac.col(j) = (renormalize_packed(up, alpha, sigma, degree) - renormalize_packed(um, alpha, sigma, degree)) /
                 (2.0 * h);
  }
  return jac;
}

Eigen::MatrixXd packed_tangent_jacobian(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                        int degree) {
  const Pair pair = unpack_pair(u, alpha);
  CycleSearch search;
  search.combinatorics = sigma;
  const auto cycle = find_cycle(pair, sigma.period(), search);
  if (!cycle) throw DomainError("tangent: pair has no cycle with combinatorics " + sigma.to_string());
  const auto n = u.size();
  Eigen::MatrixXd jac(degree, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1.0;
    const auto image = renormalize_tangent(pair, *cycle, unpack_tangent(e), e(n - 1), degree);
    const auto c = image.omega.coeffs();
    for (int k = 2; k <= degree; ++k) jac(k - 2, j) = c[k];
    jac(degree - 1, j) = image.v;
  }
  return jac;
}

double fixed_point_residual(const Pair& pair, const UnimodalPermutation& sigma, int degree) {
  RenormOptions options;
  options.degree = degree;
  const auto next = renormalize(pair, sigma, options).pair;
  const double dphi = sup_distance(next.phi.as_fn(), pair.phi.as_fn());
  return std::max(dphi, std::abs(next.t() - pair.t()));
}

// ----------------------------------------------------------------- Newton

namespace {

struct NewtonResult {
  Eigen::VectorXd u;
  double norm = 0.0;
  int steps = 0;
};

std::optional<Eigen::VectorXd> try_residual(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                            int degree) {
  try {
    return renormalize_packed(u, alpha, sigma, degree) - u;
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

NewtonResult newton(Eigen::VectorXd u, double alpha, const UnimodalPermutation& sigma, const NewtonOptions& opt,
                    int degree) {
  auto g = try_residual(u, alpha, sigma, degree);
  if (!g) throw NumericError("Newton: seed is not renormalizable at alpha = " + std::to_string(alpha));
  NewtonResult res{u, g->lpNorm<Eigen::Infinity>(), 0};
  const double target = opt.tolerance * 1e-3;
  for (int step = 0; step < opt.max_steps; ++step) {
    if (res.norm <= target) return res;
    Eigen::MatrixXd jac;
    try {
      jac = packed_jacobian(res.u, alpha, sigma, degree, opt.fd_step);
    } catch (const std::runtime_error& e) {
      throw NumericError(std::string("Newton: cycle lost while differentiating: ") + e.what());
    }
    jac -= Eigen::MatrixXd::Identity(jac.rows(), jac.cols());
    const Eigen::VectorXd du = jac.fullPivLu().solve(-*g);
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 10; ++halving, lambda *= 0.5) {
      const Eigen::VectorXd trial = res.u + lambda * du;
      auto gt = try_residual(trial, alpha, sigma, degree);
      if (!gt) continue;
      const double nt = gt->lpNorm<Eigen::Infinity>();
      if (nt < res.norm) {
        res.u = trial;
        g = gt;
        res.norm = nt;
        accepted = true;
        break;
      }
    }
    res.steps = step + 1;
    if (!accepted) {
      if (res.norm <= opt.tolerance) return res;  // stagnated at round-off
      throw NumericError("Newton diverged at alpha = " + std::to_string(alpha) +
                         " (residual " + std::to_string(res.norm) + ")");
    }
  }
  if (res.norm <= opt.tolerance) return res;
  throw NumericError("Newton: no convergence after " + std::to_string(opt.max_steps) + " steps at alpha = " +
                     std::to_string(alpha));
}

Eigen::VectorXd pack_at_degree(const Pair& pair, int degree) {
  return pack_pair(Pair::unchecked(pair.phi.with_degree(degree), pair.params));
}

}  // namespace

FixedPointRecord fixed_point(double alpha, const UnimodalPermutation& sigma, const std::optional<Pair>& init,
                             const NewtonOptions& options) {
  const int degree = options.degree;
  Eigen::VectorXd u;
  int steps = 0;
  if (init) {
    u = pack_at_degree(*init, degree);
  } else {
    const auto identity = PolyDiffeo::identity(options.coarse_degree);
    const auto cascade = superstable_cascade(identity, alpha, sigma, options.seed_depth);
    if (static_cast<int>(cascade.size()) < options.seed_depth) {
      throw NumericError("seed: superstable cascade for " + sigma.to_string() + " stopped at level " +
                         std::to_string(cascade.size()));
    }
    Pair seed(identity, QtParams(cascade.back(), alpha));
    RenormOptions ro;
    ro.degree = options.coarse_degree;
    try {
      for (int i = 0; i < options.seed_iterations; ++i) seed = renormalize(seed, sigma, ro).pair;
    } catch (const DomainError& e) {
      throw NumericError(std::string("seed iteration lost the cycle: ") + e.what());
    }
    const int first = std::min(options.coarse_degree, degree);
    auto coarse = newton(pack_at_degree(seed, first), alpha, sigma, options, first);
    steps += coarse.steps;
    u = pack_at_degree(unpack_pair(coarse.u, alpha), degree);
  }
  auto fine = newton(u, alpha, sigma, options, degree);
  steps += fine.steps;

  FixedPointRecord rec;
  rec.alpha = alpha;
  rec.sigma = sigma;
  rec.degree = degree;
  rec.newton_steps = steps;
  const Pair pair = unpack_pair(fine.u, alpha);
  rec.phi_star = PolyDiffeo(pair.phi.series());  // validates the invariants
  rec.t_star = pair.t();
  if (!(rec.t_star > 0.0 && rec.t_star < 1.0)) throw NumericError("fixed point has t* outside (0,1)");
  try {
    rec.residual = fixed_point_residual(rec.pair(), sigma, degree);
    const int hi = std::max(options.confirm_degree, degree);
    rec.confirm_residual =
        fixed_point_residual(Pair::unchecked(rec.phi_star.with_degree(hi), rec.pair().params), sigma, hi);
  } catch (const DomainError& e) {
    throw NumericError(std::string("fixed point lost its cycle: ") + e.what());
  }
  if (rec.residual > options.tolerance) {
    throw NumericError("Newton stopped with residual " + std::to_string(rec.residual) + " at alpha = " +
                       std::to_string(alpha));
  }
  if (rec.confirm_residual > 10.0 * std::max(rec.residual, 1e-13)) {
    throw NumericError("truncation check failed: residual grows to " + std::to_string(rec.confirm_residual) +
                       " at degree " + std::to_string(options.confirm_degree));
  }
  return rec;
}

FixedPointRecord continue_in_alpha(const FixedPointRecord& from, double alpha_target, double step,
                                   const NewtonOptions& options) {
  if (!(step > 0.0)) throw DomainError("continuation step must be positive");
  if (!std::isfinite(alpha_target)) throw DomainError("alpha target must be finite");
  if (alpha_target == from.alpha) return from;
  const int stops = static_cast<int>(std::ceil(std::abs(alpha_target - from.alpha) / step - 1e-9));
  FixedPointRecord current = from;
  NewtonOptions opt = options;
  opt.degree = from.degree;
  for (int i = 1; i <= stops; ++i) {
    const double a = i == stops ? alpha_target : from.alpha + (alpha_target - from.alpha) * i / stops;
    try {
      auto seed = Pair::unchecked(current.phi_star, QtParams(current.t_star, a));
      current = fixed_point(a, from.sigma, seed, opt);
    } catch (const std::runtime_error& e) {
      throw NumericError("continuation failed at alpha = " + std::to_string(a) + ": " + e.what());
    }
  }
  return current;
}

// ------------------------------------------------------------------ orbits

std::vector<double> OrbitReport::contraction_ratios(int burn_in) const {
  std::vector<double> out;
  for (std::size_t i = std::max(burn_in, 0); i + 1 < points.size(); ++i) {
    out.push_back(points[i + 1].distance() / points[i].distance());
  }
  return out;
}

double OrbitReport::contraction_factor(int first, int last) const {
  last = std::min(last, static_cast<int>(points.size()) - 1);
  if (first < 0 || last - first < 1) throw DomainError("contraction_factor needs at least two iterates");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int m = last - first + 1;
  for (int i = first; i <= last; ++i) {
    const double y = std::log(points[i].distance());
    sx += i;
    sy += y;
    sxx += static_cast<double>(i) * i;
    sxy += i * y;
  }
  return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

OrbitReport iterate_orbit(const Pair& pair, const UnimodalPermutation& sigma, int n, const FixedPointRecord& reference,
                          int degree) {
  OrbitReport report;
  RenormOptions ro;
  ro.degree = degree;
  const RealFn star = reference.phi_star.as_fn();
  Pair current = pair;
  for (int i = 0; i <= n; ++i) {
    report.points.push_back({i, sup_distance(current.phi.as_fn(), star), std::abs(current.t() - reference.t_star)});
    report.pairs.push_back(current);
    if (i == n) break;
    try {
      current = renormalize(current, sigma, ro).pair;
    } catch (const DomainError&) {
      report.complete = false;
      break;
    }
  }
  return report;
}

double stable_manifold_t(const PolyDiffeo& phi, const FixedPointRecord& reference, int depth) {
  const double alpha = reference.alpha;
  const auto cascade = superstable_cascade(phi, alpha, reference.sigma, 3);
  if (cascade.empty()) throw NumericError("stable_manifold_t: no superstable parameter for the seed");
  double t = cascade.size() == 3 ? aitken(cascade[0], cascade[1], cascade[2]) : cascade.back();

  RenormOptions ro;
  ro.degree = reference.degree;
  auto shoot = [&](double s, int k) -> std::optional<double> {
    try {
      Pair p(phi, QtParams(s, alpha));
      for (int i = 0; i < k; ++i) p = renormalize(p, reference.sigma, ro).pair;
      return p.t() - reference.t_star;
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  };

  for (int k = 1; k <= depth; ++k) {
    double ta = t, tb = t + 1e-10;
    auto ha = shoot(ta, k);
    auto hb = shoot(tb, k);
    if (!ha || !hb) throw NumericError("stable_manifold_t: guess left the renormalizable set at depth " +
                                       std::to_string(k));
    for (int it = 0; it < 60; ++it) {
      if (*hb == *ha) break;
      double tc = tb - *hb * (tb - ta) / (*hb - *ha);
      auto hc = shoot(tc, k);
      for (int shrink = 0; !hc && shrink < 30; ++shrink) {
        tc = 0.5 * (tc + tb);
        hc = shoot(tc, k);
      }
      if (!hc) throw NumericError("stable_manifold_t: secant left the renormalizable set");
      ta = tb;
      ha = hb;
      tb = tc;
      hb = hc;
      if (std::abs(tb - ta) <= 4e-16 * std::abs(tb) || *hb == 0.0) break;
    }
    t = std::abs(*hb) < std::abs(*ha) ? tb : ta;
  }
  return t;
}

}  // namespace renorm
