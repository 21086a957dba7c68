#include "renorm/oracle.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "renorm/errors.hpp"
#include "renorm/func_core.hpp"

namespace renorm::oracle {

namespace {

double critical_return(double t, double alpha, long period) {
  const QtParams qp(t, alpha);
  double x = 0.0;
  for (long i = 0; i < period; ++i) x = qt_eval(qp, x);
  return x;
}

// Plain bisection down to adjacent doubles.
double bisect(double alpha, long period, double lo, double hi) {
  double glo = critical_return(lo, alpha, period);
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = critical_return(mid, alpha, period);
    if (g == 0.0) return mid;
    if ((g < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
    }
  }
  return std::abs(critical_return(lo, alpha, period)) <= std::abs(critical_return(hi, alpha, period)) ? lo : hi;
}

double aitken(double a, double b, double c) {
  const double denom = c - 2.0 * b + a;
  return denom == 0.0 ? c : c - (c - b) * (c - b) / denom;
}

}  // namespace

Cascade cascade_delta(double alpha, int levels) {
  if (levels < 6) throw DomainError("cascade needs at least 6 levels");
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
  Cascade c;
  c.alpha = alpha;
  c.t.push_back(bisect(alpha, 1, 0.3, 0.7));  // 2t - 1 = 0
  double delta_guess = 4.0;
  for (int n = 2; n <= levels; ++n) {
    const long period = 1L << (n - 1);
    const double prev = c.t.back();
    const double gap = n == 2 ? (1.0 - prev) : prev - c.t[c.t.size() - 2];
    const double step = n == 2 ? gap / 400.0 : gap / (8.0 * delta_guess);
    double lo = prev + step;
    double glo = critical_return(lo, alpha, period);
    bool found = false;
    for (int k = 0; k < 4000; ++k) {
      const double hi = lo + step;
      if (hi > 1.0) break;
      const double ghi = critical_return(hi, alpha, period);
      if ((ghi < 0.0) != (glo < 0.0) || ghi == 0.0) {
        c.t.push_back(bisect(alpha, period, lo, hi));
        found = true;
        break;
      }
      lo = hi;
      glo = ghi;
    }
    if (!found) {
      c.complete = false;
      break;
    }
    const std::size_t m = c.t.size();
    if (m >= 3) {
      c.ratios.push_back((c.t[m - 2] - c.t[m - 3]) / (c.t[m - 1] - c.t[m - 2]));
      delta_guess = c.ratios.back();
    }
    const std::size_t r = c.ratios.size();
    if (r >= 3) c.delta_estimates.push_back(aitken(c.ratios[r - 3], c.ratios[r - 2], c.ratios[r - 1]));
  }
  if (!c.delta_estimates.empty()) {
    c.delta = c.delta_estimates.back();
  } else if (!c.ratios.empty()) {
    c.delta = c.ratios.back();
  }
  return c;
}

Scaling cascade_scaling(double alpha, int levels) {
  const Cascade c = cascade_delta(alpha, levels);
  Scaling s;
  const int depth = static_cast<int>(c.t.size());
  const double t = c.t.back();
  // Closest returns 2^n for n well below the superstable period 2^{depth-1}.
  double previous = critical_return(t, alpha, 1);
  for (int n = 1; n <= depth - 3; ++n) {
    const double current = critical_return(t, alpha, 1L << n);
    s.ratios.push_back(std::abs(current / previous));
    previous = current;
  }
  const std::size_t r = s.ratios.size();
  s.limit = r >= 3 ? aitken(s.ratios[r - 3], s.ratios[r - 2], s.ratios[r - 1]) : (r ? s.ratios.back() : 0.0);
  return s;
}

void write_cascade_csv(std::ostream& out, const Cascade& cascade) {
  const auto old_precision = out.precision(17);
  out << "alpha,n,t_n,d_n,delta_hat\n";
  for (std::size_t n = 0; n < cascade.t.size(); ++n) {
    out << cascade.alpha << ',' << n + 1 << ',' << cascade.t[n] << ',';
    if (n < cascade.ratios.size()) out << cascade.ratios[n];
    out << ',';
    if (n >= 2 && n - 2 < cascade.delta_estimates.size()) out << cascade.delta_estimates[n - 2];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace renorm::oracle
