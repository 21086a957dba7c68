#include "renorm/roots.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "renorm/errors.hpp"

namespace renorm::roots {

double solve_bracketed(const std::function<double(double)>& f, double a, double b) {
  if (a > b) std::swap(a, b);
  const double fa = f(a);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw NumericError("root bracket has non-finite values");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NumericError("root bracket without sign change");
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1),
      max_iter);
  if (max_iter >= 200) throw NumericError("root finder did not converge");
  // Pick the bracket end with the smaller residual; both are within an ulp or two.
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b, int samples) {
  std::vector<double> out;
  double x_prev = a;
  double f_prev = f(a);
  if (f_prev == 0.0) out.push_back(a);
  for (int i = 1; i <= samples; ++i) {
    const double x = a + (b - a) * i / samples;
    const double fx = f(x);
    if (fx == 0.0) {
      out.push_back(x);
    } else if (f_prev != 0.0 && (fx > 0) != (f_prev > 0) && std::isfinite(fx) && std::isfinite(f_prev)) {
      out.push_back(solve_bracketed(f, x_prev, x));
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

}  // namespace renorm::roots
