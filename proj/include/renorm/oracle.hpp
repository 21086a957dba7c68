#pragma once

// Brute-force period-doubling cascade of the family q_t (phi = id). Uses only
// map iteration, bisection and arithmetic; nothing from the operator code.

#include <iosfwd>
#include <vector>

namespace renorm::oracle {

struct Cascade {
  double alpha = 2.0;
  std::vector<double> t;       // t[n-1] = superstable parameter of period 2^{n-1}
  std::vector<double> ratios;  // d_n = (t_{n+1} - t_n) / (t_{n+2} - t_{n+1}), n = 1..
  std::vector<double> delta_estimates;  // Aitken over each window of three ratios
  double delta = 0.0;          // Aitken limit of the last three ratios
  bool complete = true;        // false when a bracket failed before `levels`
};

// Superstable parameters t_1..t_levels; needs levels >= 6 and alpha > 1.
Cascade cascade_delta(double alpha, int levels);

struct Scaling {
  std::vector<double> ratios;  // |f^{2^n}(0) / f^{2^{n-1}}(0)| at the deepest parameter
  double limit = 0.0;
};

Scaling cascade_scaling(double alpha, int levels);

// alpha,n,t_n,d_n,delta_hat with 17 significant digits; d_n and delta_hat are
// empty where undefined.
void write_cascade_csv(std::ostream& out, const Cascade& cascade);

}  // namespace renorm::oracle
