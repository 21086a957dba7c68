#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "renorm/unimodal.hpp"

namespace renorm {

struct SpectralReport {
  std::vector<std::complex<double>> eigenvalues;  // sorted by modulus, descending
  std::vector<bool> stable_flags;                 // stable across truncation degrees
  double delta = 0.0;                             // top truncation-stable eigenvalue (real part)
  int expanding_count = 0;                        // stable eigenvalues with modulus > 1
  double fd_step = 0.0;
  int degree = 0;
  bool delta_real_simple = false;  // dominant eigenvalue real, positive and simple

  // Truncation-stable eigenvalues in modulus order.
  std::vector<std::complex<double>> stable_eigenvalues() const;
};

struct FixedPointRecord {
  double alpha = 2.0;
  double t_star = 0.0;
  PolyDiffeo phi_star = PolyDiffeo::identity();
  double residual = 0.0;  // sup-norm of R(phi*, t*) - (phi*, t*)
  int degree = kDefaultDegree;
  UnimodalPermutation sigma = UnimodalPermutation::doubling();
  double confirm_residual = 0.0;  // residual re-measured at a higher truncation
  int newton_steps = 0;
  std::optional<SpectralReport> spectral;

  Pair pair() const { return Pair::unchecked(phi_star, QtParams(t_star, alpha)); }
};

}  // namespace renorm
