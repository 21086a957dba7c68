#pragma once

#include "renorm/solver.hpp"

namespace renorm::test {

// Solved once per test binary; several suites linearize or iterate around it.
inline const FixedPointRecord& alpha2_fixed_point() {
  static const FixedPointRecord rec = fixed_point(2.0, UnimodalPermutation::doubling());
  return rec;
}

inline Pair identity_pair(double t, double alpha = 2.0) {
  return Pair(PolyDiffeo::identity(), QtParams(t, alpha));
}

// (x + x^3) / 2, a diffeomorphism of [-1,1] fixing both endpoints.
inline PolyDiffeo half_cubic() {
  return PolyDiffeo(fit_from_samples([](double x) { return 0.5 * (x + x * x * x); }));
}

}  // namespace renorm::test
