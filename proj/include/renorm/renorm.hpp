#pragma once

// The renormalization operators on pairs and on unimodal maps, the composition
// transformation L(phi, t) = phi o q_t, its derivative and a right inverse.

#include <optional>
#include <vector>

#include "renorm/unimodal.hpp"

namespace renorm {

// Pieces of one renormalization step: phi_0, q_1, phi_1, ..., q_{q-1}, phi_{q-1}.
struct DecomposedStep {
  std::vector<PolyDiffeo> pieces;
  double t_next = 0.0;
  Cycle cycle;

  int period() const { return cycle.period(); }
  const PolyDiffeo& phi_piece(int i) const { return pieces.at(i == 0 ? 0 : 2 * i); }
  const PolyDiffeo& q_piece(int i) const { return pieces.at(2 * i - 1); }
};

struct Renormalized {
  Pair pair;
  DecomposedStep step;
};

struct RenormOptions {
  int degree = kDefaultDegree;
  CycleSearch search;  // combinatorics is overwritten by the requested sigma
};

// One application of the decomposed operator with combinatorics sigma.
// Throws DomainError when the pair has no cycle with that combinatorics.
Renormalized renormalize(const Pair& pair, const UnimodalPermutation& sigma, const RenormOptions& options = {});

// Pieces and t_1 for a cycle supplied by the caller, without refitting the
// composition. Deep nested cycles of a single pair go through here.
DecomposedStep decompose_with_cycle(const Pair& pair, const Cycle& cycle, int degree = kDefaultDegree);

// Same as renormalize, with the cycle supplied by the caller.
Renormalized renormalize_with_cycle(const Pair& pair, const Cycle& cycle, int degree = kDefaultDegree);

// Derivative of the operator at `pair` (whose cycle is `cycle`) in the
// direction (omega, v): omega perturbs phi and must vanish at +-1, v perturbs
// t. The cycle endpoints move with the perturbation; their motion is obtained
// from the implicit equations defining them.
struct TangentImage {
  ChebSeries omega;
  double v = 0.0;
};
TangentImage renormalize_tangent(const Pair& pair, const Cycle& cycle, const ChebSeries& omega, double v,
                                 int degree = kDefaultDegree);

// |q_t(I_q)| / |phi^{-1}(I_1)|.
double t_next(const Pair& pair, const Cycle& cycle);

// z -> f^q(p z) / p. Requires |f^q(p)| = |p| (either endpoint of the central
// interval) within 1e-10 and p != 0.
UnimodalMap classic_renormalize(const UnimodalMap& f, int q, double p);

// Classic renormalization through the cycle of f with combinatorics sigma,
// rescaled so that the result again has its maximum at 0 and f(+-1) = -1.
UnimodalMap classic_renormalize(const UnimodalMap& f, const UnimodalPermutation& sigma,
                                const CycleSearch& search = {});

// L(phi, t) = phi o q_t.
UnimodalMap compose_L(const Pair& pair);

// r with alpha = 2r; throws DomainError for odd or non-integer alpha.
int even_half_exponent(double alpha);

// DL(phi,t)(omega, v)(x) = omega(q_t(x)) + Dphi(q_t(x)) * 2v(1 - x^{2r}).
RealFn dL(const Pair& pair, RealFn omega, double v);

struct Lift {
  ChebSeries omega;
  double b = 0.0;
};

// Right inverse of DL at `base`: for w = psi(x^{2r}) with w(+-1) = 0 returns
// (omega, b) with DL(base)(omega, b) = w. w must accept complex arguments.
Lift F_lift(const ComplexFn& w, const Pair& base, int degree = kDefaultDegree);

// Sup over the grid of |L(a) - L(b)|.
double injectivity_probe(const Pair& a, const Pair& b);

}  // namespace renorm
