#pragma once

// Superstable parameters, the Newton fixed-point solver for the decomposed
// operator, continuation in the critical exponent and orbit iteration.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "renorm/records.hpp"
#include "renorm/renorm.hpp"

namespace renorm {

// t in [lo, hi] with (phi o q_t)^q(0) = 0. Throws DomainError when f_t^q(0)
// has no sign change over the bracket.
double find_superstable_t(const PolyDiffeo& phi, double alpha, int q, double lo, double hi);

// Superstable parameter in [lo, hi] whose critical orbit has combinatorics sigma.
std::optional<double> superstable_with_combinatorics(const PolyDiffeo& phi, double alpha,
                                                     const UnimodalPermutation& sigma, double lo, double hi,
                                                     int samples = 1000);

// Superstable parameters for sigma, sigma*sigma, ..., sigma^{*levels}.
std::vector<double> superstable_cascade(const PolyDiffeo& phi, double alpha, const UnimodalPermutation& sigma,
                                        int levels);

struct NewtonOptions {
  int degree = kDefaultDegree;
  int coarse_degree = 40;   // first solve
  int confirm_degree = 80;  // residual re-measured here; must not grow more than 10x
  double tolerance = 1e-10;
  int max_steps = 50;
  double fd_step = 1e-7;
  int seed_depth = 6;       // superstable parameter of sigma^{*seed_depth} seeds t
  int seed_iterations = 3;  // forward applications of the operator before Newton
};

// Coordinates used by Newton and the Jacobian: interior Chebyshev coefficients
// c_2..c_N of phi (c_0, c_1 follow from phi(+-1) = +-1) followed by t.
Eigen::VectorXd pack_pair(const Pair& pair);
Pair unpack_pair(const Eigen::VectorXd& u, double alpha);
// Tangent version: the phi part of a packed perturbation (vanishing at +-1);
// the trailing t slot is ignored.
ChebSeries unpack_tangent(const Eigen::VectorXd& du);

// Coefficient image of the operator in packed coordinates.
Eigen::VectorXd renormalize_packed(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                   int degree);

// Central-difference Jacobian of renormalize_packed at u. Column j uses the
// step fd_step * max(1, |u_j|).
Eigen::MatrixXd packed_jacobian(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                int degree, double fd_step);

// Exact linearization of renormalize_packed at u, column by column through
// renormalize_tangent.
Eigen::MatrixXd packed_tangent_jacobian(const Eigen::VectorXd& u, double alpha, const UnimodalPermutation& sigma,
                                        int degree);

// max(sup |Phi - phi|, |t' - t|) for (Phi, t') = R(phi, t).
double fixed_point_residual(const Pair& pair, const UnimodalPermutation& sigma, int degree);

// Fixed point of the operator with combinatorics sigma. When init is empty the
// seed is (id, superstable t for sigma^{*seed_depth}) iterated forward.
// Throws NumericError on divergence or when the cycle is lost.
FixedPointRecord fixed_point(double alpha, const UnimodalPermutation& sigma, const std::optional<Pair>& init = {},
                             const NewtonOptions& options = {});

// Marches alpha toward alpha_target in increments <= step, re-solving at each
// stop from the previous solution. Throws NumericError naming the failing alpha.
FixedPointRecord continue_in_alpha(const FixedPointRecord& from, double alpha_target, double step,
                                   const NewtonOptions& options = {});

struct OrbitPoint {
  int index = 0;
  double phi_distance = 0.0;  // sup |phi_n - phi*|
  double t_distance = 0.0;    // |t_n - t*|
  double distance() const { return std::max(phi_distance, t_distance); }
};

struct OrbitReport {
  std::vector<OrbitPoint> points;
  std::vector<Pair> pairs;
  bool complete = true;  // false when renormalizability was lost before n

  // d_{i+1} / d_i for i >= burn_in.
  std::vector<double> contraction_ratios(int burn_in) const;
  // exp of the least-squares slope of log d_i over first <= i <= last. Single
  // ratios oscillate when the subdominant eigenvalues are close in modulus.
  double contraction_factor(int first, int last) const;
};

OrbitReport iterate_orbit(const Pair& pair, const UnimodalPermutation& sigma, int n,
                          const FixedPointRecord& reference, int degree = kDefaultDegree);

// Parameter t placing (phi, t) on the stable manifold of the reference fixed
// point: solves t_k(t) = t* for the k-th renormalization, k = 1..depth.
double stable_manifold_t(const PolyDiffeo& phi, const FixedPointRecord& reference, int depth = 8);

}  // namespace renorm
