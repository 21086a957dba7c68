#pragma once

// Linearization of the decomposed operator at a fixed point, truncation-stable
// spectra, delta(alpha), and the comparison with the classic operator.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "renorm/records.hpp"
#include "renorm/solver.hpp"

namespace renorm {

struct SpectralOptions {
  double fd_step = 1e-6;
  std::vector<int> degrees{40, 60, 80};  // truncation-stability degrees
  double match_tol = 1e-6;               // relative, greedy pairing across degrees
  // Linearize through the exact tangent map; false uses central differences
  // with fd_step. Differences reach only the leading three eigenvalues at the
  // 1e-6 stability level because the left eigenvectors weight high modes.
  bool exact_tangent = true;
};

// Central-difference Jacobian of the operator in packed coordinates at the
// record. The step is halved (up to 4 times) when a perturbed pair loses its cycle.
Eigen::MatrixXd jacobian_matrix(const FixedPointRecord& record, double fd_step);

// Exact linearization at the record (see renormalize_tangent).
Eigen::MatrixXd tangent_jacobian(const FixedPointRecord& record);

// jacobian_matrix or tangent_jacobian according to options.
Eigen::MatrixXd linearization(const FixedPointRecord& record, const SpectralOptions& options);

// Dense eigen-decomposition; every eigenvalue is flagged stable.
SpectralReport spectrum(const Eigen::MatrixXd& matrix);

// flags[i] is true when base[i] has a partner within rel_tol * |base[i]| in
// every list of `others`, partners assigned greedily in modulus order.
std::vector<bool> truncation_stable(const std::vector<std::complex<double>>& base,
                                    const std::vector<std::vector<std::complex<double>>>& others, double rel_tol);

// Spectrum at the record's degree, with truncation stability decided by
// re-solving and re-linearizing at options.degrees.
SpectralReport analyze_fixed_point(const FixedPointRecord& record, const SpectralOptions& options = {});

struct DeltaPoint {
  double alpha = 0.0;
  double delta = 0.0;
  int expanding_count = 0;
  double t_star = 0.0;
  double residual = 0.0;
};

// delta along an alpha grid; each alpha is reached by continuation from the
// nearest previously solved point (the first from alpha = 2).
std::vector<DeltaPoint> delta_of_alpha(const std::vector<double>& alphas, const UnimodalPermutation& sigma,
                                       const NewtonOptions& newton = {}, const SpectralOptions& options = {});

// --- classic side, even alpha = 2r ---------------------------------------
// Even maps g(x) = G(2 x^{2r} - 1) with g(1) = -1 are stored through the
// Chebyshev coefficients of G; packed coordinates are c_1..c_N.

ChebSeries classic_series_of_pair(const Pair& pair, int degree);
UnimodalMap classic_map(const ChebSeries& g_series, int r);
Eigen::VectorXd classic_pack(const ChebSeries& g_series);
ChebSeries classic_unpack(const Eigen::VectorXd& v);
ChebSeries classic_unpack_tangent(const Eigen::VectorXd& dv);

// G of R(g) sampled at the Lobatto nodes of degree `degree`.
ChebSeries classic_renormalize_series(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma, int degree);

Eigen::MatrixXd classic_jacobian(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma, double fd_step);
Eigen::MatrixXd classic_tangent_jacobian(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma);

// DL at the pair applied to a packed tangent vector, in classic packed coordinates.
Eigen::VectorXcd dL_packed(const Pair& pair, const Eigen::VectorXcd& tangent, int degree);

struct SpectrumComparison {
  std::vector<std::complex<double>> pair_side;     // top truncation-stable nonzero eigenvalues
  std::vector<std::complex<double>> classic_side;
  std::vector<int> pair_multiplicity;
  std::vector<int> classic_multiplicity;
  double max_relative_difference = 0.0;
  double dominant_relative_difference = 0.0;
  double conjugation_residual = 0.0;  // |J_c DL v - lambda DL v| / |lambda DL v| for the top pair
  bool multiplicities_equal = false;

  bool passed(double tol) const {
    return multiplicities_equal && max_relative_difference <= tol && pair_side.size() == classic_side.size();
  }
};

SpectrumComparison spectrum_equality_check(const FixedPointRecord& record, int count = 5,
                                           const SpectralOptions& options = {});

}  // namespace renorm
