#pragma once

// Empirical side of the a priori bounds: real-bounds ratios of nested cycles,
// decay of the decomposition pieces, a univalence screen on stadia and the
// near-identity estimates for univalent maps. Every constant the theory leaves
// unspecified comes out of here as a measured number.

#include <iosfwd>
#include <string>
#include <span>
#include <vector>

#include "renorm/renorm.hpp"

namespace renorm {

// A pair with its nested cycles for sigma, sigma*sigma, ... and their level sets.
struct NestedOrbit {
  Pair pair;
  std::vector<Cycle> cycles;  // cycles[n - 1] is the n-th cycle
  LevelSets levels;

  int depth() const { return static_cast<int>(cycles.size()); }
};

// Throws NumericError when fewer than `depth` nested cycles are found.
NestedOrbit nested_orbit(const Pair& pair, const UnimodalPermutation& sigma, int depth);

// --- real bounds ----------------------------------------------------------

struct LevelRatios {
  int n = 0;                   // parent level; n = 0 is [-1,1]
  std::vector<double> child;   // |I^{n+1}_i| / |I^n_j| for I^{n+1}_i inside I^n_j
  std::vector<double> gap;     // |J| / |I^n_j| for components J of I^n_j minus the children
  double central_ratio = 0.0;  // |I_0^{n+1}| / |I_0^n|, I_0 the interval containing 0
};

struct RealBoundsReport {
  std::vector<LevelRatios> levels;
  double min_ratio = 1.0;
  double max_ratio = 0.0;
  double b = 0.5;  // min over all ratios r and 1 - r

  const LevelRatios& level(int n) const;
  // Every ratio at parent levels first..last lies in (lo, hi).
  bool within(double lo, double hi, int first, int last) const;
};

// Gaps shorter than kGapFloor * |parent| are treated as empty.
// Endpoints that coincide by construction come from independent root solves,
// so they agree only to rounding relative to |I^n_j|.
inline constexpr double kGapFloor = 1e-6;

// Ratios for parent levels 0..cycles.size()-1. Throws DomainError on a
// nesting violation.
RealBoundsReport real_bounds_report(std::span<const Cycle> cycles);

// --- decomposition decay ----------------------------------------------------

struct StadiumGrid {
  int boundary_points = 64;
  int layers = 16;
};

struct DecayLevel {
  int n = 0;
  double phi_real = 0.0;  // sum_j |phi_j^n - id| on [-1,1]
  double phi_stadium = 0.0;
  std::vector<double> q_real;  // q_real[k] = sum over L_k^n of |q_j^n - id|; k = 0 is always empty
  std::vector<double> q_stadium;
};

struct DecayReport {
  double radius = 0.05;
  std::vector<DecayLevel> levels;
  double phi_slope = 0.0;  // least-squares slope of log phi_stadium against n

  const DecayLevel& level(int n) const;
  // q_stadium[k] strictly decreasing over k = 1..n.
  bool q_strictly_decreasing(int n) const;
};

// A piece of the level-n decomposition evaluated off the real line through phi
// and q_t themselves. The interpolated pieces of decompose_with_cycle carry
// rounding of order eps / |I|, which their extension to a stadium amplifies.
struct ComplexPiece {
  ComplexFn f;
  ComplexFn df;
};

// phi_0, q_1, phi_1, ..., q_{q-1}, phi_{q-1} in the order of DecomposedStep::pieces.
std::vector<ComplexPiece> decomposition_pieces(const Pair& pair, const Cycle& cycle);

// Sums for levels first..last (last <= orbit depth). Throws DomainError when
// fewer than four levels are requested.
DecayReport decomposition_decay(const NestedOrbit& orbit, int first, int last, double radius = 0.05,
                                const StadiumGrid& grid = {});

// sup |f(z) - z| over the real check grid together with the stadium layers.
double stadium_distance_to_identity(const ComplexFn& f, double radius, const StadiumGrid& grid = {});

// --- univalence screen ---------------------------------------------------------

// Screen, not a proof: on every layer curve of the stadium the derivative has
// no zero and winds zero times around 0, and the image polygon is simple and
// winds once around the image of the base midpoint. The series is evaluated
// with its rounding-level tail removed.
bool univalence_check(const ComplexFn& f, const ComplexFn& df, const Stadium& stadium, const StadiumGrid& grid = {});
bool univalence_check(const ChebSeries& f, const Stadium& stadium, const StadiumGrid& grid = {});
bool univalence_check(const PolyDiffeo& phi, const Stadium& stadium, const StadiumGrid& grid = {});

// Series with coefficients after the last one above rel_tol * max |c_k| dropped.
ChebSeries chop_tail(const ChebSeries& f, double rel_tol = 1e-14);

// --- stadium propagation ------------------------------------------------------------

// e^{-K dist} rho_psi.
double stadium_propagation(double dist_to_id, double rho_psi, double K);

// Largest rho <= rho_max with f(D_rho) inside D_target, by halving then
// bisection to `resolution`. Zero when even the smallest radius fails.
double safe_radius(const ComplexFn& f, double target, double rho_max, double resolution = 1e-4,
                   int boundary_points = 256);

struct PropagationReport {
  double rho_psi = 0.0;   // radius of the stadium the pieces must land in
  double e0_radius = 0.0; // stadium on which |phi - id| is measured
  int calibration_level = 0;
  int test_level = 0;
  double K = 0.0;  // smallest K making the bound hold at the calibration level
  int tested = 0;
  int violations = 0;       // pieces at the test level with predicted > measured
  double worst_margin = 0.0;  // min over tested pieces of measured - predicted

  bool passed() const { return tested > 0 && violations == 0; }
};

// Calibrates K on the diffeomorphic pieces at one level and tests the
// predicted radii on the pieces of another level.
PropagationReport propagation_check(const NestedOrbit& orbit, int calibration_level, int test_level,
                                    double rho_psi = 0.1, double e0_radius = 0.2);

// --- near-identity estimate ------------------------------------------------------

struct NearIdentitySample {
  std::string family;   // "mobius", "quadratic" or "odd-cubic"
  double parameter = 0.0;
  double K = 0.0;
  double epsilon = 0.0;
  double distance = 0.0;  // sup |phi - id| on B(0, epsilon)
  double ratio = 0.0;     // distance / (epsilon / K)
  double halving = 0.0;   // distance at 2K divided by distance at K
};

struct NearIdentityReport {
  std::vector<NearIdentitySample> samples;
  double max_ratio = 0.0;  // the measured O(.) constant
  int rejected = 0;        // test maps that were not univalent on B(0, K)

  // Distances of first-order families at 2K are within 25% of half those at K.
  bool halving_ok() const;
};

// Test maps K psi(z / K), renormalized to fix +-1, for psi univalent on the
// unit disk: Mobius w / (1 - a w), w + c w^2 and the odd w + c w^3.
NearIdentityReport near_identity_bound_check(double K, double epsilon);

// --- output ----------------------------------------------------------------

// alpha,n,kind,index,value rows with 17 significant digits.
void write_bounds_csv(std::ostream& out, double alpha, const RealBoundsReport& ratios, const DecayReport& decay);

}  // namespace renorm
