#ifndef QBM_DXX_SOLVER_HPP
#define QBM_DXX_SOLVER_HPP

#include <utility>
#include <variant>
#include <vector>

#include "qbm/dynamics.hpp"
#include "qbm/gaussian_state.hpp"

namespace qbm {

enum class ExtremumKind { global_max, global_min };
enum class Regime { displaced_squeezed, near_steady, unrelated };

struct SearchDiagnostics {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double stationarity_residual = 0.0;  // |dsigma/dD| / local scale; 0 when clamped
  double reference = 0.0;              // high-temperature closed-form estimate
  double reference_gap = 0.0;          // |dxx - reference| / reference
  bool fallback_search = false;        // polynomial route failed, direct search used
  bool hightemp_warning = false;       // temperature not >> 1
};

struct ExtremumResult {
  double dxx = 0.0;
  ExtremumKind kind = ExtremumKind::global_max;
  bool clamped = false;  // extremum fell below the Dekker minimum
  Regime regime = Regime::displaced_squeezed;
  SearchDiagnostics diagnostics;
};

// The three initial-condition families.
struct DisplacedSqueezed {
  double c4_0 = 0.0;
  double c5_0 = 0.0;
};
struct NearSteady {
  double x = 0.0;  // offset added to the stationary c1, c2, c3
  double y = 0.0;  // optional displacement c4(0) = c5(0) = y
};
struct Unrelated {
  double x = 0.0;  // c1(0) = c3(0) = x >> 1
};
using InitialConditionFamily = std::variant<DisplacedSqueezed, NearSteady, Unrelated>;

// The concrete c-vector a family generates for a given coefficient set
// (d_xx must be set; the first two families are tied to the steady state).
GaussianCVector make_initial_state(const InitialConditionFamily& family,
                                   const ModelCoefficients& coeffs);

// The two d_xx values at which the steady state becomes pure
// (roots of 4 c1st c3st - c2st^2 = 1/4), returned as (lower, upper).
// Both lie strictly below the Dekker minimum for gamma, d_pp > 0.
std::pair<double, double> pure_steady_roots(const ModelCoefficients& coeffs);

// The c4/c5-maximized renormalized entropy production up to a constant:
// f(d_xx) = d_xx * arcoth(2 nbar_st + 1) / (2 nbar_st + 1).
double displaced_squeezed_objective(double dxx, const ModelCoefficients& coeffs);

// Locate the global maximum of f on [dekker_min, inf) by exact 1-D search; the
// reported reference is 4 gamma T sqrt(1 + 2 gamma omega_ratio). Requires
// coeffs.temperature.
ExtremumResult solve_displaced_squeezed(const ModelCoefficients& coeffs);

// Initial state in the close vicinity of the steady state (offset x):
// maximizes the leading-order entropy production with the high-temperature
// log approximation; stationarity is a cubic solved via companion matrix.
// Clamps to dekker_min when the maximum falls at the boundary.
ExtremumResult solve_near_steady(const ModelCoefficients& coeffs, double x);

// Initial state unrelated to the steady state (c1 = c3 = x >> 1, enforced
// x >= 10): minimizes the log-approximated entropy production; stationarity
// is the quartic in y = d_xx/(gamma T), cross-checked against direct search
// (disagreement above 1% raises SolverDiagnosticError).
ExtremumResult solve_unrelated(const ModelCoefficients& coeffs, double x);

// Dispatch on the family after checking the large-d_xx classification
// (growing sigma => minimize; bounded/vanishing => maximize).
ExtremumResult classify_and_solve(const InitialConditionFamily& family,
                                  const ModelCoefficients& coeffs);

struct SigmaSample {
  double dxx = 0.0;
  double sigma = 0.0;
  bool valid = true;  // false marks a skipped pure-steady-state grid point
};

// sigma over a d_xx grid for a fixed initial state; the steady state is
// recomputed per grid point. Grid values below dekker_min are rejected.
std::vector<SigmaSample> scan_sigma(const GaussianCVector& state0,
                                    const ModelCoefficients& coeffs,
                                    std::span<const double> dxx_grid);

// Same, with the family's state regenerated per grid point (the first two
// families depend on d_xx through the steady state).
std::vector<SigmaSample> scan_sigma_family(const InitialConditionFamily& family,
                                           const ModelCoefficients& coeffs,
                                           std::span<const double> dxx_grid);

}  // namespace qbm

#endif
