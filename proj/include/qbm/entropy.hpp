#ifndef QBM_ENTROPY_HPP
#define QBM_ENTROPY_HPP

#include <utility>
#include <vector>

#include "qbm/dynamics.hpp"
#include "qbm/gaussian_state.hpp"

namespace qbm {

// Reference/steady states with nbar below this cannot support the entropy
// functionals (they diverge); an evolving state may be pure, its entropy term
// is taken at the limit value 0.
inline constexpr double kMixedCutoff = 1e-8;

struct AsymptoteCoefficients {
  double slope = 0.0;      // sigma/omega ~ slope * d_xx + intercept as d_xx -> inf
  double intercept = 0.0;
};

struct EntropyReport {
  double s_rel = 0.0;                  // nats
  double sigma = 0.0;                  // sigma/omega
  std::optional<double> sigma_renormalized;
  double nbar_t = 0.0;
  double nbar_st = 0.0;
  AsymptoteCoefficients asymptote;
};

// Relative entropy S(state | reference) in nats for a reference with zero
// displacement (c4 = c5 = 0). Throws DivergentEntropyError when the reference
// is pure; a pure evolving state is fine (S finite).
double relative_entropy_to(const GaussianCVector& state, const GaussianCVector& reference);

// S(state | steady_state(coeffs)).
double relative_entropy(const GaussianCVector& state, const ModelCoefficients& coeffs);

// (tau, S) along the propagated trajectory.
std::vector<std::pair<double, double>> relative_entropy_trajectory(
    const GaussianCVector& state0, const ModelCoefficients& coeffs,
    std::span<const double> tau_grid);

// Entropy production sigma/omega = -dS/dtau at tau = 0, in closed form.
// Requires both state0 and the steady state mixed.
double entropy_production(const GaussianCVector& state0, const ModelCoefficients& coeffs);

// Specialization for an initial state that is the steady state displaced by
// (c4_0, c5_0): sigma is exactly linear in d_xx.
double entropy_production_displaced_squeezed(double c4_0, double c5_0,
                                             const ModelCoefficients& coeffs);

// sigma(d_xx) / sigma(dekker_min) for the displaced-squeezed family.
// Rejected for c4_0 = c5_0 = 0 (0/0 away from the Dekker minimum).
double sigma_renormalized(double c4_0, double c5_0, const ModelCoefficients& coeffs);

// Large-d_xx behavior of sigma for a fixed initial state:
//   slope     = 4 c3(0) log((nbar0+1)/nbar0) / (2 nbar0 + 1)
//   intercept = [4 d_pp c1(0) - 4 d_px c2(0) - gamma (2 nbar0+1)^2]
//               * log((nbar0+1)/nbar0) / (2 nbar0 + 1) - 2 gamma
AsymptoteCoefficients asymptote_coefficients(const GaussianCVector& state0,
                                             const ModelCoefficients& coeffs);

EntropyReport entropy_report(const GaussianCVector& state0, const ModelCoefficients& coeffs);

}  // namespace qbm

#endif
