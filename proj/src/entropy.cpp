#include "qbm/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "qbm/errors.hpp"

namespace qbm {

namespace {

// -(n+1) log(n+1) + n log n, continuous limit 0 at n = 0 (pure state).
double entropy_term(double n) {
  if (n <= 0.0) return 0.0;
  return -(n + 1.0) * std::log(n + 1.0) + n * std::log(n);
}

double log_ratio(double n) { return std::log((n + 1.0) / n); }

// Quadratic cross form of the relative-entropy formula; reference has
// c4 = c5 = 0.
double cross_form(const GaussianCVector& c, const GaussianCVector& ref) {
  return 2.0 * c.c1 * ref.c3 + 2.0 * c.c3 * ref.c1 - c.c2 * ref.c2 +
         ref.c1 * c.c5 * c.c5 + ref.c3 * c.c4 * c.c4 - c.c4 * c.c5 * ref.c2;
}

void require_mixed_reference(double nbar_ref, const char* who) {
  if (nbar_ref <= kMixedCutoff) {
    throw DivergentEntropyError(std::string(who) +
                                ": reference state is pure (nbar below cutoff), "
                                "the functional diverges");
  }
}

}  // namespace

double relative_entropy_to(const GaussianCVector& state, const GaussianCVector& reference) {
  if (std::abs(reference.c4) > 1e-12 || std::abs(reference.c5) > 1e-12) {
    throw std::invalid_argument("relative_entropy_to: reference must have c4 = c5 = 0");
  }
  if (!validate(state).valid || !validate(reference).valid) {
    throw std::invalid_argument("relative_entropy_to: invalid state");
  }
  const double n = nbar(state);
  const double nr = nbar(reference);
  require_mixed_reference(nr, "relative_entropy_to");
  const double weight = 2.0 * log_ratio(nr) / (2.0 * nr + 1.0);
  return entropy_term(n) + 0.5 * std::log((nr + 1.0) * nr) + weight * cross_form(state, reference);
}

double relative_entropy(const GaussianCVector& state, const ModelCoefficients& coeffs) {
  return relative_entropy_to(state, steady_state(coeffs));
}

std::vector<std::pair<double, double>> relative_entropy_trajectory(
    const GaussianCVector& state0, const ModelCoefficients& coeffs,
    std::span<const double> tau_grid) {
  const GaussianCVector st = steady_state(coeffs);
  require_mixed_reference(nbar(st), "relative_entropy_trajectory");
  const PropagationResult prop = propagate_analytic(state0, coeffs, tau_grid);
  std::vector<std::pair<double, double>> out;
  out.reserve(prop.tau.size());
  for (std::size_t i = 0; i < prop.tau.size(); ++i) {
    out.emplace_back(prop.tau[i], relative_entropy_to(prop.states[i], st));
  }
  return out;
}

double entropy_production(const GaussianCVector& state0, const ModelCoefficients& coeffs) {
  if (!validate(state0).valid) throw std::invalid_argument("entropy_production: invalid state");
  const GaussianCVector st = steady_state(coeffs);
  const double n0 = nbar(state0);
  const double nst = nbar(st);
  require_mixed_reference(nst, "entropy_production");
  if (n0 <= kMixedCutoff) {
    throw DivergentEntropyError("entropy_production: initial state is pure, sigma diverges");
  }

  const double g = coeffs.gamma;
  const Vector6d cd = ode_rhs(state0, coeffs);
  const double two_n0_p1 = 2.0 * n0 + 1.0;
  // d nbar / d tau through 4 c1 c3 - c2^2
  const double nbar_rate = (4.0 * coeffs.d_pp * state0.c1 - 4.0 * coeffs.d_px * state0.c2 +
                            4.0 * coeffs.dxx() * state0.c3 - g * two_n0_p1 * two_n0_p1) /
                           two_n0_p1;
  // d/dtau of the cross form
  const double cross_rate = 2.0 * cd[0] * st.c3 + 2.0 * cd[2] * st.c1 - cd[1] * st.c2 +
                            2.0 * st.c1 * state0.c5 * cd[4] + 2.0 * st.c3 * state0.c4 * cd[3] -
                            (cd[3] * state0.c5 + state0.c4 * cd[4]) * st.c2;
  const double weight = 2.0 * log_ratio(nst) / (2.0 * nst + 1.0);
  return log_ratio(n0) * nbar_rate - weight * cross_rate;
}

double entropy_production_displaced_squeezed(double c4_0, double c5_0,
                                             const ModelCoefficients& coeffs) {
  const GaussianCVector st = steady_state(coeffs);
  const double nst = nbar(st);
  require_mixed_reference(nst, "entropy_production_displaced_squeezed");
  const double g = coeffs.gamma;
  const double shifted = c4_0 + 4.0 * g * c5_0;
  const double bracket = 16.0 * coeffs.d_pp * c5_0 * c5_0 +
                         8.0 * coeffs.d_px * c5_0 * shifted +
                         coeffs.dxx() * shifted * shifted;
  return bracket * log_ratio(nst) / (4.0 * nst + 2.0);
}

double sigma_renormalized(double c4_0, double c5_0, const ModelCoefficients& coeffs) {
  if (c4_0 == 0.0 && c5_0 == 0.0) {
    throw std::invalid_argument("sigma_renormalized: undefined for c4 = c5 = 0 (0/0)");
  }
  const double dmin = dekker_min(coeffs);
  const double denom = entropy_production_displaced_squeezed(c4_0, c5_0, coeffs.with_dxx(dmin));
  if (denom == 0.0) {
    throw std::invalid_argument("sigma_renormalized: sigma vanishes at the Dekker minimum");
  }
  return entropy_production_displaced_squeezed(c4_0, c5_0, coeffs) / denom;
}

AsymptoteCoefficients asymptote_coefficients(const GaussianCVector& state0,
                                             const ModelCoefficients& coeffs) {
  if (!validate(state0).valid) throw std::invalid_argument("asymptote_coefficients: invalid state");
  const double n0 = nbar(state0);
  if (n0 <= kMixedCutoff) {
    throw DivergentEntropyError("asymptote_coefficients: initial state is pure");
  }
  const double two_n0_p1 = 2.0 * n0 + 1.0;
  AsymptoteCoefficients out;
  out.slope = 4.0 * state0.c3 * log_ratio(n0) / two_n0_p1;
  out.intercept = (4.0 * coeffs.d_pp * state0.c1 - 4.0 * coeffs.d_px * state0.c2 -
                   coeffs.gamma * two_n0_p1 * two_n0_p1) *
                      log_ratio(n0) / two_n0_p1 -
                  2.0 * coeffs.gamma;
  return out;
}

EntropyReport entropy_report(const GaussianCVector& state0, const ModelCoefficients& coeffs) {
  EntropyReport report;
  const GaussianCVector st = steady_state(coeffs);
  report.nbar_t = nbar(state0);
  report.nbar_st = nbar(st);
  report.s_rel = relative_entropy_to(state0, st);
  report.sigma = entropy_production(state0, coeffs);
  report.asymptote = asymptote_coefficients(state0, coeffs);
  // For a displaced steady state the renormalized production is well defined.
  const bool displaced_steady = std::abs(state0.c1 - st.c1) < 1e-12 &&
                                std::abs(state0.c2 - st.c2) < 1e-12 &&
                                std::abs(state0.c3 - st.c3) < 1e-12 &&
                                (state0.c4 != 0.0 || state0.c5 != 0.0);
  if (displaced_steady) {
    report.sigma_renormalized = sigma_renormalized(state0.c4, state0.c5, coeffs);
  }
  return report;
}

}  // namespace qbm
