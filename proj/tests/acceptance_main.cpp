// Acceptance suite: each check prints one PASS/FAIL line with the measured
// numbers; the process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qbm/dxx_solver.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/entropy.hpp"
#include "qbm/errors.hpp"
#include "qbm/gaussian_state.hpp"
#include "qbm/numerics.hpp"
#include "qbm/spectral.hpp"

using namespace qbm;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GaussianCVector random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s = 0.6 + 1.9 * u(rng);
  const double c1 = 0.3 + 1.7 * u(rng);
  const double c2 = -1.0 + 2.0 * u(rng);
  GaussianCVector c;
  c.c1 = c1;
  c.c2 = c2;
  c.c3 = (s * s + c2 * c2) / (4.0 * c1);
  c.c4 = -2.0 + 4.0 * u(rng);
  c.c5 = -2.0 + 4.0 * u(rng);
  return c;
}

ModelCoefficients random_coeffs(std::mt19937& rng, double gamma_lo, double gamma_hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelCoefficients c;
  c.gamma = gamma_lo + (gamma_hi - gamma_lo) * u(rng);
  c.d_pp = 0.3 + 5.7 * u(rng);
  c.d_px = 0.4 * u(rng);
  c.d_xx = dekker_min(c) * (1.0 + 5.0 * u(rng));
  return c;
}

// 1. Analytic propagation vs RK4 to 1e-8 absolute on c1..c5.
void criterion_propagator_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (double gamma : {0.1, 0.5, 2.0, 10.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      ModelCoefficients c;
      c.gamma = gamma;
      c.d_pp = 0.3 + 4.0 * u(rng);
      c.d_px = 0.3 * u(rng);
      c.d_xx = dekker_min(c) * (1.0 + 3.0 * u(rng));
      const auto s0 = random_state(rng);
      const auto grid = numerics::linear_grid(0.0, 10.0, 21);
      const auto ana = propagate_analytic(s0, c, grid);
      const auto num = propagate_numeric(s0, c, grid, 1e-4);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::Matrix<double, 5, 1> diff =
            (ana.states[i].vec() - num.states[i].vec()).head(5);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      }
    }
  }
  const double elapsed = seconds_since(t0);
  char detail[160];
  std::snprintf(detail, sizeof(detail), "max |analytic - RK4| = %.3g (tol 1e-8), %.1f s (limit 10 s)",
                worst, elapsed);
  report(1, "propagator oracle", worst <= 1e-8 && elapsed < 10.0, detail);
}

// 2. Steady state is a fixed point of both propagators.
void criterion_fixed_point() {
  std::mt19937 rng(103);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_coeffs(rng, 0.2, 5.0);
    const auto st = steady_state(c);
    const auto grid = numerics::linear_grid(0.0, 10.0, 11);
    const auto ana = propagate_analytic(st, c, grid);
    const auto num = propagate_numeric(st, c, grid, default_rk4_step(c.gamma));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, (ana.states[i].vec() - st.vec()).cwiseAbs().maxCoeff());
      worst = std::max(worst, (num.states[i].vec() - st.vec()).cwiseAbs().maxCoeff());
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "sup drift = %.3g (tol 1e-10)", worst);
  report(2, "steady-state fixed point", worst < 1e-10, detail);
}

// 3. Closed-form entropy production vs Richardson finite difference.
void criterion_sigma_oracle() {
  std::mt19937 rng(107);
  double worst_rel = 0.0, worst_neg = 0.0, worst_steady = 0.0;
  int tested = 0;
  while (tested < 200) {
    const auto c = random_coeffs(rng, 0.2, 4.0);
    if (std::abs(c.gamma * c.gamma - 1.0) < kDegenerateWindow) continue;
    ++tested;
    const auto s0 = random_state(rng);
    const auto st = steady_state(c);
    const double closed = entropy_production(s0, c);
    const double s_now = relative_entropy_to(s0, st);
    const auto s_at = [&](double tau) {
      return relative_entropy_to(analytic_state_at(s0, c, tau), st);
    };
    const double h = 1e-5;
    const double d1 = -(s_at(h) - s_now) / h;
    const double d2 = -(s_at(h / 2.0) - s_now) / (h / 2.0);
    const double fd = 2.0 * d2 - d1;
    worst_rel = std::max(worst_rel,
                         std::abs(closed - fd) / std::max(std::abs(closed), 1e-12));
    worst_neg = std::min(worst_neg, closed);
    worst_steady = std::max(worst_steady, std::abs(entropy_production(st, c)));
  }
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "max rel dev = %.3g (tol 1e-6); min sigma = %.3g (>= -1e-9); "
                "max |sigma(steady)| = %.3g (tol 1e-10)",
                worst_rel, worst_neg, worst_steady);
  report(3, "entropy-production oracle",
         worst_rel <= 1e-6 && worst_neg >= -1e-9 && worst_steady <= 1e-10, detail);
}

// 4. Monotone decay of the relative entropy; critical damping is fastest.
void criterion_monotone_decay() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string note;
  for (const bool coherent : {true, false}) {
    const GaussianCVector s0 =
        coherent ? coherent_state({2.0, 2.0}) : thermal_state(2.0);
    double crossing[3] = {0, 0, 0};
    const double gammas[3] = {0.1, 1.0, 10.0};
    for (int k = 0; k < 3; ++k) {
      const double gamma = gammas[k];
      ModelCoefficients c;
      c.gamma = gamma;
      c.d_pp = 10.0;
      c.d_px = 1.0;
      c.d_xx = dekker_min(c);
      const double slowest_rate =
          gamma <= 1.0 ? gamma : gamma - std::sqrt(gamma * gamma - 1.0);
      const double tau_max = 60.0 / slowest_rate;
      const auto grid = numerics::linear_grid(0.0, tau_max, 2500);
      const auto traj = relative_entropy_trajectory(s0, c, grid);
      const double s_init = traj.front().second;
      double cross = -1.0;
      for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj[i].second > traj[i - 1].second + 1e-9) {
          pass = false;
          note += " non-monotone at gamma=" + std::to_string(gamma) + ";";
        }
        if (cross < 0.0 && traj[i].second <= 1e-3 * s_init) cross = traj[i].first;
      }
      if (cross < 0.0) {
        pass = false;
        note += " no 1e-3 crossing for gamma=" + std::to_string(gamma) + ";";
        cross = tau_max;
      }
      crossing[k] = cross;
    }
    if (!(crossing[1] < crossing[0] && crossing[1] < crossing[2])) {
      pass = false;
      note += coherent ? " coherent ordering broken;" : " thermal ordering broken;";
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 30.0) pass = false;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%s %.1f s (limit 30 s)",
                note.empty() ? "monotone, crossings ordered," : note.c_str(), elapsed);
  report(4, "relative-entropy decay", pass, detail);
}

// 5. Purity roots sit below the Dekker minimum; the upper root gives a pure steady state.
void criterion_root_structure() {
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_gap = 0.0;
  bool ordered = true;
  for (int trial = 0; trial < 10000; ++trial) {
    ModelCoefficients c;
    c.gamma = 0.2 + 1.8 * u(rng);
    c.d_pp = 0.1 + 4.9 * u(rng);
    c.d_px = 0.5 * u(rng);
    const auto [lo, hi] = pure_steady_roots(c);
    if (dekker_min(c) < hi) ordered = false;
    worst_gap = std::max(
        worst_gap, std::abs(purity_invariant(steady_state(c.with_dxx(hi))) - 0.25));
    (void)lo;
  }
  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "dekker_min >= upper root on 10^4 draws: %s; max |purity-1/4| = %.3g (tol 1e-10)",
                ordered ? "yes" : "NO", worst_gap);
  report(5, "pure-steady-root structure", ordered && worst_gap <= 1e-10, detail);
}

// 6. Displaced-squeezed argmax vs the high-temperature closed form.
void criterion_headline() {
  double worst = 0.0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double t : {50.0, 100.0, 200.0}) {
      const auto coeffs = high_temp_coefficients(gamma, t, 0.1);
      const auto r = solve_displaced_squeezed(coeffs);
      worst = std::max(worst, r.diagnostics.reference_gap);
    }
  }
  const auto tall = solve_displaced_squeezed(high_temp_coefficients(1.0, 1000.0, 0.1));
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max gap = %.3g (tol 0.05); gap at T'=1000: %.3g (tol 0.01)", worst,
                tall.diagnostics.reference_gap);
  report(6, "headline displaced-squeezed selection",
         worst <= 0.05 && tall.diagnostics.reference_gap <= 0.01, detail);
}

// 7. Regime table for the near-steady and unrelated solvers.
void criterion_regime_table() {
  const auto c1 = high_temp_coefficients(1.0, 100.0, 0.1);
  const auto r1 = solve_near_steady(c1, 0.1);
  const bool clamp_ok = r1.clamped && r1.dxx == dekker_min(c1);

  const auto c4 = high_temp_coefficients(4.0, 100.0, 0.1);
  const auto r4 = solve_near_steady(c4, 0.1);
  const bool interior_ok = !r4.clamped && std::abs(r4.dxx - 100.0) / 100.0 <= 0.20;

  const auto u100 = solve_unrelated(high_temp_coefficients(1.0, 100.0, 0.1), 50.0);
  const auto u150c = high_temp_coefficients(1.0, 150.0, 0.1);
  const auto u150 = solve_unrelated(u150c, 50.0);
  const bool unrelated_ok =
      !u100.clamped && u100.dxx > dekker_min(high_temp_coefficients(1.0, 100.0, 0.1)) &&
      u150.clamped && u150.dxx == dekker_min(u150c);

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "near-steady gamma=1: %s; gamma=4: dxx=%.2f (|gap to 100| = %.0f%%); "
                "unrelated T'=100: dxx=%.2f interior, T'=150: clamped=%s",
                clamp_ok ? "clamped" : "NOT clamped", r4.dxx,
                100.0 * std::abs(r4.dxx - 100.0) / 100.0, u100.dxx,
                u150.clamped ? "yes" : "NO");
  report(7, "regime table", clamp_ok && interior_ok && unrelated_ok, detail);
}

// 8. Spectral consistency between the two eigenvalue routes plus quadrature checks.
void criterion_spectral() {
  std::mt19937 rng(113);
  double worst_eig = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = random_state(rng);
    const auto sys = eigendecompose(to_position_kernel(state), 12);
    const auto lam = spectrum(state, 12);
    for (int n = 0; n <= 12; ++n) {
      worst_eig = std::max(worst_eig,
                           std::abs(sys.eigenvalue(n) - lam[static_cast<std::size_t>(n)]));
    }
  }

  double worst_resid = 0.0;
  const GaussianCVector displaced{0.9, 0.35, 0.5, 1.2, -0.7, 0.0};
  for (const auto& state : {thermal_state(2.0), displaced}) {
    const auto kernel = to_position_kernel(state);
    const auto sys = eigendecompose(kernel, 6);
    for (int n = 0; n <= 5; ++n) {
      worst_resid = std::max(worst_resid, verify_eigenpair(kernel, sys, n));
    }
  }

  double worst_gram = 0.0;
  for (const auto& state : {thermal_state(2.0), displaced}) {
    const auto kernel = to_position_kernel(state);
    const auto sys = eigendecompose(kernel, 6);
    const double sigma_eff = std::pow(16.0 * kernel.A * kernel.C, -0.25);
    const double center = -sys.kappa;
    const double half = 10.0 * sigma_eff;
    const auto& gl = numerics::gauss_legendre(4000);
    for (int n = 0; n <= 6; ++n) {
      for (int m = n; m <= 6; ++m) {
        std::complex<double> gram = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
          const double x = center + half * gl.nodes[q];
          gram += gl.weights[q] * std::conj(eigenfunction(sys, n, x)) *
                  eigenfunction(sys, m, x);
        }
        gram *= half;
        worst_gram = std::max(worst_gram, std::abs(gram - ((n == m) ? 1.0 : 0.0)));
      }
    }
  }

  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "max |eps_n - lambda_n| = %.3g (tol 1e-10); max residual = %.3g (tol 1e-6); "
                "max |Gram - I| = %.3g (tol 1e-6)",
                worst_eig, worst_resid, worst_gram);
  report(8, "spectral consistency",
         worst_eig <= 1e-10 && worst_resid <= 1e-6 && worst_gram <= 1e-6, detail);
}

// 9. Closed-form spot checks.
void criterion_spot_checks() {
  ModelCoefficients c;
  c.gamma = 1.0;
  c.d_pp = 2.0;
  c.d_px = 0.2;
  const double dmin = dekker_min(c);
  const auto st = steady_state(c.with_dxx(0.145));
  const double nst = nbar(st);
  const double e1 = std::abs(dmin - 0.145);
  const double e2 = std::max({std::abs(st.c1 - 2.58125), std::abs(st.c2 + 0.0725),
                              std::abs(st.c3 - 0.5090625)});
  const double e3 = std::abs(nst - 1.7914654835934143);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "|dekker_min - 0.145| = %.2g; steady-state max dev = %.2g; "
                "|nbar_st - 1.79146548| = %.2g (tol 1e-9)",
                e1, e2, e3);
  report(9, "exact-value spot checks", e1 < 1e-9 && e2 < 1e-9 && e3 < 1e-9, detail);
}

// Informational only: leading digits of the stationary-point expansion at
// critical damping (checked to the two digits given; not gating).
void informational_expansion() {
  const auto root_at = [](double c) {
    Eigen::VectorXd w(3);
    w << 16.0, 24.0, 1.0;
    Eigen::VectorXd v(3);
    v << 112.0, 32.0, 17.0;
    return numerics::real_roots(
               numerics::polyadd(numerics::polymul(w, w), Eigen::VectorXd(-16.0 * c * c * v)))
        .back();
  };
  const double y0 = root_at(0.005), y1 = root_at(0.01), y2 = root_at(0.02);
  Eigen::Matrix3d vander;
  vander << 1, 0.005, 0.005 * 0.005, 1, 0.01, 0.01 * 0.01, 1, 0.02, 0.02 * 0.02;
  const Eigen::Vector3d coef = vander.colPivHouseholderQr().solve(Eigen::Vector3d(y0, y1, y2));
  std::printf(
      "INFO  critically damped stationary-point expansion: y(c) = %.4f + %.4f c + O(c^2) "
      "[two-digit reference: -0.68 + 1.75 c]\n",
      coef[0], coef[1]);
}

}  // namespace

int main() {
  criterion_propagator_oracle();
  criterion_fixed_point();
  criterion_sigma_oracle();
  criterion_monotone_decay();
  criterion_root_structure();
  criterion_headline();
  criterion_regime_table();
  criterion_spectral();
  criterion_spot_checks();
  informational_expansion();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures;
}
