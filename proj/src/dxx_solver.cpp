#include "qbm/dxx_solver.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qbm/entropy.hpp"
#include "qbm/errors.hpp"
#include "qbm/numerics.hpp"

namespace qbm {

namespace {

double arcoth(double z) { return 0.5 * std::log((z + 1.0) / (z - 1.0)); }

// 4 c1st c3st - c2st^2 as a quadratic polynomial in d_xx (ascending coeffs).
Eigen::VectorXd steady_purity_poly(const ModelCoefficients& c) {
  const double g = c.gamma, dpp = c.d_pp, dpx = c.d_px;
  Eigen::VectorXd p(3);
  p << (16.0 * dpp * dpp + 32.0 * g * dpp * dpx) / (16.0 * g * g),
      (8.0 * dpp * (1.0 + 2.0 * g * g) + 8.0 * g * dpx) / (16.0 * g * g),
      1.0 / (16.0 * g * g);
  return p;
}

double temperature_of(const ModelCoefficients& coeffs, const char* who) {
  if (!coeffs.temperature) {
    throw std::invalid_argument(std::string(who) + ": coefficients carry no temperature "
                                                   "(build them with high_temp_coefficients)");
  }
  return *coeffs.temperature;
}

// |f'| at the extremum against the local slope scale max(|f|, variation)/x;
// the variation term keeps the measure meaningful when f crosses zero.
double stationarity_residual(const std::function<double(double)>& f, double x) {
  const double h = 1e-4 * std::max(1.0, std::abs(x));
  const double d = numerics::derivative(f, x, h);
  const double fx = f(x);
  const double variation = std::abs(f(1.5 * x) - fx) + std::abs(f(x / 1.5) - fx);
  const double scale = std::max(std::abs(fx), variation) / std::max(std::abs(x), 1.0);
  return std::abs(d) / std::max(scale, 1e-300);
}

// Function comparisons locate an extremum only to sqrt(eps) relative; polish
// it by bisecting the finite-difference derivative.
double polish_stationary(const std::function<double(double)>& f, double x0) {
  const auto slope = [&](double x) {
    return numerics::derivative(f, x, 1e-4 * std::max(1.0, std::abs(x)));
  };
  double lo = x0 * (1.0 - 1e-4), hi = x0 * (1.0 + 1e-4);
  double slo = slope(lo), shi = slope(hi);
  for (int widen = 0; widen < 20 && slo * shi > 0.0; ++widen) {
    lo *= 1.0 - 1e-4 * (1 << widen);
    hi *= 1.0 + 1e-4 * (1 << widen);
    if (lo <= 0.0) return x0;
    slo = slope(lo);
    shi = slope(hi);
  }
  if (slo * shi > 0.0) return x0;
  for (int iter = 0; iter < 80 && (hi - lo) > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double smid = slope(mid);
    if (smid == 0.0) return mid;
    if (smid * slo > 0.0) {
      lo = mid;
      slo = smid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Search cap that doubles until the best grid point sits safely inside.
numerics::ExtremumSearch search_semi_infinite(const std::function<double(double)>& f,
                                              double lo, double hi0, bool maximize) {
  double hi = hi0;
  for (int round = 0; round < 12; ++round) {
    auto found = numerics::extremum_log_grid(f, lo, hi, maximize);
    if (!found.at_upper_boundary) return found;
    hi *= 2.0;
  }
  throw SolverDiagnosticError("extremum search: objective keeps improving toward the cap, "
                              "no interior extremum found");
}

}  // namespace

GaussianCVector make_initial_state(const InitialConditionFamily& family,
                                   const ModelCoefficients& coeffs) {
  return std::visit(
      [&](const auto& fam) -> GaussianCVector {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, DisplacedSqueezed>) {
          GaussianCVector c = steady_state(coeffs);
          c.c4 = fam.c4_0;
          c.c5 = fam.c5_0;
          return c;
        } else if constexpr (std::is_same_v<T, NearSteady>) {
          GaussianCVector c = steady_state(coeffs);
          c.c1 += fam.x;
          c.c2 += fam.x;
          c.c3 += fam.x;
          c.c4 = fam.y;
          c.c5 = fam.y;
          return c;
        } else {
          GaussianCVector c;
          c.c1 = c.c3 = fam.x;
          c.c2 = c.c4 = c.c5 = c.c6 = 0.0;
          return c;
        }
      },
      family);
}

std::pair<double, double> pure_steady_roots(const ModelCoefficients& coeffs) {
  const double g = coeffs.gamma, dpp = coeffs.d_pp, dpx = coeffs.d_px;
  if (!(g > 0.0) || dpp < 0.0 || dpx < 0.0) {
    throw std::invalid_argument("pure_steady_roots: need gamma > 0 and d_pp, d_px >= 0");
  }
  // 4 c1st c3st - c2st^2 = 1/4 reduces to
  //   d^2 + [8 dpp (1+2g^2) + 8 g dpx] d + 16 dpp^2 + 32 g dpp dpx - 4 g^2 = 0.
  const double b = 8.0 * dpp * (1.0 + 2.0 * g * g) + 8.0 * g * dpx;
  const double q = 16.0 * dpp * dpp + 32.0 * g * dpp * dpx - 4.0 * g * g;
  const double disc = b * b - 4.0 * q;
  const double sq = std::sqrt(std::max(disc, 0.0));
  // Stable quadratic formula: compute the large-magnitude root first.
  const double lower = (-b - sq) / 2.0;
  const double upper = (q == 0.0) ? 0.0 : q / lower;
  return {lower, upper};
}

double displaced_squeezed_objective(double dxx, const ModelCoefficients& coeffs) {
  const double u = numerics::polyval(steady_purity_poly(coeffs), dxx);
  const double z = 2.0 * std::sqrt(u);  // = 2 nbar_st + 1
  return dxx * arcoth(z) / z;
}

ExtremumResult solve_displaced_squeezed(const ModelCoefficients& coeffs) {
  const double t = temperature_of(coeffs, "solve_displaced_squeezed");
  const double r = coeffs.omega_ratio.value_or(0.0);
  const double g = coeffs.gamma;
  const double dmin = dekker_min(coeffs);

  const auto f = [&](double d) { return displaced_squeezed_objective(d, coeffs); };
  auto found = search_semi_infinite(f, dmin, std::max(1e3, 10.0 * g * t), /*maximize=*/true);
  if (!found.at_lower_boundary) found.x = polish_stationary(f, found.x);

  ExtremumResult result;
  result.regime = Regime::displaced_squeezed;
  result.kind = ExtremumKind::global_max;
  result.dxx = found.x;
  result.clamped = found.at_lower_boundary && found.x == dmin;
  result.diagnostics.bracket_lo = found.bracket_lo;
  result.diagnostics.bracket_hi = found.bracket_hi;
  result.diagnostics.iterations = found.iterations;
  result.diagnostics.hightemp_warning = t < 10.0;
  result.diagnostics.reference = 4.0 * g * t * std::sqrt(1.0 + 2.0 * g * r);
  result.diagnostics.reference_gap =
      std::abs(result.dxx - result.diagnostics.reference) / result.diagnostics.reference;
  if (!result.clamped) {
    result.diagnostics.stationarity_residual = stationarity_residual(f, result.dxx);
  }
  // A flat objective cannot certify a maximum.
  if (std::abs(found.value - f(dmin)) < 1e-14 * std::max(1.0, std::abs(found.value)) &&
      std::abs(found.value - f(found.bracket_hi * 2.0)) <
          1e-14 * std::max(1.0, std::abs(found.value))) {
    throw SolverDiagnosticError("solve_displaced_squeezed: objective is flat");
  }
  return result;
}

namespace {

// Leading-order (in the offset x) entropy production for the near-steady
// family with the high-temperature log approximation:
//   sigma ~ x^2 * G(d) / u_st(d)^2,
//   G = -(6 g u_st + B1 S1),
//   S1 = 4 c1st + 4 c3st - 2 c2st,
//   B1 = 4 c3st - (1+8g) c1st - (3-2g) c2st.
struct NearSteadyObjective {
  Eigen::VectorXd u;  // u_st(d), quadratic
  Eigen::VectorXd G;  // numerator polynomial, quadratic

  double value(double d) const {
    const double uu = numerics::polyval(u, d);
    return numerics::polyval(G, d) / (uu * uu);
  }
  Eigen::VectorXd stationarity() const {  // cubic: G' u - 2 u' G
    using namespace numerics;
    return polyadd(polymul(polyder(G), u),
                   Eigen::VectorXd(-2.0 * polymul(polyder(u), G)));
  }
};

NearSteadyObjective make_near_steady_objective(const ModelCoefficients& coeffs) {
  const double g = coeffs.gamma, dpp = coeffs.d_pp, dpx = coeffs.d_px;
  NearSteadyObjective obj;
  obj.u = steady_purity_poly(coeffs);
  Eigen::VectorXd c1st(2), c2st(2), c3st(2);
  c1st << dpp / g + 2.0 * dpx, (4.0 * g * g + 1.0) / (4.0 * g);
  c2st << 0.0, -0.5;
  c3st << dpp / (4.0 * g), 1.0 / (16.0 * g);
  const Eigen::VectorXd s1 = 4.0 * c1st + 4.0 * c3st - 2.0 * c2st;
  const Eigen::VectorXd b1 = 4.0 * c3st - (1.0 + 8.0 * g) * c1st - (3.0 - 2.0 * g) * c2st;
  obj.G = -numerics::polyadd(6.0 * g * obj.u, numerics::polymul(b1, s1));
  return obj;
}

}  // namespace

ExtremumResult solve_near_steady(const ModelCoefficients& coeffs, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("solve_near_steady: offset x must be positive");
  const double t = temperature_of(coeffs, "solve_near_steady");
  const double dmin = dekker_min(coeffs);
  const auto obj = make_near_steady_objective(coeffs);
  const auto sigma2 = [&](double d) { return obj.value(d); };

  ExtremumResult result;
  result.regime = Regime::near_steady;
  result.kind = ExtremumKind::global_max;
  result.diagnostics.hightemp_warning = t < 10.0;
  result.diagnostics.reference = coeffs.gamma * t / 4.0;

  const auto roots = numerics::real_roots(obj.stationarity());
  double best = dmin;
  double best_val = sigma2(dmin);
  if (roots.empty()) {
    // No real stationary point resolved; fall back to a direct search.
    auto found = search_semi_infinite(sigma2, dmin, std::max(1e3, 10.0 * coeffs.gamma * t),
                                      /*maximize=*/true);
    if (!found.at_lower_boundary) found.x = polish_stationary(sigma2, found.x);
    best = found.x;
    best_val = found.value;
    result.diagnostics.fallback_search = true;
    result.diagnostics.bracket_lo = found.bracket_lo;
    result.diagnostics.bracket_hi = found.bracket_hi;
    result.diagnostics.iterations = found.iterations;
  } else {
    for (double d : roots) {
      if (d >= dmin && sigma2(d) > best_val) {
        best = d;
        best_val = sigma2(d);
      }
    }
    result.diagnostics.bracket_lo = roots.front();
    result.diagnostics.bracket_hi = roots.back();
  }
  result.dxx = best;
  result.clamped = (best == dmin);
  if (!result.clamped) {
    result.diagnostics.stationarity_residual = stationarity_residual(sigma2, best);
  }
  result.diagnostics.reference_gap =
      std::abs(result.dxx - result.diagnostics.reference) / result.diagnostics.reference;
  return result;
}

ExtremumResult solve_unrelated(const ModelCoefficients& coeffs, double x) {
  if (!(x >= 10.0)) {
    throw std::invalid_argument("solve_unrelated: requires x >= 10 (far from the steady state)");
  }
  const double t = temperature_of(coeffs, "solve_unrelated");
  const double g = coeffs.gamma;
  const double c = x / t;
  const double dmin = dekker_min(coeffs);

  // Stationarity quartic in y = d_xx/(g t), with the cutoff term dropped:
  //   (y^2 + 8(2g^2+1) y + 16)^2 - 16 c^2 ((16g^2+1) y^2 + 32 y + 112) = 0.
  Eigen::VectorXd w(3);
  w << 16.0, 8.0 * (2.0 * g * g + 1.0), 1.0;
  Eigen::VectorXd v(3);
  v << 112.0, 32.0, 16.0 * g * g + 1.0;
  const Eigen::VectorXd quartic =
      numerics::polyadd(numerics::polymul(w, w), Eigen::VectorXd(-16.0 * c * c * v));
  const auto roots = numerics::real_roots(quartic);

  // The matching log-approximated objective (cutoff dropped as in the quartic):
  //   sigma ~ (dpp + d)/(2x) - 2g - Qdot(d)/u_st0(d)
  const double dpp0 = g * t;
  const auto sigma3 = [&](double d) {
    const double u0 = (16.0 * dpp0 * dpp0 + 8.0 * dpp0 * d * (1.0 + 2.0 * g * g) + d * d) /
                      (16.0 * g * g);
    const double s1 = dpp0 / g + d * (4.0 * g * g + 1.0) / (4.0 * g);
    const double s2 = -d / 2.0;
    const double s3 = (4.0 * dpp0 + d) / (16.0 * g);
    const double qdot = 2.0 * d * s3 + 2.0 * (dpp0 - 4.0 * g * x) * s1 - 3.0 * x * s2;
    return (dpp0 + d) / (2.0 * x) - 2.0 * g - qdot / u0;
  };

  ExtremumResult result;
  result.regime = Regime::unrelated;
  result.kind = ExtremumKind::global_min;
  result.diagnostics.hightemp_warning = t < 10.0;
  // Reference: the expansion of the quartic's biggest root, valid near critical
  // damping (gamma t (-0.686 + 1.750 c) there) and -4 gamma t in the extremes.
  result.diagnostics.reference =
      (std::abs(g - 1.0) < 0.25) ? t * (-0.68 + 1.75 * c + 0.46 * c * c * c)
                                 : -4.0 * g * t;

  if (roots.empty()) {
    auto found = search_semi_infinite(sigma3, dmin, std::max(1e3, 10.0 * g * t),
                                      /*maximize=*/false);
    result.diagnostics.fallback_search = true;
    result.diagnostics.iterations = found.iterations;
    result.diagnostics.bracket_lo = found.bracket_lo;
    result.diagnostics.bracket_hi = found.bracket_hi;
    result.clamped = found.at_lower_boundary;
    result.dxx = result.clamped ? dmin : polish_stationary(sigma3, found.x);
    if (!result.clamped) {
      result.diagnostics.stationarity_residual = stationarity_residual(sigma3, result.dxx);
    }
    result.diagnostics.reference_gap = std::abs(result.dxx - result.diagnostics.reference) /
                                       std::max(std::abs(result.diagnostics.reference), 1.0);
    return result;
  }

  const double y_big = roots.back();
  const double d_star = g * t * y_big;
  result.diagnostics.bracket_lo = roots.front();
  result.diagnostics.bracket_hi = roots.back();
  result.diagnostics.reference_gap = std::abs(d_star - result.diagnostics.reference) /
                                     std::max(std::abs(result.diagnostics.reference), 1.0);

  // Cross-check against direct minimization of the same objective whenever the
  // unconstrained minimizer is inside the searchable half-line.
  if (d_star > 0.0) {
    const double lo = std::min(dmin, d_star) / 100.0;
    auto found = search_semi_infinite(sigma3, lo, std::max(1e3, 10.0 * g * t),
                                      /*maximize=*/false);
    result.diagnostics.iterations = found.iterations;
    if (std::abs(found.x - d_star) > 0.01 * std::max(std::abs(d_star), 1.0)) {
      throw SolverDiagnosticError("solve_unrelated: quartic root and direct minimization "
                                  "disagree beyond 1%");
    }
  }

  if (d_star < dmin) {
    result.dxx = dmin;
    result.clamped = true;
  } else {
    result.dxx = d_star;
    result.clamped = false;
    result.diagnostics.stationarity_residual = stationarity_residual(sigma3, d_star);
  }
  return result;
}

ExtremumResult classify_and_solve(const InitialConditionFamily& family,
                                  const ModelCoefficients& coeffs) {
  // Asymptote sanity: evaluate the slope of sigma(d_xx -> inf) on family states
  // generated at growing d_xx. Unbounded growth demands the minimizing route.
  const double t = temperature_of(coeffs, "classify_and_solve");
  const double probe_lo = std::max(10.0 * dekker_min(coeffs), coeffs.gamma * t);
  const double probe_hi = 100.0 * probe_lo;
  const auto slope_at = [&](double d) {
    const ModelCoefficients with = coeffs.with_dxx(d);
    return asymptote_coefficients(make_initial_state(family, with), with).slope;
  };
  const double slope_far = slope_at(probe_hi);
  const bool vanishing_slope = slope_far < slope_at(probe_lo) || slope_far < 1e-6;

  return std::visit(
      [&](const auto& fam) -> ExtremumResult {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, DisplacedSqueezed>) {
          if (!vanishing_slope) {
            throw SolverDiagnosticError("classify_and_solve: displaced-squeezed family "
                                        "shows a growing asymptote");
          }
          return solve_displaced_squeezed(coeffs);
        } else if constexpr (std::is_same_v<T, NearSteady>) {
          if (!vanishing_slope) {
            throw SolverDiagnosticError("classify_and_solve: near-steady family shows a "
                                        "growing asymptote");
          }
          return solve_near_steady(coeffs, fam.x);
        } else {
          if (vanishing_slope) {
            throw SolverDiagnosticError("classify_and_solve: unrelated family shows a "
                                        "vanishing asymptote");
          }
          return solve_unrelated(coeffs, fam.x);
        }
      },
      family);
}

std::vector<SigmaSample> scan_sigma(const GaussianCVector& state0,
                                    const ModelCoefficients& coeffs,
                                    std::span<const double> dxx_grid) {
  const double dmin = dekker_min(coeffs);
  std::vector<SigmaSample> out;
  out.reserve(dxx_grid.size());
  for (double d : dxx_grid) {
    if (d < dmin - 1e-12) {
      throw std::invalid_argument("scan_sigma: grid value below the Dekker minimum");
    }
    SigmaSample sample;
    sample.dxx = d;
    try {
      sample.sigma = entropy_production(state0, coeffs.with_dxx(d));
    } catch (const DivergentEntropyError&) {
      sample.valid = false;
      sample.sigma = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(sample);
  }
  return out;
}

std::vector<SigmaSample> scan_sigma_family(const InitialConditionFamily& family,
                                           const ModelCoefficients& coeffs,
                                           std::span<const double> dxx_grid) {
  const double dmin = dekker_min(coeffs);
  std::vector<SigmaSample> out;
  out.reserve(dxx_grid.size());
  for (double d : dxx_grid) {
    if (d < dmin - 1e-12) {
      throw std::invalid_argument("scan_sigma_family: grid value below the Dekker minimum");
    }
    const ModelCoefficients with = coeffs.with_dxx(d);
    SigmaSample sample;
    sample.dxx = d;
    try {
      sample.sigma = entropy_production(make_initial_state(family, with), with);
    } catch (const DivergentEntropyError&) {
      sample.valid = false;
      sample.sigma = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace qbm
