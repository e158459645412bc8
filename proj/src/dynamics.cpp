#include "qbm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace qbm {

double ModelCoefficients::dxx() const {
  if (!d_xx) throw std::invalid_argument("ModelCoefficients: d_xx is not set");
  return *d_xx;
}

ModelCoefficients ModelCoefficients::with_dxx(double value) const {
  ModelCoefficients out = *this;
  out.d_xx = value;
  return out;
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

// d_xx is allowed to be negative here: the steady-state formulas are evaluated
// off the physical region by the pure-steady-root analysis. Complete positivity
// is a separate check (dekker_check).
void require_coeffs(const ModelCoefficients& c, bool need_dxx) {
  require_positive(c.gamma, "gamma");
  if (c.d_pp < 0.0 || c.d_px < 0.0) throw std::invalid_argument("diffusion coefficients must be >= 0");
  if (need_dxx && !std::isfinite(c.dxx())) throw std::invalid_argument("d_xx must be finite");
}

}  // namespace

ModelCoefficients high_temp_coefficients(double gamma, double temperature, double omega_ratio) {
  require_positive(gamma, "gamma");
  require_positive(temperature, "temperature");
  if (!(omega_ratio >= 0.0 && omega_ratio < 1.0)) {
    throw std::invalid_argument("omega_ratio must lie in [0, 1)");
  }
  ModelCoefficients c;
  c.gamma = gamma;
  c.d_pp = gamma * temperature;
  c.d_px = gamma * temperature * omega_ratio;
  c.temperature = temperature;
  c.omega_ratio = omega_ratio;
  return c;
}

double dekker_min(const ModelCoefficients& coeffs) {
  require_positive(coeffs.d_pp, "d_pp");
  return coeffs.gamma * coeffs.gamma / (4.0 * coeffs.d_pp) +
         coeffs.d_px * coeffs.d_px / coeffs.d_pp;
}

DekkerCheck dekker_check(const ModelCoefficients& coeffs) {
  DekkerCheck out;
  out.slack = coeffs.d_pp * coeffs.dxx() - coeffs.d_px * coeffs.d_px -
              coeffs.gamma * coeffs.gamma / 4.0;
  out.satisfied = out.slack >= -1e-12;
  return out;
}

GaussianCVector steady_state(const ModelCoefficients& coeffs) {
  require_coeffs(coeffs, true);
  const double g = coeffs.gamma, dpp = coeffs.d_pp, dpx = coeffs.d_px, dxx = coeffs.dxx();
  GaussianCVector c;
  c.c1 = (4.0 * dpp + dxx * (4.0 * g * g + 1.0) + 8.0 * g * dpx) / (4.0 * g);
  c.c2 = -dxx / 2.0;
  c.c3 = (4.0 * dpp + dxx) / (16.0 * g);
  c.c4 = c.c5 = c.c6 = 0.0;
  return c;
}

Vector6d ode_rhs(const GaussianCVector& c, const ModelCoefficients& coeffs) {
  const double g = coeffs.gamma, dpp = coeffs.d_pp, dpx = coeffs.d_px, dxx = coeffs.dxx();
  Vector6d dc;
  dc << dxx + 2.0 * c.c2,
      2.0 * dpx + 4.0 * c.c3 - c.c1 - 2.0 * g * c.c2,
      dpp - c.c2 / 2.0 - 4.0 * g * c.c3,
      2.0 * c.c5,
      -c.c4 / 2.0 - 2.0 * g * c.c5,
      0.0;
  return dc;
}

namespace {

using Complex = std::complex<double>;

// Laplace-transform solution of the c-vector equations of motion. The c1..c3
// block relaxes through the poles -2g, -2(g +- Omega_d) and the c4/c5 pair
// through -(g +- Omega_d), Omega_d = sqrt(g^2 - 1).
GaussianCVector analytic_at(const GaussianCVector& c0, const ModelCoefficients& coeffs,
                            double tau) {
  const double g = coeffs.gamma, dpp = coeffs.d_pp, dpx = coeffs.d_px, dxx = coeffs.dxx();
  const Complex omega_d = std::sqrt(Complex(g * g - 1.0, 0.0));
  const GaussianCVector st = steady_state(coeffs);

  const Complex c10 = c0.c1, c20 = c0.c2, c30 = c0.c3;
  const Complex mix = c10 + 2.0 * g * c20 + 4.0 * c30;
  const Complex e2g = std::exp(-2.0 * g * tau);

  Complex c1 = st.c1 + e2g / (4.0 * g * omega_d * omega_d) *
                           (4.0 * dpp + dxx + 4.0 * g * dpx - 2.0 * g * mix);
  Complex c2 = st.c2 + e2g / (4.0 * omega_d * omega_d) *
                           (-4.0 * dpp - dxx + 2.0 * g * (mix - 2.0 * dpx));
  Complex c3 = st.c3 + e2g / (16.0 * g * omega_d * omega_d) *
                           (4.0 * dpp + dxx - 2.0 * g * (mix - 2.0 * dpx));

  for (const Complex y : {omega_d, -omega_d}) {
    const Complex den = (g + y) * y * y;
    const Complex decay = std::exp(-2.0 * (g + y) * tau);
    c1 += decay * ((-4.0 * dpp + dxx * (1.0 - 2.0 * g * g + 2.0 * g * y) +
                    2.0 * c10 * (g - y)) /
                       (8.0 * den) +
                   (2.0 * c30 * (g + y) + c20 - dpx * (g - y)) / (2.0 * den));
    c2 += decay * (c30 * (1.0 - 2.0 * g * g - 2.0 * g * y) / den +
                   (4.0 * dpp * (g + y) + dxx * (g - y) + 4.0 * dpx - 2.0 * c10 -
                    4.0 * c20 * (g + y)) /
                       (8.0 * den));
    c3 += decay * ((4.0 * dpp * (1.0 - 2.0 * g * g - 2.0 * g * y) - dxx +
                    2.0 * c10 * (g + y)) /
                       (32.0 * den) -
                   (dpx * (g + y) + c20 * (1.0 - 2.0 * g * g - 2.0 * g * y) +
                    2.0 * c30 * (3.0 * g + y - 4.0 * g * g * g - 4.0 * g * g * y)) /
                       (8.0 * den));
  }

  const Complex ep = std::exp(-(g + omega_d) * tau);
  const Complex em = std::exp(-(g - omega_d) * tau);
  const Complex c4 = ep * (c0.c4 * (omega_d - g) - 2.0 * c0.c5) / (2.0 * omega_d) +
                     em * (c0.c4 * (g + omega_d) + 2.0 * c0.c5) / (2.0 * omega_d);
  const Complex c5 = ep * (2.0 * c0.c5 * (g + omega_d) + c0.c4) / (4.0 * omega_d) +
                     em * (2.0 * c0.c5 * (omega_d - g) - c0.c4) / (4.0 * omega_d);

  const Complex values[5] = {c1, c2, c3, c4, c5};
  GaussianCVector out;
  double* fields[5] = {&out.c1, &out.c2, &out.c3, &out.c4, &out.c5};
  for (int i = 0; i < 5; ++i) {
    if (std::abs(values[i].imag()) >= 1e-9) {
      std::ostringstream msg;
      msg << "analytic propagation: imaginary residue " << values[i].imag()
          << " on c" << (i + 1) << " (transcription guard)";
      throw std::runtime_error(msg.str());
    }
    *fields[i] = values[i].real();
  }
  out.c6 = c0.c6;
  return out;
}

GaussianCVector rk4_advance(GaussianCVector c, const ModelCoefficients& coeffs,
                            double dt, int steps) {
  Vector6d v = c.vec();
  for (int i = 0; i < steps; ++i) {
    const Vector6d k1 = ode_rhs(GaussianCVector::from_vec(v), coeffs);
    const Vector6d k2 = ode_rhs(GaussianCVector::from_vec(v + 0.5 * dt * k1), coeffs);
    const Vector6d k3 = ode_rhs(GaussianCVector::from_vec(v + 0.5 * dt * k2), coeffs);
    const Vector6d k4 = ode_rhs(GaussianCVector::from_vec(v + dt * k3), coeffs);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return GaussianCVector::from_vec(v);
}

void require_tau_grid(std::span<const double> tau_grid) {
  double prev = -1.0;
  for (double t : tau_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("tau grid must be nonnegative");
    if (t <= prev) throw std::invalid_argument("tau grid must be strictly increasing");
    prev = t;
  }
}

}  // namespace

double default_rk4_step(double gamma) {
  return std::min(1e-3, 1e-2 / gamma);
}

PropagationResult propagate_numeric(const GaussianCVector& state0,
                                    const ModelCoefficients& coeffs,
                                    std::span<const double> tau_grid, double step) {
  require_coeffs(coeffs, true);
  require_tau_grid(tau_grid);
  if (!(step > 0.0)) throw std::invalid_argument("propagate_numeric: step must be positive");
  if (!validate(state0).valid) throw std::invalid_argument("propagate_numeric: invalid initial state");

  PropagationResult result;
  result.method = PropagationResult::Method::numeric;
  result.tau.assign(tau_grid.begin(), tau_grid.end());
  result.states.reserve(tau_grid.size());

  for (int attempt = 0; attempt <= 10; ++attempt) {
    result.states.clear();
    bool ok = true;
    GaussianCVector c = state0;
    double prev = 0.0;
    for (double t : tau_grid) {
      const double dt = t - prev;
      if (dt > 0.0) {
        const int steps = static_cast<int>(std::ceil(dt / step));
        c = rk4_advance(c, coeffs, dt / steps, steps);
      }
      prev = t;
      if (!validate(c).valid) {
        ok = false;
        break;
      }
      result.states.push_back(c);
    }
    if (ok) return result;
    step /= 2.0;
  }
  throw std::runtime_error(
      "propagate_numeric: state left the physical region after 10 step halvings "
      "(step reached " + std::to_string(step) + ")");
}

PropagationResult propagate_analytic(const GaussianCVector& state0,
                                     const ModelCoefficients& coeffs,
                                     std::span<const double> tau_grid) {
  require_coeffs(coeffs, true);
  require_tau_grid(tau_grid);
  if (!validate(state0).valid) throw std::invalid_argument("propagate_analytic: invalid initial state");

  if (std::abs(coeffs.gamma * coeffs.gamma - 1.0) < kDegenerateWindow) {
    // Residue denominators Omega_d^2 vanish at critical damping.
    PropagationResult result =
        propagate_numeric(state0, coeffs, tau_grid, default_rk4_step(coeffs.gamma));
    result.degenerate_limit = true;
    return result;
  }

  PropagationResult result;
  result.method = PropagationResult::Method::analytic;
  result.tau.assign(tau_grid.begin(), tau_grid.end());
  result.states.reserve(tau_grid.size());
  for (double t : tau_grid) {
    GaussianCVector c = (t == 0.0) ? state0 : analytic_at(state0, coeffs, t);
    if (!validate(c).valid) {
      throw std::runtime_error("propagate_analytic: propagated state failed validation at tau=" +
                               std::to_string(t));
    }
    result.states.push_back(c);
  }
  return result;
}

GaussianCVector analytic_state_at(const GaussianCVector& state0,
                                  const ModelCoefficients& coeffs, double tau) {
  const double grid[1] = {tau};
  return propagate_analytic(state0, coeffs, grid).states.front();
}

ModelCoefficients nondimensionalize(const RawCoefficients& raw) {
  require_positive(raw.mass, "mass");
  require_positive(raw.omega, "omega");
  const double x0_sq = 1.0 / (2.0 * raw.mass * raw.omega);
  ModelCoefficients c;
  c.gamma = raw.gamma / raw.omega;
  c.d_pp = raw.d_pp * x0_sq / raw.omega;
  c.d_px = raw.d_px / raw.omega;
  c.d_xx = raw.d_xx / (raw.omega * x0_sq);
  c.scale = OscillatorScale{raw.mass, raw.omega};
  return c;
}

RawCoefficients redimensionalize(const ModelCoefficients& coeffs) {
  if (!coeffs.scale) throw std::invalid_argument("redimensionalize: no oscillator scale attached");
  const double m = coeffs.scale->mass, w = coeffs.scale->omega;
  require_positive(m, "mass");
  require_positive(w, "omega");
  const double x0_sq = 1.0 / (2.0 * m * w);
  RawCoefficients raw;
  raw.gamma = coeffs.gamma * w;
  raw.d_pp = coeffs.d_pp * w / x0_sq;
  raw.d_px = coeffs.d_px * w;
  raw.d_xx = coeffs.dxx() * w * x0_sq;
  raw.mass = m;
  raw.omega = w;
  return raw;
}

GaussianCVector to_dimensionless(const GaussianCVector& c, double mass, double omega) {
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  const double x0_sq = 1.0 / (2.0 * mass * omega);
  const double x0 = std::sqrt(x0_sq);
  return {c.c1 / x0_sq, c.c2, c.c3 * x0_sq, c.c4 / x0, c.c5 * x0, c.c6};
}

GaussianCVector to_dimensionful(const GaussianCVector& c, double mass, double omega) {
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  const double x0_sq = 1.0 / (2.0 * mass * omega);
  const double x0 = std::sqrt(x0_sq);
  return {c.c1 * x0_sq, c.c2, c.c3 / x0_sq, c.c4 * x0, c.c5 / x0, c.c6};
}

}  // namespace qbm
