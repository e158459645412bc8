#ifndef QBM_DYNAMICS_HPP
#define QBM_DYNAMICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "qbm/gaussian_state.hpp"

namespace qbm {

struct OscillatorScale {
  double mass = 1.0;
  double omega = 1.0;
};

// Dimensionless coefficients of the Lindblad-form Caldeira-Leggett generator:
// gamma = relaxation/omega, d_pp, d_px, d_xx the diffusion coefficients in the
// units fixed by the ground-state width x0 = 1/sqrt(2 m omega).
//
// d_xx is optional: the extremum solvers receive the other three and select it.
struct ModelCoefficients {
  double gamma = 1.0;
  double d_pp = 0.0;
  double d_px = 0.0;
  std::optional<double> d_xx;
  std::optional<double> temperature;  // k_B T / omega, when high-T derived
  std::optional<double> omega_ratio;  // omega / cutoff
  std::optional<OscillatorScale> scale;

  double dxx() const;  // throws std::invalid_argument when unset
  ModelCoefficients with_dxx(double value) const;
};

// Dimensionful inputs for the boundary conversion.
struct RawCoefficients {
  double gamma = 0.0;
  double d_pp = 0.0;
  double d_px = 0.0;
  double d_xx = 0.0;
  double mass = 1.0;
  double omega = 1.0;
};

struct DekkerCheck {
  bool satisfied = false;
  double slack = 0.0;  // d_pp d_xx - d_px^2 - gamma^2/4
};

struct PropagationResult {
  enum class Method { analytic, numeric };
  std::vector<double> tau;
  std::vector<GaussianCVector> states;
  Method method = Method::analytic;
  bool degenerate_limit = false;  // critically damped handling used
};

// D_pp = 2 m gamma k_B T and D_px = gamma k_B T / cutoff in dimensionless form.
// d_xx is left unset.
ModelCoefficients high_temp_coefficients(double gamma, double temperature, double omega_ratio);

// Smallest d_xx compatible with complete positivity: gamma^2/(4 d_pp) + d_px^2/d_pp.
double dekker_min(const ModelCoefficients& coeffs);

DekkerCheck dekker_check(const ModelCoefficients& coeffs);

GaussianCVector steady_state(const ModelCoefficients& coeffs);

// Right-hand side of the linear equations of motion for the c-vector,
// d c/d tau with tau = omega t.
Vector6d ode_rhs(const GaussianCVector& c, const ModelCoefficients& coeffs);

// Closed-form propagation via the Laplace-transform solution. Complex
// arithmetic with Omega_d = sqrt(gamma^2-1); imaginary residues above 1e-9
// abort. Near critical damping (|gamma^2-1| < kDegenerateWindow) the residue
// formulas are singular and the numeric path is used transparently (flagged).
PropagationResult propagate_analytic(const GaussianCVector& state0,
                                     const ModelCoefficients& coeffs,
                                     std::span<const double> tau_grid);

// Single-point convenience for the analytic solution.
GaussianCVector analytic_state_at(const GaussianCVector& state0,
                                  const ModelCoefficients& coeffs, double tau);

// Classic RK4 on the linear system. The step is halved (up to 10 times) if a
// produced state fails validation.
PropagationResult propagate_numeric(const GaussianCVector& state0,
                                    const ModelCoefficients& coeffs,
                                    std::span<const double> tau_grid, double step);

double default_rk4_step(double gamma);

inline constexpr double kDegenerateWindow = 1e-4;  // on |gamma^2 - 1|

ModelCoefficients nondimensionalize(const RawCoefficients& raw);
RawCoefficients redimensionalize(const ModelCoefficients& coeffs);

// c-vector rescaling between dimensionful and dimensionless parameters
// (single source of truth for x0 = 1/sqrt(2 m omega)).
GaussianCVector to_dimensionless(const GaussianCVector& dimensionful, double mass, double omega);
GaussianCVector to_dimensionful(const GaussianCVector& dimensionless, double mass, double omega);

}  // namespace qbm

#endif
