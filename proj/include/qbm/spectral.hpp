#ifndef QBM_SPECTRAL_HPP
#define QBM_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "qbm/gaussian_state.hpp"

namespace qbm {

// Generalized Hermite polynomial H_n(x, a) = a^{n/2} H_n(x/sqrt(a)), a > 0,
// with generating function exp(2 x u - a u^2). Evaluated by the three-term
// recurrence H_{n+1} = 2 x H_n - 2 n a H_{n-1}.
double generalized_hermite(int n, double x, double a);

// Eigensystem of the position-representation kernel:
//   eigenvalues  eps_n = eps0 * eps^n
//   eigenvectors phi_n(x) = norm[n] * H_n(x + kappa, width)
//                           * exp(-quad x^2 - lin x)
struct EigenSystem {
  double eps0 = 1.0;   // 2 sqrt(C) / (sqrt(A) + sqrt(C))
  double eps = 0.0;    // (sqrt(A) - sqrt(C)) / (sqrt(A) + sqrt(C))
  double kappa = 0.0;  // E / (4C)
  double width = 0.0;  // 1 / (4 sqrt(AC))
  std::complex<double> quad;  // 2 sqrt(AC) + iB
  std::complex<double> lin;   // sqrt(A/C) E + iD
  int n_max = 0;
  std::vector<double> norm;  // L2 normalization prefactors for n = 0..n_max

  double eigenvalue(int n) const;
};

// Requires A >= C > 0 (negative eigenvalues / zero spectrum otherwise).
EigenSystem eigendecompose(const PositionKernel& kernel, int n_max);

std::complex<double> eigenfunction(const EigenSystem& sys, int n, double x);

struct QuadratureSpec {
  int points = 2000;          // Gauss-Legendre nodes per integral
  double window_sigmas = 8.0; // half-width in units of (16AC)^{-1/4}
};

// Max-norm residual of the eigen-integral equation
//   integral rho(x,y) phi_n(y) dy = eps_n phi_n(x)
// relative to max |eps_n phi_n|, probed on a grid of x values across the
// kernel support. Throws std::runtime_error when doubling the quadrature
// resolution does not reproduce the residual (under-resolved integral).
double verify_eigenpair(const PositionKernel& kernel, const EigenSystem& sys, int n,
                        const QuadratureSpec& spec = {});

}  // namespace qbm

#endif
