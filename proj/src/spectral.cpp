#include "qbm/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "qbm/numerics.hpp"

namespace qbm {

double generalized_hermite(int n, double x, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("generalized_hermite: a must be positive");
  if (n < 0) throw std::invalid_argument("generalized_hermite: n must be >= 0");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * a * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double EigenSystem::eigenvalue(int n) const {
  if (n < 0) throw std::invalid_argument("eigenvalue: n must be >= 0");
  return eps0 * std::pow(eps, n);
}

EigenSystem eigendecompose(const PositionKernel& k, int n_max) {
  if (!(k.C > 0.0)) throw std::invalid_argument("eigendecompose: C must be positive");
  if (k.A < k.C) {
    throw std::invalid_argument("eigendecompose: A < C, the kernel has negative eigenvalues");
  }
  if (n_max < 0) throw std::invalid_argument("eigendecompose: n_max must be >= 0");

  EigenSystem sys;
  const double sa = std::sqrt(k.A), sc = std::sqrt(k.C);
  const double root_ac = std::sqrt(k.A * k.C);
  sys.eps0 = 2.0 * sc / (sa + sc);
  sys.eps = (sa - sc) / (sa + sc);
  sys.kappa = k.E / (4.0 * k.C);
  sys.width = 1.0 / (4.0 * root_ac);
  sys.quad = {2.0 * root_ac, k.B};
  sys.lin = {sa / sc * k.E, k.D};
  sys.n_max = n_max;

  // |phi_n|^2 integrates to a displaced-Gaussian Hermite norm; the E-dependent
  // factor below is required for unit norm when the kernel is displaced.
  const double disp = std::exp(-k.E * k.E * root_ac / (8.0 * k.C * k.C));
  sys.norm.resize(static_cast<std::size_t>(n_max) + 1);
  double log_pow = 0.0;          // log((16AC)^{(2n+1)/4}) accumulated
  const double log_base = std::log(16.0 * k.A * k.C);
  double log_fact = 0.0;         // log(2^n n!)
  for (int n = 0; n <= n_max; ++n) {
    log_pow = (2.0 * n + 1.0) / 4.0 * log_base;
    if (n > 0) log_fact += std::log(2.0 * n);
    sys.norm[static_cast<std::size_t>(n)] =
        std::sqrt(std::exp(log_pow - log_fact) / std::sqrt(M_PI)) * disp;
  }
  return sys;
}

std::complex<double> eigenfunction(const EigenSystem& sys, int n, double x) {
  const double h = generalized_hermite(n, x + sys.kappa, sys.width);
  const std::complex<double> expo = -sys.quad * x * x - sys.lin * x;
  return sys.norm.at(static_cast<std::size_t>(n)) * h * std::exp(expo);
}

namespace {

std::complex<double> kernel_value(const PositionKernel& k, double x, double y) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> expo = -k.A * (x - y) * (x - y) - i * k.B * (x - y) * (x + y) -
                                    k.C * (x + y) * (x + y) - i * k.D * (x - y) -
                                    k.E * (x + y) - k.N;
  return std::exp(expo);
}

double eigenpair_residual(const PositionKernel& k, const EigenSystem& sys, int n,
                          int points, double window_sigmas) {
  const double sigma_eff = std::pow(16.0 * k.A * k.C, -0.25);
  const double center = -sys.kappa;
  const double half = window_sigmas * sigma_eff;
  const auto& gl = numerics::gauss_legendre(points);

  const int n_probe = 41;
  double max_resid = 0.0, max_ref = 0.0;
  const double lambda = sys.eigenvalue(n);
  for (int ix = 0; ix < n_probe; ++ix) {
    const double x = center - half + 2.0 * half * ix / (n_probe - 1);
    std::complex<double> integral = 0.0;
    for (int iq = 0; iq < points; ++iq) {
      const double y = center + half * gl.nodes[static_cast<std::size_t>(iq)];
      integral += gl.weights[static_cast<std::size_t>(iq)] *
                  kernel_value(k, x, y) * eigenfunction(sys, n, y);
    }
    integral *= half;
    const std::complex<double> rhs = lambda * eigenfunction(sys, n, x);
    max_resid = std::max(max_resid, std::abs(integral - rhs));
    max_ref = std::max(max_ref, std::abs(rhs));
  }
  if (max_ref == 0.0) throw std::runtime_error("verify_eigenpair: vanishing eigenfunction scale");
  return max_resid / max_ref;
}

}  // namespace

double verify_eigenpair(const PositionKernel& kernel, const EigenSystem& sys, int n,
                        const QuadratureSpec& spec) {
  if (n > sys.n_max) throw std::invalid_argument("verify_eigenpair: n exceeds n_max");
  const double r = eigenpair_residual(kernel, sys, n, spec.points, spec.window_sigmas);
  const double r2 =
      eigenpair_residual(kernel, sys, n, 2 * spec.points, spec.window_sigmas + 2.0);
  if (std::abs(r - r2) > std::max(1e-10, 0.5 * std::max(r, r2))) {
    throw std::runtime_error("verify_eigenpair: quadrature not converged (grid doubling "
                             "changed the residual)");
  }
  return r;
}

}  // namespace qbm
