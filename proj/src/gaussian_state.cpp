#include "qbm/gaussian_state.hpp"

#include <cmath>
#include <stdexcept>

namespace qbm {

double purity_invariant(const GaussianCVector& c) {
  return 4.0 * c.c1 * c.c3 - c.c2 * c.c2;
}

ValidationReport validate(const GaussianCVector& c) {
  ValidationReport report;
  const double fields[6] = {c.c1, c.c2, c.c3, c.c4, c.c5, c.c6};
  for (double f : fields) {
    if (!std::isfinite(f)) {
      report.valid = false;
      report.failures.push_back("non-finite parameter");
      return report;
    }
  }
  if (c.c1 <= 0.0) {
    report.valid = false;
    report.failures.push_back("c1 must be positive");
  }
  if (c.c3 <= 0.0) {
    report.valid = false;
    report.failures.push_back("c3 must be positive");
  }
  report.purity_gap = purity_invariant(c) - 0.25;
  if (report.purity_gap < -kPurityTol) {
    report.valid = false;
    report.failures.push_back("uncertainty bound violated: 4 c1 c3 - c2^2 < 1/4");
  } else if (std::abs(report.purity_gap) < kPurityTol) {
    report.pure = true;
  }
  if (std::abs(c.c6) > kNormalizationTol) {
    report.valid = false;
    report.failures.push_back("state not normalized: c6 != 0");
  }
  return report;
}

namespace {

void require_valid(const GaussianCVector& c, const char* who) {
  const auto report = validate(c);
  if (!report.valid) {
    std::string msg = std::string(who) + ": invalid state";
    for (const auto& f : report.failures) msg += "; " + f;
    throw std::invalid_argument(msg);
  }
}

}  // namespace

double nbar(const GaussianCVector& c) {
  require_valid(c, "nbar");
  const double s = std::sqrt(std::max(purity_invariant(c), 0.25));
  return std::max(0.0, (2.0 * s - 1.0) / 2.0);
}

std::vector<double> spectrum(const GaussianCVector& c, int n_max) {
  require_valid(c, "spectrum");
  if (n_max < 0) throw std::invalid_argument("spectrum: n_max must be >= 0");
  const double s = std::sqrt(std::max(purity_invariant(c), 0.25));
  const double lambda0 = 2.0 / (2.0 * s + 1.0);
  const double ratio = (2.0 * s - 1.0) / (2.0 * s + 1.0);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double lam = lambda0;
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] = lam;
    lam *= ratio;
  }
  return out;
}

PositionKernel to_position_kernel(const GaussianCVector& c) {
  require_valid(c, "to_position_kernel");
  PositionKernel k;
  k.A = c.c3 - c.c2 * c.c2 / (4.0 * c.c1);
  k.B = -c.c2 / (4.0 * c.c1);
  k.C = 1.0 / (16.0 * c.c1);
  k.D = -(c.c2 * c.c4 / (2.0 * c.c1) - c.c5);
  k.E = c.c4 / (4.0 * c.c1);
  // Tr rho = 1 fixes N: exp(-c6) = sqrt(pi/(4C)) exp(E^2/(4C) - N), c6 = 0.
  k.N = k.E * k.E / (4.0 * k.C) + 0.5 * std::log(M_PI / (4.0 * k.C)) + c.c6;
  return k;
}

GaussianCVector from_position_kernel(const PositionKernel& k, double* c6_residual) {
  if (!(k.C > 0.0)) throw std::invalid_argument("from_position_kernel: C must be positive");
  GaussianCVector c;
  c.c1 = 1.0 / (16.0 * k.C);
  c.c2 = -k.B / (4.0 * k.C);
  c.c3 = k.A + k.B * k.B / (4.0 * k.C);
  c.c4 = k.E / (4.0 * k.C);
  c.c5 = k.D - k.B * k.E / (2.0 * k.C);
  const double residual = k.N - k.E * k.E / (4.0 * k.C) - 0.5 * std::log(M_PI / (4.0 * k.C));
  if (c6_residual) *c6_residual = residual;
  c.c6 = 0.0;  // renormalize; the deviation is reported above
  return c;
}

DstsParams dsts_params(const GaussianCVector& c) {
  require_valid(c, "dsts_params");
  DstsParams p;
  p.nbar = nbar(c);
  p.squeezing = {(-c.c1 + c.c3) / 2.0, c.c2 / 2.0};
  p.displacement = {-c.c4 / std::sqrt(2.0), c.c5 / std::sqrt(2.0)};
  return p;
}

GaussianCVector coherent_state(std::complex<double> alpha) {
  GaussianCVector c;
  c.c1 = 0.25;
  c.c2 = 0.0;
  c.c3 = 0.25;
  c.c4 = -std::sqrt(2.0) * alpha.real();
  c.c5 = -std::sqrt(2.0) * alpha.imag();
  c.c6 = 0.0;
  return c;
}

GaussianCVector thermal_state(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw std::invalid_argument("thermal_state: nbar must be >= 0");
  }
  GaussianCVector c;
  c.c1 = c.c3 = (2.0 * nbar + 1.0) / 4.0;
  c.c2 = c.c4 = c.c5 = c.c6 = 0.0;
  return c;
}

}  // namespace qbm
