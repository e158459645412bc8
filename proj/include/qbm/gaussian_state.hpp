#ifndef QBM_GAUSSIAN_STATE_HPP
#define QBM_GAUSSIAN_STATE_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbm {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Gaussian density matrix in the (k,Delta) characteristic-function form
//
//   rho(k,Delta) = exp{-c1 k^2 - c2 k Delta - c3 Delta^2 - i c4 k - i c5 Delta - c6}.
//
// All parameters are dimensionless (lengths measured in units of the
// oscillator ground-state width); c6 = 0 for a normalized state.
struct GaussianCVector {
  double c1 = 0.25;
  double c2 = 0.0;
  double c3 = 0.25;
  double c4 = 0.0;
  double c5 = 0.0;
  double c6 = 0.0;

  Vector6d vec() const {
    Vector6d v;
    v << c1, c2, c3, c4, c5, c6;
    return v;
  }
  static GaussianCVector from_vec(const Vector6d& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
};

// Same state in the position representation
//
//   rho(x,y) = exp{-A(x-y)^2 - iB(x-y)(x+y) - C(x+y)^2 - iD(x-y) - E(x+y) - N}.
struct PositionKernel {
  double A = 0.25;
  double B = 0.0;
  double C = 0.25;
  double D = 0.0;
  double E = 0.0;
  double N = 0.0;
};

// Displaced squeezed thermal state parameters read off the symmetric
// characteristic function chi(lambda, lambda*).
struct DstsParams {
  double nbar = 0.0;
  std::complex<double> squeezing;     // (-c1+c3+i c2)/2
  std::complex<double> displacement;  // (-c4+i c5)/sqrt(2)
};

struct ValidationReport {
  bool valid = true;
  bool pure = false;
  double purity_gap = 0.0;  // 4 c1 c3 - c2^2 - 1/4
  std::vector<std::string> failures;
};

// States with |4 c1 c3 - c2^2 - 1/4| below this are classified pure;
// a gap below -kPurityTol is not a quantum state.
inline constexpr double kPurityTol = 1e-10;
inline constexpr double kNormalizationTol = 1e-12;

// 4 c1 c3 - c2^2; >= 1/4 for quantum states, = 1/4 exactly for pure ones.
double purity_invariant(const GaussianCVector& c);

ValidationReport validate(const GaussianCVector& c);

// Mean excitation number (2 sqrt(4 c1 c3 - c2^2) - 1)/2. Throws on invalid states.
double nbar(const GaussianCVector& c);

// Density-matrix eigenvalues lambda_0..lambda_n_max (geometric spectrum).
std::vector<double> spectrum(const GaussianCVector& c, int n_max);

PositionKernel to_position_kernel(const GaussianCVector& c);

// Inverse of to_position_kernel. A kernel whose N is inconsistent with unit
// trace is renormalized (c6 pinned to 0); the residual is reported through
// c6_residual when given.
GaussianCVector from_position_kernel(const PositionKernel& k, double* c6_residual = nullptr);

DstsParams dsts_params(const GaussianCVector& c);

GaussianCVector coherent_state(std::complex<double> alpha);
GaussianCVector thermal_state(double nbar);

}  // namespace qbm

#endif
