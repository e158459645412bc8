#ifndef QBM_NUMERICS_HPP
#define QBM_NUMERICS_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qbm::numerics {

// Polynomials are coefficient vectors in ascending order: p[0] + p[1] x + ...

Eigen::VectorXd polymul(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
Eigen::VectorXd polyadd(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
Eigen::VectorXd polyder(const Eigen::VectorXd& p);
double polyval(const Eigen::VectorXd& p, double x);

// Real roots via the companion-matrix eigenvalues; roots with
// |Im| <= im_tol * max(1, |root|) are accepted as real.
std::vector<double> real_roots(const Eigen::VectorXd& p, double im_tol = 1e-9);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

struct ExtremumSearch {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool at_lower_boundary = false;
  bool at_upper_boundary = false;
};

// Log-spaced grid scan followed by golden-section refinement of the best
// bracket. maximize=false searches for the minimum.
ExtremumSearch extremum_log_grid(const std::function<double(double)>& f, double lo,
                                 double hi, bool maximize, int grid_points = 2000,
                                 int refine_iters = 120);

// Gauss-Legendre nodes and weights on [-1, 1]; cached per point count.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

// Five-point central difference.
double derivative(const std::function<double(double)>& f, double x, double h);

}  // namespace qbm::numerics

#endif
