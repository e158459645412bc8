#include "qbm/numerics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbm::numerics {

Eigen::VectorXd polymul(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(p.size() + q.size() - 1);
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Eigen::VectorXd polyadd(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(std::max(p.size(), q.size()));
  r.head(p.size()) = p;
  r.head(q.size()) += q;
  return r;
}

Eigen::VectorXd polyder(const Eigen::VectorXd& p) {
  if (p.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd r(p.size() - 1);
  for (Eigen::Index i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<double>(i);
  return r;
}

double polyval(const Eigen::VectorXd& p, double x) {
  double v = 0.0;
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) v = v * x + p[i];
  return v;
}

std::vector<double> real_roots(const Eigen::VectorXd& p, double im_tol) {
  Eigen::Index degree = p.size() - 1;
  while (degree > 0 && p[degree] == 0.0) --degree;
  if (degree < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -p[i] / p[degree];
  companion.block(1, 0, degree - 1, degree - 1).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const Eigen::VectorXd dp = polyder(p);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < degree; ++i) {
    const auto z = solver.eigenvalues()[i];
    if (std::abs(z.imag()) > im_tol * std::max(1.0, std::abs(z))) continue;
    // Companion eigenvalues carry absolute error on the coefficient scale;
    // Newton restores full relative accuracy for small-magnitude roots.
    double x = z.real();
    for (int iter = 0; iter < 8; ++iter) {
      const double deriv = polyval(dp, x);
      if (deriv == 0.0) break;
      const double step = polyval(p, x) / deriv;
      x -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (!(hi >= lo) || n < 2) throw std::invalid_argument("linear_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

ExtremumSearch extremum_log_grid(const std::function<double(double)>& f, double lo,
                                 double hi, bool maximize, int grid_points,
                                 int refine_iters) {
  const auto grid = log_grid(lo, hi, grid_points);
  const double sign = maximize ? 1.0 : -1.0;
  std::size_t best = 0;
  double best_val = sign * f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = sign * f(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  ExtremumSearch out;
  out.at_lower_boundary = (best == 0);
  out.at_upper_boundary = (best + 1 == grid.size());
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  static const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
  int iters = 0;
  for (; iters < refine_iters && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++iters) {
    const double x1 = b - kGolden * (b - a);
    const double x2 = a + kGolden * (b - a);
    if (sign * f(x1) < sign * f(x2))
      a = x1;
    else
      b = x2;
  }
  out.x = 0.5 * (a + b);
  if (out.at_lower_boundary && sign * f(lo) >= sign * f(out.x)) out.x = lo;
  if (out.at_upper_boundary && sign * f(hi) >= sign * f(out.x)) out.x = hi;
  out.value = f(out.x);
  out.iterations = iters;
  out.bracket_lo = a;
  out.bracket_hi = b;
  return out;
}

const GaussLegendre& gauss_legendre(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 2) throw std::invalid_argument("gauss_legendre: n must be >= 2");

  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  // Newton iteration from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[static_cast<std::size_t>(i)] = -x;
    gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    gl.weights[static_cast<std::size_t>(i)] = w;
    gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace qbm::numerics
