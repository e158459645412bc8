#include "figures.hpp"

#include <complex>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "qbm/dxx_solver.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/entropy.hpp"
#include "qbm/numerics.hpp"
#include "io.hpp"

namespace qbm::tools {

namespace {

namespace fs = std::filesystem;

struct Curve {
  std::string filename;
  std::string title;
  std::vector<std::pair<double, double>> points;
};

struct FigureLayout {
  std::string xlabel;
  std::string ylabel;
  std::vector<std::string> columns;
  bool logx = false;
  bool logy = false;
};

std::string tagged(double v) {
  std::string s = fmt(v);
  for (auto& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

void write_figure(int n, const fs::path& outdir, const FigureLayout& layout,
                  std::vector<Curve> curves) {
  for (const auto& curve : curves) {
    CsvWriter csv(outdir / curve.filename, layout.columns);
    for (const auto& [x, y] : curve.points) csv.row({x, y});
    csv.close();
  }
  std::ostringstream name;
  name << "fig" << (n < 10 ? "0" : "") << n << ".gp";
  std::ofstream gp(outdir / name.str(), std::ios::binary);
  if (!gp) throw std::runtime_error("cannot open plot script for writing");
  gp << "set datafile separator ','\n";
  gp << "set xlabel \"" << layout.xlabel << "\"\n";
  gp << "set ylabel \"" << layout.ylabel << "\"\n";
  if (layout.logx) gp << "set logscale x\n";
  if (layout.logy) gp << "set logscale y\n";
  gp << "set key top right\n";
  gp << "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i) gp << ", \\\n     ";
    gp << "\"" << curves[i].filename << "\" using 1:2 skip 1 with lines title \""
       << curves[i].title << "\"";
  }
  gp << '\n';
  gp.close();
  std::cerr << "wrote " << (outdir / name.str()).string() << '\n';
}

// Curves are computed in a worker per curve and collected by index.
std::vector<Curve> run_parallel(std::vector<std::function<Curve()>> jobs) {
  std::vector<std::future<Curve>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
  std::vector<Curve> curves;
  curves.reserve(jobs.size());
  for (auto& f : futures) curves.push_back(f.get());
  return curves;
}

std::vector<std::pair<double, double>> samples_to_points(const std::vector<SigmaSample>& samples) {
  std::vector<std::pair<double, double>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.emplace_back(s.dxx, s.sigma);
  return out;
}

// Relative entropy decay for a fixed initial state; one curve per gamma.
// Defaults: d_pp = 10, cutoff ratio 0.1 (so d_px = 1), d_xx at the Dekker
// minimum, gamma in {0.1, 1, 10}.
void figure_relative_entropy(int n, const fs::path& outdir, const FigureOptions& opt,
                             const GaussianCVector& state0) {
  const std::vector<double> gammas = opt.gammas.value_or(std::vector<double>{0.1, 1.0, 10.0});
  const double tau_max = opt.tau_max.value_or(60.0);
  const int points = opt.points.value_or(600);
  const double d_pp = 10.0;
  const double ratio = 0.1;

  std::vector<std::function<Curve()>> jobs;
  for (double g : gammas) {
    jobs.push_back([=]() {
      ModelCoefficients coeffs;
      coeffs.gamma = g;
      coeffs.d_pp = d_pp;
      coeffs.d_px = d_pp * ratio;
      coeffs = coeffs.with_dxx(dekker_min(coeffs));
      const auto grid = numerics::linear_grid(0.0, tau_max, points);
      Curve curve;
      curve.filename = "fig0" + std::to_string(n) + "_gamma_" + tagged(g) + ".csv";
      curve.title = "gamma' = " + fmt(g);
      curve.points = relative_entropy_trajectory(state0, coeffs, grid);
      return curve;
    });
  }
  write_figure(n, outdir, {"tau", "relative entropy [nats]", {"tau", "s_rel"}, false, false},
               run_parallel(std::move(jobs)));
}

// Entropy production over d_xx; one curve per gamma with d_pp = 2 gamma,
// d_px = 0.2 gamma, gamma in {0.8, 1, 1.2}; c4(0) = c5(0) = 2.
void figure_sigma_over_dxx(int n, const fs::path& outdir, const FigureOptions& opt,
                           bool displaced_steady) {
  const std::vector<double> gammas = opt.gammas.value_or(std::vector<double>{0.8, 1.0, 1.2});
  const double dxx_max = opt.dxx_max.value_or(20.0);
  const int points = opt.points.value_or(400);

  std::vector<std::function<Curve()>> jobs;
  for (double g : gammas) {
    jobs.push_back([=]() {
      ModelCoefficients coeffs;
      coeffs.gamma = g;
      coeffs.d_pp = 2.0 * g;
      coeffs.d_px = 0.2 * g;
      const auto grid = numerics::linear_grid(dekker_min(coeffs), dxx_max, points);
      Curve curve;
      curve.filename = "fig0" + std::to_string(n) + "_gamma_" + tagged(g) + ".csv";
      curve.title = "gamma' = " + fmt(g);
      if (displaced_steady) {
        curve.points = samples_to_points(
            scan_sigma_family(DisplacedSqueezed{2.0, 2.0}, coeffs, grid));
      } else {
        const GaussianCVector state0{1.0, 1.0, 1.0, 2.0, 2.0, 0.0};
        curve.points = samples_to_points(scan_sigma(state0, coeffs, grid));
      }
      return curve;
    });
  }
  write_figure(n, outdir,
               {"D'_xx", "sigma/omega", {"dxx", "sigma"}, false, false},
               run_parallel(std::move(jobs)));
}

// Renormalized entropy production for gamma = 1, d_pp = 2, d_px = 0.2 and the
// given displacement pairs.
void figure_sigma_renormalized(int n, const fs::path& outdir, const FigureOptions& opt,
                               const std::vector<std::pair<double, double>>& pairs) {
  const double dxx_max = opt.dxx_max.value_or(100.0);
  const int points = opt.points.value_or(400);

  std::vector<std::function<Curve()>> jobs;
  for (const auto& [c4, c5] : pairs) {
    jobs.push_back([=]() {
      ModelCoefficients coeffs;
      coeffs.gamma = 1.0;
      coeffs.d_pp = 2.0;
      coeffs.d_px = 0.2;
      const auto grid = numerics::log_grid(dekker_min(coeffs), dxx_max, points);
      Curve curve;
      curve.filename = "fig0" + std::to_string(n) + "_c4_" + tagged(c4) + "_c5_" +
                       tagged(c5) + ".csv";
      curve.title = "c4(0)=" + fmt(c4) + ", c5(0)=" + fmt(c5);
      curve.points.reserve(grid.size());
      for (double d : grid) {
        curve.points.emplace_back(d, sigma_renormalized(c4, c5, coeffs.with_dxx(d)));
      }
      return curve;
    });
  }
  write_figure(n, outdir,
               {"D'_xx", "sigma_R", {"dxx", "sigma_r"}, true, false},
               run_parallel(std::move(jobs)));
}

// Near-steady family (offset x = 0.1), T' = 100, cutoff ratio 0.1.
void figure_near_steady(int n, const fs::path& outdir, const FigureOptions& opt, double gamma) {
  const double dxx_max = opt.dxx_max.value_or(1e4);
  const int points = opt.points.value_or(500);
  const auto coeffs = high_temp_coefficients(gamma, 100.0, 0.1);
  const auto grid = numerics::log_grid(dekker_min(coeffs), dxx_max, points);
  Curve curve;
  curve.filename = "fig0" + std::to_string(n) + "_gamma_" + tagged(gamma) + ".csv";
  curve.title = "gamma' = " + fmt(gamma);
  curve.points = samples_to_points(scan_sigma_family(NearSteady{0.1, 0.0}, coeffs, grid));
  write_figure(n, outdir,
               {"D'_xx", "sigma/omega", {"dxx", "sigma"}, true, false}, {curve});
}

// Unrelated family (c1 = c3 = 50), cutoff ratio 0.1; curves over gamma or T'.
void figure_unrelated(int n, const fs::path& outdir, const FigureOptions& opt) {
  const double dxx_max = opt.dxx_max.value_or(100.0);
  const int points = opt.points.value_or(500);
  const double x = 50.0;

  std::vector<std::pair<double, double>> runs;  // (gamma, temperature)
  if (n == 9) {
    for (double g : opt.gammas.value_or(std::vector<double>{1.0, 2.0, 3.0}))
      runs.emplace_back(g, 100.0);
  } else {
    for (double t : opt.temperatures.value_or(std::vector<double>{100.0, 125.0, 150.0}))
      runs.emplace_back(1.0, t);
  }

  std::vector<std::function<Curve()>> jobs;
  for (const auto& [g, t] : runs) {
    jobs.push_back([=]() {
      const auto coeffs = high_temp_coefficients(g, t, 0.1);
      const auto grid = numerics::linear_grid(dekker_min(coeffs), dxx_max, points);
      GaussianCVector state0;
      state0.c1 = state0.c3 = x;
      state0.c2 = state0.c4 = state0.c5 = 0.0;
      Curve curve;
      curve.filename = "fig" + std::string(n < 10 ? "0" : "") + std::to_string(n) +
                       (n == 9 ? "_gamma_" + tagged(g) : "_t_" + tagged(t)) + ".csv";
      curve.title = (n == 9 ? "gamma' = " + fmt(g) : "T' = " + fmt(t));
      curve.points = samples_to_points(scan_sigma(state0, coeffs, grid));
      return curve;
    });
  }
  write_figure(n, outdir,
               {"D'_xx", "sigma/omega", {"dxx", "sigma"}, false, false},
               run_parallel(std::move(jobs)));
}

}  // namespace

void emit_figure(int n, const fs::path& outdir, const FigureOptions& options) {
  switch (n) {
    case 1:
      figure_relative_entropy(1, outdir, options, coherent_state({2.0, 2.0}));
      break;
    case 2:
      figure_relative_entropy(2, outdir, options, thermal_state(2.0));
      break;
    case 3:
      figure_sigma_over_dxx(3, outdir, options, /*displaced_steady=*/false);
      break;
    case 4:
      figure_sigma_over_dxx(4, outdir, options, /*displaced_steady=*/true);
      break;
    case 5:
      figure_sigma_renormalized(5, outdir, options, {{0.5, 1.0}, {1.0, 1.0}, {1.0, 0.5}});
      break;
    case 6:
      figure_sigma_renormalized(6, outdir, options, {{1.0, 0.5}, {1.0, 0.4}, {1.0, 0.3}});
      break;
    case 7:
      figure_near_steady(7, outdir, options, 1.0);
      break;
    case 8:
      figure_near_steady(8, outdir, options, 4.0);
      break;
    case 9:
    case 10:
      figure_unrelated(n, outdir, options);
      break;
    default:
      throw std::invalid_argument("figure index must lie in 1..10");
  }
}

}  // namespace qbm::tools
