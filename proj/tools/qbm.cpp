// Command-line front end: propagation, relative entropy, entropy-production
// scans, position-diffusion coefficient selection, spectra, and the canned
// figure data sets. All numeric output goes to CSV/report files under --out;
// progress notes go to standard error. Outputs are deterministic.

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qbm/dxx_solver.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/entropy.hpp"
#include "qbm/errors.hpp"
#include "qbm/gaussian_state.hpp"
#include "qbm/numerics.hpp"
#include "figures.hpp"
#include "io.hpp"

namespace fs = std::filesystem;
using namespace qbm;
using qbm::tools::fmt;

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitSolverFailure = 3;

struct CoefficientOptions {
  double gamma = 1.0;
  std::optional<double> d_pp, d_px, d_xx;
  std::optional<double> temperature;
  double omega_ratio = 0.0;

  ModelCoefficients build(bool need_dxx) const {
    ModelCoefficients c;
    if (temperature) {
      if (d_pp || d_px) {
        throw std::invalid_argument("give either --temperature or --dpp/--dpx, not both");
      }
      c = high_temp_coefficients(gamma, *temperature, omega_ratio);
    } else {
      if (!d_pp) throw std::invalid_argument("coefficients require --dpp or --temperature");
      c.gamma = gamma;
      c.d_pp = *d_pp;
      c.d_px = d_px.value_or(0.0);
      c.omega_ratio = omega_ratio;
    }
    if (d_xx) c.d_xx = *d_xx;
    if (need_dxx && !c.d_xx) c.d_xx = dekker_min(c);
    return c;
  }
};

// "coherent:re,im" | "thermal:n" | "cvector:c1,c2,c3,c4,c5"
// | "displaced-squeezed:c4,c5" | "near-steady:x[,y]" | "unrelated:x"
struct StateSpec {
  std::string kind;
  std::vector<double> args;

  static StateSpec parse(const std::string& text) {
    StateSpec spec;
    const auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (colon != std::string::npos) spec.args = qbm::tools::parse_double_list(text.substr(colon + 1));
    return spec;
  }

  bool is_family() const {
    return kind == "displaced-squeezed" || kind == "near-steady" || kind == "unrelated";
  }

  InitialConditionFamily family() const {
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi)
        throw std::invalid_argument("state spec '" + kind + "' has the wrong arity");
    };
    if (kind == "displaced-squeezed") {
      need(2, 2);
      return DisplacedSqueezed{args[0], args[1]};
    }
    if (kind == "near-steady") {
      need(1, 2);
      return NearSteady{args[0], args.size() > 1 ? args[1] : 0.0};
    }
    if (kind == "unrelated") {
      need(1, 1);
      return Unrelated{args[0]};
    }
    throw std::invalid_argument("state spec '" + kind + "' is not a family");
  }

  GaussianCVector state(const std::optional<ModelCoefficients>& coeffs) const {
    if (is_family()) {
      if (!coeffs) throw std::invalid_argument("family state specs need model coefficients");
      return make_initial_state(family(), *coeffs);
    }
    if (kind == "coherent") {
      if (args.size() != 2) throw std::invalid_argument("coherent state needs re,im");
      return coherent_state({args[0], args[1]});
    }
    if (kind == "thermal") {
      if (args.size() != 1) throw std::invalid_argument("thermal state needs nbar");
      return thermal_state(args[0]);
    }
    if (kind == "cvector") {
      if (args.size() != 5) throw std::invalid_argument("cvector needs c1,c2,c3,c4,c5");
      GaussianCVector c{args[0], args[1], args[2], args[3], args[4], 0.0};
      const auto report = validate(c);
      if (!report.valid) {
        std::string msg = "cvector state is not a quantum state";
        for (const auto& f : report.failures) msg += "; " + f;
        throw std::invalid_argument(msg);
      }
      return c;
    }
    throw std::invalid_argument("unknown state spec '" + kind + "'");
  }
};

fs::path prepare_outdir(const std::string& out) {
  if (out.empty()) throw std::invalid_argument("--out DIR is required");
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// The config file is a flat key=value list; keys mirror the long option names.
// Its pairs are injected as options before the explicit command line, which
// therefore wins.
std::vector<std::string> effective_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.empty()) return args;

  std::vector<std::string> merged;
  merged.push_back(args.front());  // subcommand
  for (const auto& [key, value] : qbm::tools::read_config(config_path)) {
    std::string opt = key;
    for (auto& ch : opt)
      if (ch == '_') ch = '-';
    merged.push_back("--" + opt);
    if (!value.empty()) merged.push_back(value);
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

void add_coefficient_options(CLI::App* cmd, CoefficientOptions& opt) {
  auto takelast = [](CLI::Option* o) { o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
  takelast(cmd->add_option("--gamma", opt.gamma, "relaxation rate over omega"));
  takelast(cmd->add_option("--dpp", opt.d_pp, "momentum diffusion (dimensionless)"));
  takelast(cmd->add_option("--dpx", opt.d_px, "cross diffusion (dimensionless)"));
  takelast(cmd->add_option("--dxx", opt.d_xx, "position diffusion (dimensionless)"));
  takelast(cmd->add_option("--temperature", opt.temperature,
                           "k_B T / omega; derives dpp and dpx from the Ohmic bath"));
  takelast(cmd->add_option("--omega-ratio", opt.omega_ratio, "omega over the cutoff"));
  cmd->add_option("--config", "flat key=value config file")->expected(1);
}

int run(int argc, char** argv) {
  CLI::App app{"Gaussian-state dynamics of the Lindblad-form Caldeira-Leggett "
               "master equation: relative entropy, entropy production, and "
               "position-diffusion coefficient selection"};
  app.require_subcommand(1);
  auto takelast = [](CLI::Option* o) { o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };

  // evolve
  auto* evolve = app.add_subcommand("evolve", "propagate a c-vector and emit tau,c1..c6,nbar");
  CoefficientOptions evolve_coeffs;
  std::string evolve_state = "coherent:0,0", evolve_out;
  double evolve_tau_max = 10.0;
  int evolve_points = 200;
  add_coefficient_options(evolve, evolve_coeffs);
  takelast(evolve->add_option("--state", evolve_state, "initial state spec"));
  takelast(evolve->add_option("--tau-max", evolve_tau_max, "final dimensionless time"));
  takelast(evolve->add_option("--tau-points", evolve_points, "grid size"));
  takelast(evolve->add_option("--out", evolve_out, "output directory")->required());

  // rel-entropy
  auto* relent = app.add_subcommand("rel-entropy",
                                    "relative entropy to the steady state along a trajectory");
  CoefficientOptions relent_coeffs;
  std::string relent_state = "thermal:2", relent_out;
  double relent_tau_max = 10.0;
  int relent_points = 200;
  add_coefficient_options(relent, relent_coeffs);
  takelast(relent->add_option("--state", relent_state, "initial state spec"));
  takelast(relent->add_option("--tau-max", relent_tau_max, "final dimensionless time"));
  takelast(relent->add_option("--tau-points", relent_points, "grid size"));
  takelast(relent->add_option("--out", relent_out, "output directory")->required());

  // sigma-scan
  auto* scan = app.add_subcommand("sigma-scan", "entropy production over a d_xx grid");
  CoefficientOptions scan_coeffs;
  std::string scan_state = "unrelated:50", scan_out, scan_scale = "log";
  std::optional<double> scan_min;
  double scan_max = 100.0;
  int scan_points = 200;
  add_coefficient_options(scan, scan_coeffs);
  takelast(scan->add_option("--state", scan_state, "initial state or family spec"));
  takelast(scan->add_option("--dxx-min", scan_min, "grid start (default: Dekker minimum)"));
  takelast(scan->add_option("--dxx-max", scan_max, "grid end"));
  takelast(scan->add_option("--dxx-points", scan_points, "grid size"));
  takelast(scan->add_option("--dxx-scale", scan_scale, "log or linear")
               ->check(CLI::IsMember({"log", "linear"})));
  takelast(scan->add_option("--out", scan_out, "output directory")->required());

  // solve-dxx
  auto* solve = app.add_subcommand("solve-dxx",
                                   "select d_xx from the entropy-production extremum");
  CoefficientOptions solve_coeffs;
  std::string solve_family = "displaced-squeezed:2,2", solve_out;
  add_coefficient_options(solve, solve_coeffs);
  takelast(solve->add_option("--family", solve_family, "initial-condition family spec"));
  takelast(solve->add_option("--out", solve_out, "output directory")->required());

  // spectrum
  auto* spect = app.add_subcommand("spectrum", "density-matrix eigenvalues of a state");
  CoefficientOptions spect_coeffs;
  std::string spect_state = "thermal:2", spect_out;
  int spect_nmax = 20;
  add_coefficient_options(spect, spect_coeffs);
  takelast(spect->add_option("--state", spect_state, "state spec"));
  takelast(spect->add_option("--n-max", spect_nmax, "largest eigenvalue index"));
  takelast(spect->add_option("--out", spect_out, "output directory")->required());

  // figure
  auto* figure = app.add_subcommand("figure", "emit the data set and plot script for figure N");
  int figure_n = 1;
  std::string figure_out, figure_gammas, figure_temps;
  qbm::tools::FigureOptions figure_opt;
  double figure_tau_max = 0.0, figure_dxx_max = 0.0;
  int figure_points = 0;
  figure->add_option("n", figure_n, "figure index (1..10)")->required();
  takelast(figure->add_option("--points", figure_points, "grid size override"));
  takelast(figure->add_option("--tau-max", figure_tau_max, "time-range override"));
  takelast(figure->add_option("--dxx-max", figure_dxx_max, "d_xx-range override"));
  takelast(figure->add_option("--gammas", figure_gammas, "comma list overriding the gamma set"));
  takelast(figure->add_option("--temperatures", figure_temps, "comma list overriding the T' set"));
  figure->add_option("--config", "flat key=value config file")->expected(1);
  takelast(figure->add_option("--out", figure_out, "output directory")->required());

  const auto args = effective_args(argc, argv);
  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  if (evolve->parsed()) {
    const auto outdir = prepare_outdir(evolve_out);
    const auto coeffs = evolve_coeffs.build(true);
    const auto state0 = StateSpec::parse(evolve_state).state(coeffs);
    const auto grid = numerics::linear_grid(0.0, evolve_tau_max, evolve_points);
    const auto prop = propagate_analytic(state0, coeffs, grid);
    qbm::tools::CsvWriter csv(outdir / "evolve.csv",
                              {"tau", "c1", "c2", "c3", "c4", "c5", "c6", "nbar"});
    for (std::size_t i = 0; i < prop.tau.size(); ++i) {
      const auto& c = prop.states[i];
      csv.row({prop.tau[i], c.c1, c.c2, c.c3, c.c4, c.c5, c.c6, nbar(c)});
    }
    csv.close();
    return 0;
  }

  if (relent->parsed()) {
    const auto outdir = prepare_outdir(relent_out);
    const auto coeffs = relent_coeffs.build(true);
    const auto state0 = StateSpec::parse(relent_state).state(coeffs);
    const auto grid = numerics::linear_grid(0.0, relent_tau_max, relent_points);
    qbm::tools::CsvWriter csv(outdir / "rel_entropy.csv", {"tau", "s_rel"});
    for (const auto& [tau, s] : relative_entropy_trajectory(state0, coeffs, grid)) {
      csv.row({tau, s});
    }
    csv.close();
    return 0;
  }

  if (scan->parsed()) {
    const auto outdir = prepare_outdir(scan_out);
    const auto coeffs = scan_coeffs.build(false);
    const double lo = scan_min.value_or(dekker_min(coeffs));
    const auto grid = scan_scale == "log" ? numerics::log_grid(lo, scan_max, scan_points)
                                          : numerics::linear_grid(lo, scan_max, scan_points);
    const auto spec = StateSpec::parse(scan_state);
    const auto samples = spec.is_family()
                             ? scan_sigma_family(spec.family(), coeffs, grid)
                             : scan_sigma(spec.state(std::nullopt), coeffs, grid);
    qbm::tools::CsvWriter csv(outdir / "sigma_scan.csv", {"dxx", "sigma"});
    for (const auto& s : samples) csv.row({s.dxx, s.sigma});
    csv.close();
    return 0;
  }

  if (solve->parsed()) {
    const auto outdir = prepare_outdir(solve_out);
    const auto coeffs = solve_coeffs.build(false);
    const auto family = StateSpec::parse(solve_family).family();
    const auto result = classify_and_solve(family, coeffs);

    std::ofstream report(outdir / "solve_dxx.txt", std::ios::binary);
    if (!report) throw std::runtime_error("cannot open solve_dxx.txt for writing");
    const char* kind = result.kind == ExtremumKind::global_max ? "global_max" : "global_min";
    const char* regime = result.regime == Regime::displaced_squeezed ? "displaced_squeezed"
                         : result.regime == Regime::near_steady      ? "near_steady"
                                                                     : "unrelated";
    report << "# d_xx selected from the extremum of the entropy production over\n"
           << "# [dekker_min, inf); the reference line is the high-temperature\n"
           << "# closed-form estimate for this regime.\n"
           << "family=" << regime << '\n'
           << "gamma=" << fmt(coeffs.gamma) << '\n'
           << "d_pp=" << fmt(coeffs.d_pp) << '\n'
           << "d_px=" << fmt(coeffs.d_px) << '\n';
    if (coeffs.temperature) report << "temperature=" << fmt(*coeffs.temperature) << '\n';
    if (coeffs.omega_ratio) report << "omega_ratio=" << fmt(*coeffs.omega_ratio) << '\n';
    report << "dekker_min=" << fmt(dekker_min(coeffs)) << '\n'
           << "dxx_selected=" << fmt(result.dxx) << '\n'
           << "kind=" << kind << '\n'
           << "clamped=" << (result.clamped ? "true" : "false") << '\n'
           << "regime=" << regime << '\n'
           << "reference=" << fmt(result.diagnostics.reference) << '\n'
           << "reference_gap=" << fmt(result.diagnostics.reference_gap) << '\n'
           << "stationarity_residual=" << fmt(result.diagnostics.stationarity_residual) << '\n'
           << "fallback_search=" << (result.diagnostics.fallback_search ? "true" : "false") << '\n'
           << "hightemp_warning=" << (result.diagnostics.hightemp_warning ? "true" : "false")
           << '\n';
    if (coeffs.temperature) {
      // The medium-temperature path-integral derivation pins d_xx at
      // gamma/(6 m k_B T), i.e. gamma/(3 T') dimensionless.
      report << "medium_temperature_estimate=" << fmt(coeffs.gamma / (3.0 * *coeffs.temperature))
             << '\n';
    }
    report.close();
    std::cerr << "wrote " << (outdir / "solve_dxx.txt").string() << '\n';
    return 0;
  }

  if (spect->parsed()) {
    const auto outdir = prepare_outdir(spect_out);
    const auto spec = StateSpec::parse(spect_state);
    std::optional<ModelCoefficients> coeffs;
    if (spec.is_family()) coeffs = spect_coeffs.build(true);
    const auto state = spec.state(coeffs);
    const auto lambdas = spectrum(state, spect_nmax);
    qbm::tools::CsvWriter csv(outdir / "spectrum.csv", {"n", "lambda"});
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      csv.row({static_cast<double>(i), lambdas[i]});
    }
    csv.close();
    return 0;
  }

  if (figure->parsed()) {
    const auto outdir = prepare_outdir(figure_out);
    if (figure_points > 0) figure_opt.points = figure_points;
    if (figure_tau_max > 0) figure_opt.tau_max = figure_tau_max;
    if (figure_dxx_max > 0) figure_opt.dxx_max = figure_dxx_max;
    if (!figure_gammas.empty()) figure_opt.gammas = qbm::tools::parse_double_list(figure_gammas);
    if (!figure_temps.empty())
      figure_opt.temperatures = qbm::tools::parse_double_list(figure_temps);
    qbm::tools::emit_figure(figure_n, outdir, figure_opt);
    return 0;
  }

  return kExitInvalidInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const SolverDiagnosticError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
}
