#ifndef QBM_TOOLS_FIGURES_HPP
#define QBM_TOOLS_FIGURES_HPP

#include <filesystem>
#include <optional>
#include <vector>

namespace qbm::tools {

// Optional overrides for the hard-coded per-figure defaults.
struct FigureOptions {
  std::optional<int> points;
  std::optional<double> tau_max;
  std::optional<double> dxx_max;
  std::optional<std::vector<double>> gammas;
  std::optional<std::vector<double>> temperatures;
};

// Writes one CSV per curve plus a gnuplot script; n in 1..10.
void emit_figure(int n, const std::filesystem::path& outdir, const FigureOptions& options);

}  // namespace qbm::tools

#endif
