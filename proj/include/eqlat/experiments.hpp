#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eqlat/scenario.hpp"

namespace eqlat {

/// Knobs a figure run accepts from the command line.
struct FigureOptions {
  std::uint64_t seed = 42;
  double gammaShift = 0.2;  // fig9: gamma(bear) = gamma(bull) * (1 + shift)
  int pathSteps = 30;       // fig1/fig2 sample path length
  std::uint64_t pathCap = Lattice::kDefaultPathCap;
};

struct FigureTable {
  std::string id;  // fig1 ... fig9; also the CSV stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Figure ids accepted by scenario() and run_figure().
const std::vector<std::string>& figure_ids();

/// Accepts the full ids above and the short forms "fig1" ... "fig9".
std::string canonical_figure_id(const std::string& id);

/// The base configuration behind a figure, before any sweep variable is set.
ScenarioConfig scenario(const std::string& figureId, const FigureOptions& opt = {});

/// One table per plotted figure (fig1_2_paths and fig3_4_5_eq_vs_indiff give several).
std::vector<FigureTable> run_figure(const std::string& figureId, const FigureOptions& opt = {});

/// Grid lo, lo + step, ..., hi with the endpoint hit exactly.
std::vector<double> sweep_grid(double lo, double hi, int points);

}  // namespace eqlat
