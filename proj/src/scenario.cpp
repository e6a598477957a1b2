#include "eqlat/scenario.hpp"

#include <cmath>

#include "eqlat/errors.hpp"

namespace eqlat {

void ScenarioConfig::validate() const {
  if (dim < 1 || dim > ShockVector::kMaxDim) {
    throw ConfigError("walk dimension d must be in [1, 16]");
  }
  if (!(std::abs(coefficients.rho) < 1.0)) {
    throw ConfigError("correlation must satisfy |rho| < 1 (got rho = " +
                      std::to_string(coefficients.rho) + ")", "E_RHO");
  }
  if (coefficients.rho != 0.0 && dim < 2) {
    throw ConfigError("a nonzero correlation needs walk dimension d >= 2");
  }
  if (!(initial.c > 0.0) || !(initial.s > 0.0)) {
    throw ConfigError("initial prices c and s must be positive");
  }
  chain.validate();
  // Root-level admissibility; every other node is checked when the tree is built.
  local_coefficients(coefficients, 0, initial, grid.h());

  const int steps = grid.steps();
  for (const auto& term : income.terms) {
    if (const auto* e = std::get_if<ExpAffineIncome>(&term)) {
      if (e->time > steps) throw ConfigError("income references S beyond the horizon");
    }
    if (const auto* ind = std::get_if<IndicatorIncome>(&term)) {
      for (const auto& c : ind->shocks) {
        if (c.step < 0 || c.step >= steps) {
          throw ConfigError("income indicator references shock step " +
                            std::to_string(c.step) + " outside [0, N)");
        }
        if (c.component < 0 || c.component >= dim) {
          throw ConfigError("income indicator references shock component " +
                            std::to_string(c.component + 1) + " but d = " +
                            std::to_string(dim));
        }
        if (c.sign != 1 && c.sign != -1) throw ConfigError("shock sign must be +1 or -1");
      }
      for (const auto& c : ind->regimes) {
        if (c.time < 0 || c.time > steps) {
          throw ConfigError("income indicator references regime time outside [0, N]");
        }
        if (c.state < 0 || c.state >= chain.size()) {
          throw ConfigError("income indicator references unknown regime", "E_REGIME");
        }
      }
    }
  }
  if (const auto* call = std::get_if<CallPayoff>(&payoff); call && !std::isfinite(call->strike)) {
    throw ConfigError("strike must be finite");
  }
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.name == b.name && a.grid == b.grid && a.dim == b.dim && a.initial == b.initial &&
         a.coefficients == b.coefficients && a.chain == b.chain && a.income == b.income &&
         a.dividend == b.dividend && a.payoff == b.payoff && a.run == b.run &&
         a.pathCap == b.pathCap;
}

Model::Model(ScenarioConfig cfg)
    : config((cfg.validate(), std::move(cfg))),
      lattice(config.grid, config.dim, config.chain, config.pathCap),
      market(lattice, config.coefficients, config.initial) {}

}  // namespace eqlat
