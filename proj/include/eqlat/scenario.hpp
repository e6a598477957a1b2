#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "eqlat/lattice.hpp"
#include "eqlat/market.hpp"
#include "eqlat/regime_chain.hpp"

namespace eqlat {

/// Which solutions and checks a run should produce.
struct RunFlags {
  bool consistent = true;
  bool inconsistent = true;
  bool verify = true;
  friend bool operator==(const RunFlags&, const RunFlags&) = default;
};

/// Complete declarative market description.
struct ScenarioConfig {
  std::string name = "scenario";
  TimeGrid grid{1, 0.3};
  int dim = 3;
  ForwardState initial{10.0, 10.0};
  CoefficientSpec coefficients;
  RegimeChain chain = RegimeChain::single(0.7);
  IncomeSpec income;
  DividendSpec dividend;
  PayoffSpec payoff = CallPayoff{10.0};
  RunFlags run;
  std::uint64_t pathCap = Lattice::kDefaultPathCap;

  /// Static checks (dimensions, |rho| < 1, stochastic rows, template indices)
  /// plus the coefficient guards at the root.
  /// Node-level guards run when a Model is built.
  void validate() const;

  friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);
};

inline bool operator==(const ForwardState& a, const ForwardState& b) {
  return a.c == b.c && a.s == b.s;
}

/// Lattice and forward tree built from a validated config. Immutable.
struct Model {
  ScenarioConfig config;
  Lattice lattice;
  MarketTree market;

  explicit Model(ScenarioConfig cfg);
};

}  // namespace eqlat
