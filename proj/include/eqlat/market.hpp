#pragma once

#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "eqlat/lattice.hpp"

namespace eqlat {

// ---------------------------------------------------------------------------
// Formula templates. Coefficients are functions of (t_n, C, S, regime); the
// vocabulary is closed so that configurations serialise exactly.
// ---------------------------------------------------------------------------

struct ConstantFormula {
  double value = 0.0;
  friend bool operator==(const ConstantFormula&, const ConstantFormula&) = default;
};

/// intercept + slope * S
struct AffineInS {
  double intercept = 0.0;
  double slope = 0.0;
  friend bool operator==(const AffineInS&, const AffineInS&) = default;
};

/// r = sqrt(scale * (arctan(S) + offset)); the default is r^2 = arctan(S) + pi/2.
struct ArctanMpr {
  double scale = 1.0;
  double offset = std::numbers::pi / 2.0;
  friend bool operator==(const ArctanMpr&, const ArctanMpr&) = default;
};

using CoefficientFormula = std::variant<ConstantFormula, AffineInS>;
using MprFormula = std::variant<ConstantFormula, ArctanMpr>;

double evaluate(const CoefficientFormula& f, double s);
double evaluate(const MprFormula& f, double s);

struct CoefficientSpec {
  CoefficientFormula muC = ConstantFormula{0.1};
  CoefficientFormula sigmaC = ConstantFormula{0.2};
  CoefficientFormula muS = ConstantFormula{0.3};
  CoefficientFormula sigmaS = ConstantFormula{0.5};
  double rho = 0.5;
  /// When set, authoritative: the effective drift becomes muC = r * sigmaC.
  std::optional<MprFormula> mprOverride;

  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

struct ForwardState {
  double c = 0.0;  // traded asset
  double s = 0.0;  // non-traded level
};

/// Coefficients in force on [t_n, t_{n+1}) at one node.
struct LocalCoefficients {
  double muC = 0.0;  // effective drift (r * sigmaC under an override)
  double sigmaC = 0.0;
  double muS = 0.0;
  double sigmaS = 0.0;
  double rho = 0.0;
  double mpr = 0.0;
};

/// Evaluates the coefficient templates at a node state, applies the MPR
/// override and checks sigma > 0, r >= 0 and r*sqrt(h) < 1.
LocalCoefficients local_coefficients(const CoefficientSpec& spec, int timeIndex,
                                     const ForwardState& state, double h);

/// r^c at a node state (override if present, else muC / sigmaC).
double market_price_of_risk(const CoefficientSpec& spec, int timeIndex,
                            const ForwardState& state, double h);

/// One step of the forward difference equations. Throws ConfigError if either
/// price would leave (0, inf).
ForwardState evolve_forward(const ForwardState& parent, const ShockVector& shock,
                            const LocalCoefficients& coef, double h);

// ---------------------------------------------------------------------------
// Income, dividend and payoff templates.
// ---------------------------------------------------------------------------

struct ConstantIncome {
  double value = 0.0;
  friend bool operator==(const ConstantIncome&, const ConstantIncome&) = default;
};

/// coef * exp(slope * (S_time - s0) * h); time < 0 means the terminal date.
struct ExpAffineIncome {
  double coef = 0.0;
  double slope = 0.0;
  int time = -1;
  friend bool operator==(const ExpAffineIncome&, const ExpAffineIncome&) = default;
};

/// db^{component}_{step} == sign (component is 0-based)
struct ShockCondition {
  int step = 0;
  int component = 0;
  int sign = 1;
  friend bool operator==(const ShockCondition&, const ShockCondition&) = default;
};

/// J_{time} == state
struct RegimeCondition {
  int time = 0;
  int state = 0;
  friend bool operator==(const RegimeCondition&, const RegimeCondition&) = default;
};

/// coef * exp(rate * h) * prod of indicators.
struct IndicatorIncome {
  double coef = 0.0;
  double rate = 0.0;
  std::vector<ShockCondition> shocks;
  std::vector<RegimeCondition> regimes;
  friend bool operator==(const IndicatorIncome&, const IndicatorIncome&) = default;
};

using IncomeTerm = std::variant<ConstantIncome, ExpAffineIncome, IndicatorIncome>;

struct IncomeSpec {
  std::vector<IncomeTerm> terms;

  bool identically_zero() const;
  /// Highest shock component referenced (0-based), or -1.
  int max_component() const;
  friend bool operator==(const IncomeSpec&, const IncomeSpec&) = default;
};

struct DividendSpec {
  CoefficientFormula phi = ConstantFormula{0.0};
  bool zero() const;
  friend bool operator==(const DividendSpec&, const DividendSpec&) = default;
};

struct CallPayoff {
  double strike = 10.0;
  friend bool operator==(const CallPayoff&, const CallPayoff&) = default;
};
/// 1 when the first component of the last increment is +1.
struct DigitalPayoff {
  friend bool operator==(const DigitalPayoff&, const DigitalPayoff&) = default;
};
struct ConstantPayoff {
  double value = 0.0;
  friend bool operator==(const ConstantPayoff&, const ConstantPayoff&) = default;
};

using PayoffSpec = std::variant<CallPayoff, DigitalPayoff, ConstantPayoff>;

/// Forward prices and local coefficients over a lattice.
class MarketTree {
 public:
  MarketTree(const Lattice& lattice, const CoefficientSpec& spec, const ForwardState& initial);

  const ForwardState& state(NodeId id) const { return states_[id]; }
  /// Defined on non-terminal nodes only.
  const LocalCoefficients& coefficients(NodeId id) const { return coefs_[id]; }
  double s0() const { return s0_; }

 private:
  std::vector<ForwardState> states_;
  std::vector<LocalCoefficients> coefs_;
  double s0_;
};

/// gamma(J_{t_n}) at the node.
double risk_aversion(const Lattice& lattice, NodeId id);

double income(const Lattice& lattice, const MarketTree& market, NodeId terminal,
              const IncomeSpec& spec);

double dividend(const DividendSpec& spec, const MarketTree& market, NodeId id);

double payoff(const PayoffSpec& spec, const Lattice& lattice, const MarketTree& market,
              NodeId terminal);

/// Payoff lower/upper bounds over every terminal node.
std::pair<double, double> payoff_bounds(const PayoffSpec& spec, const Lattice& lattice,
                                        const MarketTree& market);

}  // namespace eqlat
