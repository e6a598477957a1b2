#pragma once

#include <cmath>
#include <vector>

#include "eqlat/experiments.hpp"
#include "eqlat/scenario.hpp"

namespace eqlat::test {

/// Constant-coefficient single-period market with a chosen MPR r and step h.
inline ScenarioConfig constant_mpr(double r, double h, double gamma, int dim = 3) {
  ScenarioConfig c;
  c.name = "constant_mpr";
  c.grid = TimeGrid(1, h);
  c.dim = dim;
  c.coefficients.sigmaC = ConstantFormula{0.2};
  c.coefficients.muC = ConstantFormula{r * 0.2};
  if (dim < 2) c.coefficients.rho = 0.0;
  c.chain = RegimeChain::single(gamma);
  return c;
}

inline RegimeChain two_regimes(double g0, double g1, double p00 = 0.8, double p11 = 0.7,
                               double init0 = 0.5) {
  RegimeChain chain;
  chain.labels = {"bull", "bear"};
  chain.transition.resize(2, 2);
  chain.transition << p00, 1.0 - p00, 1.0 - p11, p11;
  chain.initial.resize(2);
  chain.initial << init0, 1.0 - init0;
  chain.gamma.resize(2);
  chain.gamma << g0, g1;
  return chain;
}

/// N = 2, zero income, constant coefficients with r sqrt(h) = 0.3.
inline ScenarioConfig dominance_scenario(double g0 = 0.5, double g1 = 0.6) {
  ScenarioConfig c = constant_mpr(0.3 / std::sqrt(0.3), 0.3, g0);
  c.name = "dominance";
  c.grid = TimeGrid(2, 0.3);
  c.chain = two_regimes(g0, g1);
  return c;
}

inline void add_spanned(ScenarioConfig& c) { c.income.terms.emplace_back(ExpAffineIncome{7.0, -0.5, -1}); }

inline void add_unspanned(ScenarioConfig& c, int step) {
  const double coef[4] = {5.0, 4.0, 2.0, 1.0};
  const int s1[4] = {1, 1, -1, -1};
  const int s3[4] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) {
    c.income.terms.emplace_back(IndicatorIncome{coef[i], 0.1, {{step, 0, s1[i]}, {step, 2, s3[i]}}, {}});
  }
}

/// payoff {constant, digital, call} x income {0, spanned, spanned + unspanned}
/// x MPR {constant, arctan}: 18 single-period scenarios.
inline std::vector<ScenarioConfig> single_period_corpus() {
  std::vector<ScenarioConfig> out;
  const PayoffSpec payoffs[3] = {ConstantPayoff{2.5}, DigitalPayoff{}, CallPayoff{10.0}};
  const char* payoffNames[3] = {"constant", "digital", "call"};
  for (int p = 0; p < 3; ++p) {
    for (int inc = 0; inc < 3; ++inc) {
      for (int arctan = 0; arctan < 2; ++arctan) {
        ScenarioConfig c = scenario("fig3_4_5_eq_vs_indiff");
        if (!arctan) c.coefficients.mprOverride.reset();
        c.payoff = payoffs[p];
        if (inc >= 1) add_spanned(c);
        if (inc == 2) add_unspanned(c, 0);
        c.name = std::string(payoffNames[p]) + "_inc" + std::to_string(inc) +
                 (arctan ? "_arctan" : "_const");
        out.push_back(c);
      }
    }
  }
  return out;
}

/// Multi-period scenarios with phi = 0, N <= 3.
inline std::vector<ScenarioConfig> multi_period_corpus() {
  std::vector<ScenarioConfig> out;
  out.push_back(scenario("fig8_two_period"));
  out.push_back(scenario("fig9_regime"));
  ScenarioConfig three = scenario("fig8_two_period");
  three.name = "fig8_three_period";
  three.grid = TimeGrid(3, 0.3);
  out.push_back(three);
  ScenarioConfig nine = scenario("fig9_regime");
  nine.name = "fig9_three_period";
  nine.grid = TimeGrid(3, 0.3);
  out.push_back(nine);
  out.push_back(dominance_scenario());
  return out;
}

}  // namespace eqlat::test
