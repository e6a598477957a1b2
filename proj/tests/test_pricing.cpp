#include <gtest/gtest.h>

#include <cmath>

#include "eqlat/errors.hpp"
#include "eqlat/pricing.hpp"
#include "eqlat/verify.hpp"
#include "support.hpp"

using namespace eqlat;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) && std::isnan(b[i])) continue;
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

TEST(Pricing, OneStepLambda) {
  EXPECT_DOUBLE_EQ(one_step_lambda(ShockEvent::up, 1.0, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(one_step_lambda(ShockEvent::down, 1.0, 0.25), 1.5);
}

TEST(Pricing, MertonAlphaWithoutClaim) {
  ScenarioConfig c = test::constant_mpr(1.0, 0.25, 1.0, 1);
  c.payoff = ConstantPayoff{0.0};
  const Model m(c);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  // (log 1.5 - log 0.5) / (2 gamma sigma sqrt(h))
  EXPECT_NEAR(s.alpha[0], (std::log(1.5) - std::log(0.5)) / (2.0 * 0.2 * 0.5), 1e-12);
  EXPECT_NEAR(s.alpha[0], 5.49306, 5e-6);
}

TEST(Pricing, CertaintyEquivalentOfIndependentIncome) {
  ScenarioConfig c = test::constant_mpr(0.0, 0.3, 1.0, 2);
  c.coefficients.rho = 0.0;
  c.payoff = ConstantPayoff{0.0};
  c.income.terms.emplace_back(IndicatorIncome{1.0, 0.0, {{0, 1, 1}}, {}});
  const Model m(c);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  EXPECT_NEAR(s.alpha[0], 0.0, 1e-14);
  EXPECT_NEAR(s.cert_equiv(0, 1.0), -std::log(0.5 * std::exp(-1.0) + 0.5), 1e-14);
  EXPECT_NEAR(s.cert_equiv(0, 1.0), 0.379885, 5e-7);
}

TEST(Pricing, DigitalPriceAndDensity) {
  ScenarioConfig c = test::constant_mpr(1.0, 0.25, 0.7);
  c.payoff = DigitalPayoff{};
  const Model m(c);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  EXPECT_NEAR(s.price[0], 0.25, 1e-14);
  const MeasureDensity d = measure_density(m, s);
  for (std::size_t i = 0; i < d.pathDensity.size(); ++i) {
    const bool up = m.lattice.shock(d.firstTerminal + i)[0] == 1;
    EXPECT_NEAR(d.pathDensity[i], up ? 0.5 : 1.5, 1e-14);
  }
}

TEST(Pricing, TerminalPriceIsPayoff) {
  const Model m(scenario("fig9_regime"));
  for (SolutionMode mode : {SolutionMode::consistent, SolutionMode::inconsistent}) {
    const PricingSolution s = solve_equilibrium(m, mode);
    auto [first, last] = m.lattice.layer(2);
    for (NodeId t = first; t < last; ++t) {
      EXPECT_EQ(s.price[t], payoff(m.config.payoff, m.lattice, m.market, t));
    }
  }
}

TEST(Pricing, SinglePeriodHelperMatchesSolver) {
  const Model m(scenario("fig8_two_period"));
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  auto [first, last] = m.lattice.layer(1);
  for (NodeId id = first; id < last; ++id) EXPECT_EQ(price_single_period(m, id), s.price[id]);
}

TEST(Pricing, DensityIntegratesToOnePerRoot) {
  const Model m(scenario("fig9_regime"));
  const std::vector<double> p = path_probabilities(m.lattice);
  for (SolutionMode mode : {SolutionMode::consistent, SolutionMode::inconsistent}) {
    const PricingSolution s = solve_equilibrium(m, mode);
    const MeasureDensity d = measure_density(m, s);
    std::vector<double> mass(m.lattice.size(), 0.0);
    for (std::size_t i = 0; i < d.pathDensity.size(); ++i) {
      const NodeId t = d.firstTerminal + i;
      mass[m.lattice.root_of(t)] += p[t] / p[m.lattice.root_of(t)] * d.pathDensity[i];
    }
    for (auto [r, end] = m.lattice.roots(); r < end; ++r) EXPECT_NEAR(mass[r], 1.0, 1e-13);
  }
}

// Tower property: the root price equals the Q-expectation of the terminal
// payoff through the cumulative density (phi = 0).
TEST(Pricing, RootPriceIsTerminalExpectation) {
  const Model m(scenario("fig9_regime"));
  const std::vector<double> p = path_probabilities(m.lattice);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  const MeasureDensity d = measure_density(m, s);
  std::vector<double> acc(m.lattice.size(), 0.0);
  for (std::size_t i = 0; i < d.pathDensity.size(); ++i) {
    const NodeId t = d.firstTerminal + i;
    const NodeId r = m.lattice.root_of(t);
    acc[r] += p[t] / p[r] * d.pathDensity[i] * s.price[t];
  }
  for (auto [r, end] = m.lattice.roots(); r < end; ++r) EXPECT_NEAR(acc[r], s.price[r], 1e-12);
}

TEST(Pricing, ConstantPayoffIsPricedAtItsValue) {
  ScenarioConfig c = scenario("fig8_two_period");
  c.payoff = ConstantPayoff{3.25};
  const Model m(c);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  for (NodeId id = 0; id < m.lattice.size(); ++id) EXPECT_NEAR(s.price[id], 3.25, 1e-13);
}

TEST(Pricing, DividendAccruesIntoPrice) {
  ScenarioConfig c = scenario("fig8_two_period");
  c.payoff = ConstantPayoff{1.0};
  c.dividend.phi = ConstantFormula{0.5};
  const Model m(c);
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  EXPECT_NEAR(s.price[0], 1.0 + 2.0 * 0.5 * 0.3, 1e-13);
}

TEST(Pricing, ConstantGammaCollapse) {
  const Model m(scenario("fig8_two_period"));
  const PricingSolution a = solve_equilibrium(m, SolutionMode::consistent);
  const PricingSolution b = solve_equilibrium(m, SolutionMode::inconsistent);
  EXPECT_LE(max_abs_diff(a.price, b.price), 1e-12);
  EXPECT_LE(max_abs_diff(a.alpha, b.alpha), 1e-12);
  EXPECT_LE(max_abs_diff(a.kernel, b.kernel), 1e-12);
}

TEST(Pricing, ModesDifferUnderRegimeSwitching) {
  const Model m(scenario("fig9_regime"));
  const PricingSolution a = solve_equilibrium(m, SolutionMode::consistent);
  const PricingSolution b = solve_equilibrium(m, SolutionMode::inconsistent);
  EXPECT_GT(std::abs(a.price[0] - b.price[0]), 1e-6);
  for (NodeId id = 0; id < m.lattice.size(); ++id) {
    EXPECT_EQ(b.modeGamma[id], risk_aversion(m.lattice, m.lattice.root_of(id)));
    EXPECT_EQ(a.modeGamma[id], risk_aversion(m.lattice, id));
  }
}

TEST(Pricing, IncomeCashShiftMovesOnlyCertaintyEquivalents) {
  ScenarioConfig base = scenario("fig9_regime");
  ScenarioConfig shifted = base;
  shifted.income.terms.emplace_back(ConstantIncome{3.5});
  const Model m0(base);
  const Model m1(shifted);
  for (SolutionMode mode : {SolutionMode::consistent, SolutionMode::inconsistent}) {
    const PricingSolution a = solve_equilibrium(m0, mode);
    const PricingSolution b = solve_equilibrium(m1, mode);
    EXPECT_LE(max_abs_diff(a.price, b.price), 1e-12);
    EXPECT_LE(max_abs_diff(a.alpha, b.alpha), 1e-12);
    EXPECT_LE((b.certEquiv.array() - a.certEquiv.array() - 3.5).abs().maxCoeff(), 1e-12);
  }
}

TEST(Pricing, PayoffLinearInCash) {
  ScenarioConfig a = scenario("fig6_gamma_sweep");
  ScenarioConfig b = a;
  a.payoff = CallPayoff{6.0};
  b.payoff = CallPayoff{7.0};  // every S_1 exceeds 7, so the payoffs differ by exactly 1
  const double pa = solve_equilibrium(Model(a), SolutionMode::consistent).price[0];
  const double pb = solve_equilibrium(Model(b), SolutionMode::consistent).price[0];
  EXPECT_NEAR(pa - pb, 1.0, 1e-13);
}

TEST(Pricing, ParseMode) {
  EXPECT_EQ(parse_mode("consistent"), SolutionMode::consistent);
  EXPECT_EQ(parse_mode("inconsistent"), SolutionMode::inconsistent);
  EXPECT_THROW(parse_mode("both"), ConfigError);
}

TEST(Indifference, DiffersFromEquilibriumPrice) {
  const Model m(scenario("fig3_4_5_eq_vs_indiff"));
  const double eq = solve_equilibrium(m, SolutionMode::consistent).price[0];
  const double p = indifference_price(m, 1.0, 0);
  EXPECT_GT(std::abs(eq - p), 1e-6);
}

TEST(Indifference, ClaimValueIsIndifferent) {
  const Model m(scenario("fig3_4_5_eq_vs_indiff"));
  const double p = indifference_price(m, 1.0, 0);
  EXPECT_NEAR(claim_value_function(m, 1.0, -p, 0), claim_value_function(m, 0.0, 0.0, 0), 1e-9);
}

TEST(Indifference, ConstantClaimPricesAtValue) {
  ScenarioConfig c = scenario("fig8_two_period");
  c.payoff = ConstantPayoff{2.0};
  EXPECT_NEAR(indifference_price(Model(c), 1.0, 0), 2.0, 1e-9);
}

TEST(Figures, SinglePeriodUnspannedIncomeLeavesPriceUnchanged) {
  ScenarioConfig full = scenario("fig7_unspanned");
  ScenarioConfig spanned = full;
  spanned.income.terms.resize(1);
  const double a = solve_equilibrium(Model(full), SolutionMode::consistent).price[0];
  const double b = solve_equilibrium(Model(spanned), SolutionMode::consistent).price[0];
  EXPECT_NEAR(a, b, 1e-13);
}

TEST(Figures, TwoPeriodUnspannedIncomeLowersPrice) {
  ScenarioConfig full = scenario("fig8_two_period");
  ScenarioConfig spanned = full;
  spanned.income.terms.resize(1);
  const double withUnspanned = solve_equilibrium(Model(full), SolutionMode::inconsistent).price[0];
  const double spannedOnly = solve_equilibrium(Model(spanned), SolutionMode::inconsistent).price[0];
  EXPECT_LT(withUnspanned, spannedOnly);
}
