#include <gtest/gtest.h>

#include <cmath>

#include "eqlat/errors.hpp"
#include "eqlat/verify.hpp"
#include "support.hpp"

using namespace eqlat;

TEST(Oracle, SinglePeriodCorpusMatchesClosedForm) {
  for (const ScenarioConfig& c : test::single_period_corpus()) {
    const Model m(c);
    const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
    const OracleResult r = brute_force_single_period(m, 0);
    EXPECT_NEAR(r.price, s.price[0], 1e-8) << c.name;
    EXPECT_NEAR(r.alpha, s.alpha[0], 1e-8) << c.name;
    EXPECT_LE(std::abs(r.clearingResidual), 1e-10) << c.name;
  }
}

TEST(Oracle, FullRederivationTwoPeriods) {
  for (const char* id : {"fig8_two_period", "fig9_regime"}) {
    const Model m(scenario(id));
    for (SolutionMode mode : {SolutionMode::consistent, SolutionMode::inconsistent}) {
      const PricingSolution s = solve_equilibrium(m, mode);
      const OracleSolution o = brute_force_equilibrium(m, mode);
      for (NodeId n = 0; n < m.lattice.size(); ++n) {
        if (m.lattice.terminal(n)) continue;
        EXPECT_NEAR(o.price[n], s.price[n], 1e-8) << id << " node " << n;
        EXPECT_NEAR(o.alpha[n], s.alpha[n], 1e-8) << id << " node " << n;
      }
    }
  }
}

TEST(Oracle, RefusesLongHorizons) {
  ScenarioConfig c = scenario("fig8_two_period");
  c.grid = TimeGrid(3, 0.3);
  EXPECT_THROW(brute_force_equilibrium(Model(c), SolutionMode::consistent), PreconditionError);
}

TEST(Oracle, RiskFreeClaimUsesDegenerateBracket) {
  ScenarioConfig c = scenario("fig6_gamma_sweep");
  c.payoff = ConstantPayoff{4.0};
  const OracleResult r = brute_force_single_period(Model(c), 0);
  EXPECT_DOUBLE_EQ(r.price, 4.0);
}

TEST(Oracle, ObjectiveIsUnimodalInAlpha) {
  const Model m(scenario("fig7_unspanned"));
  const PricingSolution s = solve_equilibrium(m, SolutionMode::consistent);
  std::vector<double> price;
  std::vector<double> cont;
  for (auto [c, end] = m.lattice.children(0); c < end; ++c) {
    price.push_back(s.price[c]);
    cont.push_back(s.cert_equiv(c, 0.7));
  }
  const ObjectiveG g(m, 0, 0.7, price, cont, 0.0);
  EXPECT_TRUE(g_unimodal(g, s.alpha[0], 10.0, s.price[0]));
  EXPECT_NEAR(g.d_alpha(s.alpha[0], 1.0, s.price[0]) / g.value(s.alpha[0], 1.0, s.price[0]), 0.0, 1e-10);
}

TEST(Identities, MartingaleAndKernel) {
  for (const ScenarioConfig& c : test::multi_period_corpus()) {
    const Model m(c);
    for (SolutionMode mode : {SolutionMode::consistent, SolutionMode::inconsistent}) {
      const PricingSolution s = solve_equilibrium(m, mode);
      EXPECT_LE(check_martingale(m, s).max(), 1e-10) << c.name;
      const KernelReport k = check_kernel(m, s);
      EXPECT_LE(k.normResidual, 1e-12) << c.name;
      EXPECT_GT(k.minKernel, 0.0) << c.name;
    }
  }
}

TEST(Identities, MartingaleRequiresZeroDividend) {
  ScenarioConfig c = scenario("fig6_gamma_sweep");
  c.dividend.phi = ConstantFormula{0.1};
  const Model m(c);
  EXPECT_THROW(check_martingale(m, solve_equilibrium(m, SolutionMode::consistent)),
               PreconditionError);
}

TEST(Identities, MarginalUtility) {
  for (const char* id : {"fig8_two_period", "fig9_regime"}) {
    const Model m(scenario(id));
    const PricingSolution s = solve_equilibrium(m, SolutionMode::inconsistent);
    EXPECT_LE(check_marginal_utility(m, s), 1e-12) << id;
    EXPECT_THROW(check_marginal_utility(m, solve_equilibrium(m, SolutionMode::consistent)),
                 PreconditionError);
  }
}

TEST(Identities, WealthInvariance) {
  for (const char* id : {"fig7_unspanned", "fig8_two_period", "fig9_regime"}) {
    EXPECT_LE(check_wealth_invariance(Model(scenario(id))), 1e-10) << id;
  }
}

TEST(Dominance, ConstantGammaGivesEquality) {
  const DominanceReport d = check_dominance(test::dominance_scenario(0.5, 0.5));
  EXPECT_EQ(d.violations, 0);
  EXPECT_EQ(d.strictNodes, 0);
  EXPECT_EQ(d.t1StrategyMismatches, 0);
}

TEST(Dominance, StrictWhereRegimeChanged) {
  const DominanceReport d = check_dominance(test::dominance_scenario(0.5, 0.6));
  EXPECT_EQ(d.violations, 0);
  EXPECT_TRUE(d.rootStrategiesEqual);
  EXPECT_TRUE(d.wealthEqual);
  EXPECT_GT(d.strictNodes, 0);
  EXPECT_EQ(d.t1MismatchesUnchangedRegime, 0);
  EXPECT_EQ(d.strictNodes, d.t1StrategyMismatches);
}

TEST(Dominance, ZeroMprGivesZeroStrategies) {
  ScenarioConfig c = test::dominance_scenario();
  c.coefficients.muC = ConstantFormula{0.0};
  const DominanceReport d = check_dominance(c);
  EXPECT_EQ(d.violations, 0);
  EXPECT_EQ(d.strictNodes, 0);
}

TEST(Dominance, RejectsGeneralCase) {
  EXPECT_THROW(check_dominance(scenario("fig9_regime")), PreconditionError);
  ScenarioConfig c = test::dominance_scenario();
  c.grid = TimeGrid(3, 0.3);
  EXPECT_THROW(check_dominance(c), PreconditionError);
}

TEST(Report, VerifyScenarioPasses) {
  const VerificationReport r = verify_scenario(scenario("fig9_regime"));
  EXPECT_TRUE(r.passed()) << r.key_values();
  EXPECT_TRUE(r.martingaleChecked);
  EXPECT_FALSE(r.collapseChecked);
  EXPECT_NE(r.key_values().find("oracle_gap_max = "), std::string::npos);
  const std::string row = r.csv_row();
  const std::string header = VerificationReport::csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}
