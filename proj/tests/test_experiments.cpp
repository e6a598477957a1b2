#include <gtest/gtest.h>

#include "eqlat/errors.hpp"
#include "eqlat/experiments.hpp"

using namespace eqlat;

namespace {

FigureTable only(const std::string& id) {
  auto t = run_figure(id);
  EXPECT_EQ(t.size(), 1u);
  return t.front();
}

}  // namespace

TEST(Experiments, ScenarioParameters) {
  const ScenarioConfig f6 = scenario("fig6_gamma_sweep");
  EXPECT_EQ(f6.grid.steps(), 1);
  EXPECT_DOUBLE_EQ(f6.grid.h(), 0.3);
  EXPECT_EQ(f6.dim, 3);
  EXPECT_TRUE(f6.coefficients.mprOverride.has_value());
  EXPECT_EQ(f6.income.terms.size(), 1u);

  const ScenarioConfig f8 = scenario("fig8_two_period");
  EXPECT_EQ(f8.grid.steps(), 2);
  ASSERT_EQ(f8.income.terms.size(), 5u);
  const auto& ind = std::get<IndicatorIncome>(f8.income.terms[1]);
  EXPECT_DOUBLE_EQ(ind.coef, 5.0);
  EXPECT_DOUBLE_EQ(ind.rate, 0.1);
  EXPECT_EQ(ind.shocks.front().step, 1);

  const ScenarioConfig f9 = scenario("fig9_regime");
  EXPECT_EQ(f9.chain.size(), 2);
  EXPECT_DOUBLE_EQ(f9.chain.gamma(1), 0.6);
  const auto& r = std::get<IndicatorIncome>(f9.income.terms[1]);
  EXPECT_DOUBLE_EQ(r.coef, 10.0);
  EXPECT_DOUBLE_EQ(r.rate, 0.03);
  EXPECT_EQ(r.regimes.front().time, 0);
}

TEST(Experiments, AliasesAndUnknownIds) {
  EXPECT_EQ(canonical_figure_id("fig8"), "fig8_two_period");
  EXPECT_EQ(canonical_figure_id("fig3_4_5"), "fig3_4_5_eq_vs_indiff");
  EXPECT_THROW(canonical_figure_id("fig10"), ConfigError);
}

TEST(Experiments, Fig6MonotoneInGamma) {
  const FigureTable t = only("fig6");
  ASSERT_EQ(t.rows.size(), 9u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GE(t.rows[i][1], t.rows[i - 1][1]);
}

TEST(Experiments, Fig9WithinEnvelope) {
  const FigureTable t = only("fig9");
  for (const auto& row : t.rows) {
    for (std::size_t j = 1; j < row.size(); ++j) {
      EXPECT_GE(row[j], -10.0);
      EXPECT_LE(row[j], 25.0);
    }
  }
}

TEST(Experiments, Fig9ShiftIsRecorded) {
  FigureOptions opt;
  opt.gammaShift = 0.1;
  const auto t = run_figure("fig9", opt);
  bool found = false;
  for (const auto& [k, v] : t.front().provenance) found = found || (k == "gamma_shift");
  EXPECT_TRUE(found);
  EXPECT_DOUBLE_EQ(scenario("fig9", opt).chain.gamma(1), 0.5 * 1.1);
}

TEST(Experiments, PathFiguresAreSeeded) {
  FigureOptions a;
  FigureOptions b;
  b.seed = 7;
  const auto pa = run_figure("fig1", a);
  const auto pb = run_figure("fig1", b);
  EXPECT_EQ(pa.size(), 2u);
  EXPECT_EQ(pa[0].rows, run_figure("fig1", a)[0].rows);
  EXPECT_NE(pa[0].rows, pb[0].rows);
  EXPECT_EQ(pa[0].rows.size(), 31u);
  EXPECT_DOUBLE_EQ(pa[1].rows[0][1], std::sqrt(std::atan(10.0) + std::numbers::pi / 2.0));
}

TEST(Experiments, EquilibriumVersusIndifferenceTables) {
  const auto t = run_figure("fig3_4_5_eq_vs_indiff");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].id, "fig3");
  EXPECT_EQ(t[2].rows.size(), 17u);
  for (const auto& table : t) {
    for (const auto& row : table.rows) EXPECT_GT(std::abs(row[1] - row[2]), 1e-6);
  }
}

TEST(Experiments, SweepGridHitsEndpoints) {
  const auto g = sweep_grid(-0.8, 0.8, 17);
  EXPECT_EQ(g.front(), -0.8);
  EXPECT_EQ(g.back(), 0.8);
}
