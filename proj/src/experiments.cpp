#include "eqlat/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "eqlat/errors.hpp"
#include "eqlat/pricing.hpp"

namespace eqlat {

namespace {

constexpr double kH = 0.3;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

ScenarioConfig base(const std::string& name, int steps) {
  ScenarioConfig c;
  c.name = name;
  c.grid = TimeGrid(steps, kH);
  c.dim = 3;
  c.initial = {10.0, 10.0};
  c.coefficients = CoefficientSpec{};
  c.coefficients.mprOverride = ArctanMpr{};
  c.chain = RegimeChain::single(0.7);
  c.payoff = CallPayoff{10.0};
  return c;
}

ExpAffineIncome spanned_income(int time = -1) { return {7.0, -0.5, time}; }

/// coef * e^{rate h} 1{db^1_step = a, db^3_step = b} over the four sign pairs.
void add_unspanned(IncomeSpec& income, int step, const double (&coef)[4], double rate) {
  const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int i = 0; i < 4; ++i) {
    IndicatorIncome term;
    term.coef = coef[i];
    term.rate = rate;
    term.shocks = {{step, 0, signs[i][0]}, {step, 2, signs[i][1]}};
    income.terms.emplace_back(term);
  }
}

void set_gamma(ScenarioConfig& c, double gamma) { c.chain = RegimeChain::single(gamma); }

RegimeChain two_state(double gamma, double shift) {
  RegimeChain chain;
  chain.labels = {"bull", "bear"};
  chain.transition.resize(2, 2);
  chain.transition << 0.8, 0.2, 0.3, 0.7;
  chain.initial.resize(2);
  chain.initial << 0.5, 0.5;
  chain.gamma.resize(2);
  chain.gamma << gamma, gamma * (1.0 + shift);
  return chain;
}

double root_price(const ScenarioConfig& c, SolutionMode mode, NodeId root = 0) {
  const Model model(c);
  return solve_equilibrium(model, mode).price[root];
}

void common_provenance(FigureTable& t, const ScenarioConfig& c) {
  t.provenance.insert(t.provenance.end(),
                      {{"h", num(c.grid.h())},
                       {"steps", std::to_string(c.grid.steps())},
                       {"dim", std::to_string(c.dim)},
                       {"c0", num(c.initial.c)},
                       {"s0", num(c.initial.s)},
                       {"rho", num(c.coefficients.rho)},
                       {"mpr", "r^2 = arctan(S) + pi/2; drift muC = r * sigmaC"},
                       {"dividend", "0"}});
}

FigureTable eq_vs_indiff(const std::string& id, const std::string& var,
                         const std::vector<double>& grid, const FigureOptions& opt,
                         void (*apply)(ScenarioConfig&, double)) {
  FigureTable t;
  t.id = id;
  t.columns = {var, "equilibrium", "indifference"};
  ScenarioConfig c = scenario("fig3_4_5_eq_vs_indiff", opt);
  for (double x : grid) {
    ScenarioConfig cx = c;
    apply(cx, x);
    const Model model(cx);
    const double eq = solve_equilibrium(model, SolutionMode::consistent).price[0];
    t.rows.push_back({x, eq, indifference_price(model, 1.0, 0)});
  }
  common_provenance(t, c);
  t.provenance.push_back({"income", "0"});
  t.provenance.push_back({"sweep", var + " in [" + num(grid.front()) + ", " + num(grid.back()) +
                                       "] (reconstructed axis)"});
  return t;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig1_2_paths",   "fig3_4_5_eq_vs_indiff",
                                               "fig6_gamma_sweep", "fig7_unspanned",
                                               "fig8_two_period", "fig9_regime"};
  return ids;
}

std::string canonical_figure_id(const std::string& id) {
  for (const auto& full : figure_ids()) {
    if (id == full) return full;
  }
  static const std::pair<const char*, const char*> aliases[] = {
      {"fig1", "fig1_2_paths"},   {"fig2", "fig1_2_paths"},    {"fig1_2", "fig1_2_paths"},
      {"fig3", "fig3_4_5_eq_vs_indiff"}, {"fig4", "fig3_4_5_eq_vs_indiff"},
      {"fig5", "fig3_4_5_eq_vs_indiff"}, {"fig3_4_5", "fig3_4_5_eq_vs_indiff"},
      {"fig6", "fig6_gamma_sweep"}, {"fig7", "fig7_unspanned"}, {"fig8", "fig8_two_period"},
      {"fig9", "fig9_regime"}};
  for (auto [alias, full] : aliases) {
    if (id == alias) return full;
  }
  throw ConfigError("unknown figure id '" + id + "'", "E_FIGURE");
}

std::vector<double> sweep_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1));
  }
  return g;
}

ScenarioConfig scenario(const std::string& figureId, const FigureOptions& opt) {
  const std::string id = canonical_figure_id(figureId);
  ScenarioConfig c;
  if (id == "fig1_2_paths" || id == "fig3_4_5_eq_vs_indiff") {
    c = base(id, 1);
  } else if (id == "fig6_gamma_sweep") {
    c = base(id, 1);
    c.income.terms.emplace_back(spanned_income());
  } else if (id == "fig7_unspanned") {
    c = base(id, 1);
    c.income.terms.emplace_back(spanned_income());
    add_unspanned(c.income, 0, {5.0, 4.0, 2.0, 1.0}, 0.1);
  } else if (id == "fig8_two_period") {
    c = base(id, 2);
    c.income.terms.emplace_back(spanned_income());
    add_unspanned(c.income, 1, {5.0, 4.0, 2.0, 1.0}, 0.1);
  } else {
    c = base(id, 2);
    c.chain = two_state(0.5, opt.gammaShift);
    c.income.terms.emplace_back(spanned_income(1));
    const double coef[4] = {10.0, 8.0, 5.0, 4.0};
    const int regime[4] = {0, 0, 1, 1};
    const int sign[4] = {1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) {
      IndicatorIncome term;
      term.coef = coef[i];
      term.rate = 0.03;
      term.shocks = {{1, 2, sign[i]}};
      term.regimes = {{0, regime[i]}};
      c.income.terms.emplace_back(term);
    }
  }
  c.pathCap = opt.pathCap;
  return c;
}

std::vector<FigureTable> run_figure(const std::string& figureId, const FigureOptions& opt) {
  const std::string id = canonical_figure_id(figureId);
  const std::vector<double> gammas = sweep_grid(0.1, 0.9, 9);
  std::vector<FigureTable> out;

  if (id == "fig1_2_paths") {
    const ScenarioConfig c = scenario(id, opt);
    if (opt.pathSteps < 1) throw ConfigError("path length must be positive");
    std::mt19937_64 rng(opt.seed);
    FigureTable f1{"fig1", {"t", "C", "S"}, {}, {}};
    FigureTable f2{"fig2", {"t", "mpr"}, {}, {}};
    ForwardState state = c.initial;
    for (int n = 0;; ++n) {
      const LocalCoefficients k = local_coefficients(c.coefficients, n, state, kH);
      f1.rows.push_back({n * kH, state.c, state.s});
      f2.rows.push_back({n * kH, k.mpr});
      if (n == opt.pathSteps) break;
      // Low 3 bits of the raw engine output are the up-mask.
      const std::uint64_t bits = rng();
      state = evolve_forward(state, ShockVector(static_cast<std::uint32_t>(bits & 0x7u), c.dim),
                             k, kH);
    }
    for (FigureTable* t : {&f1, &f2}) {
      common_provenance(*t, c);
      t->provenance.push_back({"seed", std::to_string(opt.seed)});
      t->provenance.push_back({"path_steps", std::to_string(opt.pathSteps)});
      t->provenance.push_back({"rng", "mt19937_64, low 3 bits per step"});
      out.push_back(std::move(*t));
    }
    return out;
  }

  if (id == "fig3_4_5_eq_vs_indiff") {
    out.push_back(eq_vs_indiff("fig3", "strike", sweep_grid(6.0, 14.0, 9), opt,
                               [](ScenarioConfig& c, double k) { c.payoff = CallPayoff{k}; }));
    out.push_back(eq_vs_indiff("fig4", "gamma", gammas, opt,
                               [](ScenarioConfig& c, double g) { set_gamma(c, g); }));
    out.push_back(eq_vs_indiff("fig5", "rho", sweep_grid(-0.8, 0.8, 17), opt,
                               [](ScenarioConfig& c, double r) { c.coefficients.rho = r; }));
    return out;
  }

  if (id == "fig6_gamma_sweep") {
    FigureTable t{"fig6", {"gamma", "equilibrium"}, {}, {}};
    ScenarioConfig c = scenario(id, opt);
    for (double g : gammas) {
      set_gamma(c, g);
      t.rows.push_back({g, root_price(c, SolutionMode::consistent)});
    }
    common_provenance(t, c);
    t.provenance.push_back({"income", "7 exp(-0.5 (S_1 - s) h)"});
    out.push_back(std::move(t));
    return out;
  }

  if (id == "fig7_unspanned" || id == "fig8_two_period") {
    const bool two = id == "fig8_two_period";
    FigureTable t{two ? "fig8" : "fig7", {"gamma", "spanned", "unspanned"}, {}, {}};
    ScenarioConfig full = scenario(id, opt);
    ScenarioConfig spanned = full;
    spanned.income.terms.resize(1);
    const SolutionMode mode = two ? SolutionMode::inconsistent : SolutionMode::consistent;
    for (double g : gammas) {
      set_gamma(full, g);
      set_gamma(spanned, g);
      t.rows.push_back({g, root_price(spanned, mode), root_price(full, mode)});
    }
    common_provenance(t, full);
    t.provenance.push_back({"mode", std::string(to_string(mode))});
    t.provenance.push_back(
        {"income", two ? "7 exp(-0.5 (S_2 - s) h) + (5,4,2,1) e^{0.1h} 1{db^1_1, db^3_1}"
                       : "7 exp(-0.5 (S_1 - s) h) + (5,4,2,1) e^{0.1h} 1{db^1_0, db^3_0}"});
    t.provenance.push_back({"sweep", "gamma in [0.1, 0.9] (reconstructed axis)"});
    out.push_back(std::move(t));
    return out;
  }

  FigureTable t{"fig9", {"gamma_bull", "pct_change_from_bull", "pct_change_from_bear"}, {}, {}};
  ScenarioConfig c = scenario(id, opt);
  for (double g : gammas) {
    c.chain = two_state(g, opt.gammaShift);
    const Model model(c);
    const PricingSolution tc = solve_equilibrium(model, SolutionMode::consistent);
    const PricingSolution ti = solve_equilibrium(model, SolutionMode::inconsistent);
    std::vector<double> row{g};
    for (auto [root, end] = model.lattice.roots(); root < end; ++root) {
      row.push_back(100.0 * (tc.price[root] - ti.price[root]) / ti.price[root]);
    }
    t.rows.push_back(std::move(row));
  }
  common_provenance(t, c);
  t.provenance.push_back({"gamma_shift", num(opt.gammaShift)});
  t.provenance.push_back({"transition", "[[0.8, 0.2], [0.3, 0.7]] (default substitution)"});
  t.provenance.push_back({"initial_regime_law", "[0.5, 0.5]; one root per regime"});
  t.provenance.push_back({"gamma", "bull = sweep value, bear = bull * (1 + gamma_shift)"});
  t.provenance.push_back(
      {"income", "7 exp(-0.5 (S_1 - s) h) + (10,8,5,4) e^{0.03h} 1{J_0, db^3_1}"});
  out.push_back(std::move(t));
  return out;
}

}  // namespace eqlat
