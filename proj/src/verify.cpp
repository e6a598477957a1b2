#include "eqlat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "eqlat/errors.hpp"

namespace eqlat {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kClearingTol = 1e-10;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

/// Descend to the first and last terminal descendant; BFS order keeps a
/// subtree's terminal layer contiguous.
std::pair<NodeId, NodeId> terminal_range(const Lattice& lat, NodeId id) {
  NodeId lo = id;
  NodeId hi = id;
  while (!lat.terminal(lo)) {
    lo = lat.children(lo).first;
    hi = lat.children(hi).second - 1;
  }
  return {lo, hi + 1};
}

double gain_of(const Model& model, NodeId parent, NodeId child) {
  const LocalCoefficients& k = model.market.coefficients(parent);
  const double h = model.lattice.grid().h();
  return k.muC * h + k.sigmaC * std::sqrt(h) * model.lattice.shock(child)[0];
}

}  // namespace

// ---------------------------------------------------------------------------
// ObjectiveG
// ---------------------------------------------------------------------------

ObjectiveG::ObjectiveG(const Model& model, NodeId node, double gamma,
                       std::vector<double> childPrice, std::vector<double> childContinuation,
                       double wealth)
    : node_(node),
      gamma_(gamma),
      wealth_(wealth),
      phiH_(dividend(model.config.dividend, model.market, node) * model.lattice.grid().h()),
      price_(std::move(childPrice)),
      continuation_(std::move(childContinuation)) {
  const ChildDistribution dist = model.lattice.enumerate_children(node);
  if (price_.size() != dist.entries.size() || continuation_.size() != dist.entries.size()) {
    throw PreconditionError("objective needs one price and continuation value per child");
  }
  for (const auto& e : dist.entries) {
    weight_.push_back(e.weight);
    gain_.push_back(gain_of(model, node, e.child));
  }
}

template <class F>
double ObjectiveG::sum(F&& f) const {
  KahanSum acc;
  for (std::size_t i = 0; i < weight_.size(); ++i) acc.add(weight_[i] * f(i));
  return acc.value();
}

double ObjectiveG::value(double alpha, double beta, double price) const {
  return sum([&](std::size_t i) {
    const double dx = alpha * gain_[i] + beta * (price_[i] - price + phiH_);
    return std::exp(-gamma_ * (wealth_ + dx + continuation_[i]));
  });
}

double ObjectiveG::d_alpha(double alpha, double beta, double price) const {
  return sum([&](std::size_t i) {
    const double dx = alpha * gain_[i] + beta * (price_[i] - price + phiH_);
    return -gamma_ * gain_[i] * std::exp(-gamma_ * (wealth_ + dx + continuation_[i]));
  });
}

double ObjectiveG::d_beta(double alpha, double beta, double price) const {
  return sum([&](std::size_t i) {
    const double jump = price_[i] - price + phiH_;
    const double dx = alpha * gain_[i] + beta * jump;
    return -gamma_ * jump * std::exp(-gamma_ * (wealth_ + dx + continuation_[i]));
  });
}

double ObjectiveG::clearing_residual(double alpha, double price) const {
  return d_beta(alpha, 1.0, price) / (-gamma_ * value(alpha, 1.0, price));
}

std::pair<double, double> ObjectiveG::price_bracket() const {
  const auto [lo, hi] = std::minmax_element(price_.begin(), price_.end());
  return {*lo + phiH_, *hi + phiH_};
}

double minimise_alpha(const ObjectiveG& g, double price) {
  double lo = -1.0;
  double hi = 1.0;
  int expansions = 0;
  while (!(g.d_alpha(lo, 1.0, price) < 0.0) || !(g.d_alpha(hi, 1.0, price) > 0.0)) {
    if (++expansions > 100) {
      throw ConvergenceError("could not bracket the alpha first-order condition");
    }
    if (!(g.d_alpha(lo, 1.0, price) < 0.0)) lo *= 2.0;
    if (!(g.d_alpha(hi, 1.0, price) > 0.0)) hi *= 2.0;
  }
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double d = g.d_alpha(mid, 1.0, price);
    if (d == 0.0) return mid;
    (d < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OracleResult brute_force_node(const ObjectiveG& g) {
  auto [lo, hi] = g.price_bracket();
  OracleResult out;
  if (lo == hi) {
    // Riskless claim: the clearing condition holds at the only admissible price.
    out.price = lo;
    out.alpha = minimise_alpha(g, lo);
    out.clearingResidual = g.clearing_residual(out.alpha, lo);
  } else {
    double rLo = g.clearing_residual(minimise_alpha(g, lo), lo);
    double rHi = g.clearing_residual(minimise_alpha(g, hi), hi);
    if (rLo < 0.0 || rHi > 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "price bracket [" << lo << ", " << hi << "] does not change sign (residuals "
          << rLo << ", " << rHi << ")";
      throw ConvergenceError(msg.str());
    }
    int it = 0;
    for (; it < kMaxIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double r = g.clearing_residual(minimise_alpha(g, mid), mid);
      if (r == 0.0) {
        lo = hi = mid;
        break;
      }
      (r > 0.0 ? lo : hi) = mid;
    }
    out.outerIterations = it;
    out.price = 0.5 * (lo + hi);
    out.alpha = minimise_alpha(g, out.price);
    out.clearingResidual = g.clearing_residual(out.alpha, out.price);
  }
  if (!(std::abs(out.clearingResidual) <= kClearingTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "clearing condition not met after " << out.outerIterations
        << " iterations; last residual " << out.clearingResidual;
    throw ConvergenceError(msg.str());
  }
  return out;
}

OracleResult brute_force_single_period(const Model& model, NodeId id, double wealth) {
  const Lattice& lat = model.lattice;
  if (lat.time(id) != lat.grid().steps() - 1) {
    throw PreconditionError("single-period oracle needs a node at t_{N-1}");
  }
  std::vector<double> price;
  std::vector<double> cont;
  for (auto [c, end] = lat.children(id); c < end; ++c) {
    price.push_back(payoff(model.config.payoff, lat, model.market, c));
    cont.push_back(income(lat, model.market, c, model.config.income));
  }
  const ObjectiveG g(model, id, risk_aversion(lat, id), std::move(price), std::move(cont), wealth);
  return brute_force_node(g);
}

OracleResult brute_force_layer(const Model& model, const PricingSolution& solution, NodeId id,
                               double wealth) {
  const Lattice& lat = model.lattice;
  const double gamma = solution.modeGamma[id];
  std::vector<double> price;
  std::vector<double> cont;
  for (auto [c, end] = lat.children(id); c < end; ++c) {
    price.push_back(solution.price[c]);
    cont.push_back(solution.cert_equiv(c, gamma));
  }
  const ObjectiveG g(model, id, gamma, std::move(price), std::move(cont), wealth);
  return brute_force_node(g);
}

OracleSolution brute_force_equilibrium(const Model& model, SolutionMode mode) {
  const Lattice& lat = model.lattice;
  const int steps = lat.grid().steps();
  if (steps > 2) throw PreconditionError("full oracle re-derivation is limited to N <= 2");
  const double h = lat.grid().h();

  OracleSolution sol;
  sol.alpha.assign(lat.size(), std::numeric_limits<double>::quiet_NaN());
  sol.price.assign(lat.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> terminalIncome(lat.size(), 0.0);
  auto [tFirst, tLast] = lat.layer(steps);
  for (NodeId t = tFirst; t < tLast; ++t) {
    sol.price[t] = payoff(model.config.payoff, lat, model.market, t);
    terminalIncome[t] = income(lat, model.market, t, model.config.income);
  }

  // Continuation value of `from` under gamma by enumerating its terminal paths
  // with the oracle's own strategies and prices.
  const auto continuation = [&](NodeId from, double gamma) {
    if (lat.terminal(from)) return terminalIncome[from];
    auto [first, last] = terminal_range(lat, from);
    std::vector<double> prob;
    std::vector<double> total;
    for (NodeId t = first; t < last; ++t) {
      double p = 1.0;
      double w = terminalIncome[t];
      for (NodeId cur = t; cur != from; cur = lat.parent(cur)) {
        const NodeId par = lat.parent(cur);
        p *= lat.weight(cur);
        w += sol.alpha[par] * gain_of(model, par, cur) + (sol.price[cur] - sol.price[par]) +
             dividend(model.config.dividend, model.market, par) * h;
      }
      prob.push_back(p);
      total.push_back(w);
    }
    const double wmin = *std::min_element(total.begin(), total.end());
    KahanSum acc;
    for (std::size_t i = 0; i < prob.size(); ++i) {
      acc.add(prob[i] * std::exp(-gamma * (total[i] - wmin)));
    }
    return wmin - std::log(acc.value()) / gamma;
  };

  for (int n = steps - 1; n >= 0; --n) {
    auto [first, last] = lat.layer(n);
    for (NodeId id = first; id < last; ++id) {
      const double gamma = mode == SolutionMode::consistent
                               ? risk_aversion(lat, id)
                               : risk_aversion(lat, lat.root_of(id));
      std::vector<double> price;
      std::vector<double> cont;
      for (auto [c, end] = lat.children(id); c < end; ++c) {
        price.push_back(sol.price[c]);
        cont.push_back(continuation(c, gamma));
      }
      const OracleResult r =
          brute_force_node(ObjectiveG(model, id, gamma, std::move(price), std::move(cont), 0.0));
      sol.alpha[id] = r.alpha;
      sol.price[id] = r.price;
    }
  }
  return sol;
}

bool g_unimodal(const ObjectiveG& g, double centre, double halfWidth, double price, int points) {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) {
    const double a = centre - halfWidth + 2.0 * halfWidth * i / (points - 1);
    v.push_back(g.value(a, 1.0, price));
  }
  int changes = 0;
  int prevSign = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (prevSign != 0 && s != prevSign) ++changes;
    prevSign = s;
  }
  return changes <= 1;
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

double MartingaleReport::max() const { return std::max({driftResidual, cResidual, dResidual}); }

MartingaleReport check_martingale(const Model& model, const PricingSolution& solution) {
  if (!model.config.dividend.zero()) {
    throw PreconditionError(
        "martingale check requires a zero dividend (the traded assets are martingales under "
        "the pricing measure only when phi = 0)");
  }
  const Lattice& lat = model.lattice;
  const double sh = std::sqrt(lat.grid().h());
  MartingaleReport rep;
  for (NodeId id = 0; id < lat.size(); ++id) {
    if (lat.terminal(id)) continue;
    const double r = model.market.coefficients(id).mpr;
    const double c = model.market.state(id).c;
    const double drift = lat.expect(
        id, [&](NodeId k) { return solution.kernel[k] * (r * sh + lat.shock(k)[0]); });
    const double cRatio = lat.expect(
        id, [&](NodeId k) { return solution.kernel[k] * (model.market.state(k).c / c); });
    const double dNext = lat.expect(id, [&](NodeId k) { return solution.kernel[k] * solution.price[k]; });
    rep.driftResidual = std::max(rep.driftResidual, std::abs(drift));
    rep.cResidual = std::max(rep.cResidual, std::abs(cRatio - 1.0));
    rep.dResidual = std::max(rep.dResidual, std::abs(dNext - solution.price[id]));
  }
  return rep;
}

KernelReport check_kernel(const Model& model, const PricingSolution& solution) {
  const Lattice& lat = model.lattice;
  KernelReport rep;
  rep.minKernel = std::numeric_limits<double>::infinity();
  for (NodeId id = 0; id < lat.size(); ++id) {
    if (lat.terminal(id)) continue;
    const double mass = lat.expect(id, [&](NodeId c) { return solution.kernel[c]; });
    rep.normResidual = std::max(rep.normResidual, std::abs(mass - 1.0));
    for (auto [c, end] = lat.children(id); c < end; ++c) {
      rep.minKernel = std::min(rep.minKernel, solution.kernel[c]);
    }
  }
  return rep;
}

double check_marginal_utility(const Model& model, const PricingSolution& sol, double wealth) {
  if (sol.mode != SolutionMode::inconsistent) {
    throw PreconditionError("marginal-utility identity applies to the time-inconsistent solution");
  }
  const Lattice& lat = model.lattice;
  const double h = lat.grid().h();

  // Optimal time-inconsistent terminal wealth along every path.
  std::vector<double> wealthAt(lat.size(), wealth);
  for (NodeId id = 0; id < lat.size(); ++id) {
    const NodeId par = lat.parent(id);
    if (par == kNoNode) continue;
    wealthAt[id] = wealthAt[par] + sol.alpha[par] * gain_of(model, par, id) +
                   (sol.price[id] - sol.price[par]) +
                   dividend(model.config.dividend, model.market, par) * h;
  }
  auto [tFirst, tLast] = lat.layer(lat.grid().steps());
  std::vector<double> terminalWealth(lat.size(), 0.0);
  double shift = std::numeric_limits<double>::infinity();
  for (NodeId t = tFirst; t < tLast; ++t) {
    terminalWealth[t] = wealthAt[t] + income(lat, model.market, t, model.config.income);
    shift = std::min(shift, terminalWealth[t]);
  }

  // E[U'(W) | F_node] (up to the constant gamma e^{-gamma shift}) per node,
  // accumulated over each node's terminal paths.
  std::vector<double> marginal(lat.size(), 0.0);
  for (NodeId id = 0; id < lat.size(); ++id) {
    const double gamma = sol.modeGamma[id];
    auto [first, last] = terminal_range(lat, id);
    KahanSum acc;
    for (NodeId t = first; t < last; ++t) {
      double p = 1.0;
      for (NodeId cur = t; cur != id; cur = lat.parent(cur)) p *= lat.weight(cur);
      acc.add(p * std::exp(-gamma * (terminalWealth[t] - shift)));
    }
    marginal[id] = acc.value();
  }

  double worst = 0.0;
  for (NodeId id = 0; id < lat.size(); ++id) {
    const NodeId par = lat.parent(id);
    if (par == kNoNode) continue;
    worst = std::max(worst, std::abs(sol.kernel[id] - marginal[id] / marginal[par]));
  }
  return worst;
}

DominanceReport check_dominance(const ScenarioConfig& config, double tolerance) {
  if (config.grid.steps() != 2) throw PreconditionError("dominance check needs N = 2");
  if (!config.income.identically_zero()) throw PreconditionError("dominance check needs I = 0");
  if (config.coefficients.mprOverride ||
      !std::holds_alternative<ConstantFormula>(config.coefficients.muC) ||
      !std::holds_alternative<ConstantFormula>(config.coefficients.sigmaC)) {
    throw PreconditionError("dominance check needs constant drift and volatility of C");
  }
  const Model model(config);
  const Lattice& lat = model.lattice;
  auto [tFirst, tLast] = lat.layer(2);
  const std::vector<double> zero(tLast - tFirst, 0.0);
  const PortfolioSolution star = solve_portfolio(model, SolutionMode::consistent, zero);
  const PortfolioSolution hat = solve_portfolio(model, SolutionMode::inconsistent, zero);

  DominanceReport rep;
  rep.rootStrategiesEqual = true;
  rep.wealthEqual = true;
  rep.minGap = std::numeric_limits<double>::infinity();
  for (auto [root, rend] = lat.roots(); root < rend; ++root) {
    if (star.alpha[root] != hat.alpha[root]) rep.rootStrategiesEqual = false;
    const double gamma0 = risk_aversion(lat, root);
    for (auto [n1, n1end] = lat.children(root); n1 < n1end; ++n1) {
      const double gain0 = gain_of(model, root, n1);
      const double wStar = star.alpha[root] * gain0;
      const double wHat = hat.alpha[root] * gain0;
      if (wStar != wHat) rep.wealthEqual = false;
      const double gamma1 = risk_aversion(lat, n1);
      const auto utility = [&](double w1, double a1) {
        return lat.expect(n1, [&](NodeId c) {
          return -std::exp(-gamma1 * (w1 + a1 * gain_of(model, n1, c)));
        });
      };
      const double gap = utility(wStar, star.alpha[n1]) - utility(wHat, hat.alpha[n1]);
      ++rep.nodes;
      rep.minGap = std::min(rep.minGap, gap);
      if (gap < -tolerance) ++rep.violations;
      if (gap > tolerance) ++rep.strictNodes;
      if (star.alpha[n1] != hat.alpha[n1]) {
        ++rep.t1StrategyMismatches;
        if (gamma1 == gamma0) ++rep.t1MismatchesUnchangedRegime;
      }
    }
  }
  return rep;
}

double check_wealth_invariance(const Model& model) {
  const Lattice& lat = model.lattice;
  double worst = 0.0;
  auto [first, last] = lat.layer(lat.grid().steps() - 1);
  for (NodeId id = first; id < last; ++id) {
    const OracleResult base = brute_force_single_period(model, id, 0.0);
    for (double x : {-10.0, 10.0}) {
      const OracleResult r = brute_force_single_period(model, id, x);
      worst = std::max({worst, std::abs(r.alpha - base.alpha), std::abs(r.price - base.price)});
    }
  }
  return worst;
}

double solution_difference(const PricingSolution& a, const PricingSolution& b) {
  double worst = 0.0;
  const auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::isnan(x[i]) && std::isnan(y[i])) continue;
      const double d = std::abs(x[i] - y[i]);
      worst = std::max(worst, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
    }
  };
  cmp(a.price, b.price);
  cmp(a.alpha, b.alpha);
  cmp(a.kernel, b.kernel);
  return worst;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

VerificationReport verify_scenario(const ScenarioConfig& config, const Tolerances& tol) {
  VerificationReport rep;
  rep.scenario = config.name;
  const Model model(config);
  const Lattice& lat = model.lattice;
  const int steps = lat.grid().steps();

  const PricingSolution consistent = solve_equilibrium(model, SolutionMode::consistent);
  const PricingSolution inconsistent = solve_equilibrium(model, SolutionMode::inconsistent);
  rep.kernelMin = std::numeric_limits<double>::infinity();

  for (const PricingSolution* sol : {&consistent, &inconsistent}) {
    const KernelReport k = check_kernel(model, *sol);
    rep.kernelNormResidualMax = std::max(rep.kernelNormResidualMax, k.normResidual);
    rep.kernelMin = std::min(rep.kernelMin, k.minKernel);

    if (config.dividend.zero()) {
      rep.martingaleResidualMax =
          std::max(rep.martingaleResidualMax, check_martingale(model, *sol).max());
      rep.martingaleChecked = true;
    }

    if (steps <= 2) {
      const OracleSolution oracle = brute_force_equilibrium(model, sol->mode);
      for (NodeId id = 0; id < lat.size(); ++id) {
        if (lat.terminal(id)) continue;
        rep.oracleGapMax = std::max({rep.oracleGapMax, std::abs(oracle.price[id] - sol->price[id]),
                                     std::abs(oracle.alpha[id] - sol->alpha[id])});
      }
    } else {
      for (NodeId id = 0; id < lat.size(); ++id) {
        if (lat.terminal(id)) continue;
        const OracleResult r = brute_force_layer(model, *sol, id);
        rep.oracleGapMax = std::max({rep.oracleGapMax, std::abs(r.price - sol->price[id]),
                                     std::abs(r.alpha - sol->alpha[id])});
      }
    }
  }
  if (!rep.martingaleChecked) rep.notes.push_back("martingale check skipped: hypothesis not met (nonzero dividend)");

  {
    auto [first, last] = lat.layer(steps - 1);
    for (NodeId id = first; id < last; ++id) {
      std::vector<double> price;
      std::vector<double> cont;
      for (auto [c, end] = lat.children(id); c < end; ++c) {
        price.push_back(consistent.price[c]);
        cont.push_back(consistent.cert_equiv(c, risk_aversion(lat, id)));
      }
      const ObjectiveG g(model, id, risk_aversion(lat, id), std::move(price), std::move(cont), 0.0);
      const double a = consistent.alpha[id];
      if (!g_unimodal(g, a, std::max(10.0, 2.0 * std::abs(a)), consistent.price[id])) {
        rep.gShapeOk = false;
      }
    }
  }

  rep.marginalUtilityResidualMax = check_marginal_utility(model, inconsistent);
  rep.wealthInvarianceResidualMax = check_wealth_invariance(model);

  if (config.chain.constant_gamma()) {
    rep.collapseChecked = true;
    rep.collapseResidualMax = solution_difference(consistent, inconsistent);
  }

  const bool dominanceApplies =
      steps == 2 && config.income.identically_zero() && !config.coefficients.mprOverride &&
      std::holds_alternative<ConstantFormula>(config.coefficients.muC) &&
      std::holds_alternative<ConstantFormula>(config.coefficients.sigmaC);
  if (dominanceApplies) {
    const DominanceReport d = check_dominance(config, tol.dominance);
    rep.dominanceChecked = true;
    rep.dominanceViolations = d.violations;
  } else {
    rep.notes.push_back("dominance check skipped: hypothesis not met (needs N = 2, I = 0, "
                        "constant coefficients)");
  }

  const auto require = [&](bool ok, const std::string& what) {
    if (!ok) rep.failures.push_back(what);
  };
  require(rep.kernelNormResidualMax <= tol.kernel, "kernel normalisation");
  require(rep.kernelMin > 0.0, "kernel positivity");
  require(!rep.martingaleChecked || rep.martingaleResidualMax <= tol.martingale, "martingale");
  require(rep.oracleGapMax <= tol.oracle, "oracle gap");
  require(rep.marginalUtilityResidualMax <= tol.marginalUtility, "marginal utility");
  require(rep.wealthInvarianceResidualMax <= tol.wealth, "wealth invariance");
  require(!rep.collapseChecked || rep.collapseResidualMax <= tol.collapse, "constant-gamma collapse");
  require(rep.dominanceViolations == 0, "dominance");
  require(rep.gShapeOk, "objective shape");
  return rep;
}

std::string VerificationReport::key_values() const {
  std::ostringstream out;
  out << "scenario = " << scenario << '\n'
      << "martingale_residual_max = " << (martingaleChecked ? fmt(martingaleResidualMax) : "skipped") << '\n'
      << "kernel_norm_residual_max = " << fmt(kernelNormResidualMax) << '\n'
      << "kernel_min = " << fmt(kernelMin) << '\n'
      << "oracle_gap_max = " << fmt(oracleGapMax) << '\n'
      << "marginal_utility_residual_max = " << fmt(marginalUtilityResidualMax) << '\n'
      << "dominance_violations = " << (dominanceChecked ? std::to_string(dominanceViolations) : "skipped") << '\n'
      << "wealth_invariance_residual_max = " << fmt(wealthInvarianceResidualMax) << '\n'
      << "collapse_residual_max = " << (collapseChecked ? fmt(collapseResidualMax) : "skipped") << '\n'
      << "g_shape = " << (gShapeOk ? "unimodal" : "violated") << '\n'
      << "status = " << (passed() ? "pass" : "fail") << '\n';
  for (const auto& n : notes) out << "note = " << n << '\n';
  for (const auto& f : failures) out << "failure = " << f << '\n';
  return out.str();
}

std::string VerificationReport::csv_header() {
  return "scenario,martingale_residual_max,kernel_norm_residual_max,kernel_min,oracle_gap_max,"
         "marginal_utility_residual_max,dominance_violations,wealth_invariance_residual_max,"
         "collapse_residual_max,status";
}

std::string VerificationReport::csv_row() const {
  std::ostringstream out;
  out << scenario << ',' << (martingaleChecked ? fmt(martingaleResidualMax) : "") << ','
      << fmt(kernelNormResidualMax) << ',' << fmt(kernelMin) << ',' << fmt(oracleGapMax) << ','
      << fmt(marginalUtilityResidualMax) << ','
      << (dominanceChecked ? std::to_string(dominanceViolations) : "") << ','
      << fmt(wealthInvarianceResidualMax) << ','
      << (collapseChecked ? fmt(collapseResidualMax) : "") << ','
      << (passed() ? "pass" : "fail");
  return out.str();
}

}  // namespace eqlat
