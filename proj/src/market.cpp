#include "eqlat/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eqlat/detail/overloaded.hpp"
#include "eqlat/errors.hpp"

namespace eqlat {

namespace {

using detail::Overloaded;

std::string describe(int timeIndex, const ForwardState& st) {
  std::ostringstream msg;
  msg.precision(10);
  msg << "node t_" << timeIndex << " (C=" << st.c << ", S=" << st.s << ")";
  return msg.str();
}

}  // namespace

double evaluate(const CoefficientFormula& f, double s) {
  return std::visit(Overloaded{[](const ConstantFormula& c) { return c.value; },
                               [s](const AffineInS& a) { return a.intercept + a.slope * s; }},
                    f);
}

double evaluate(const MprFormula& f, double s) {
  return std::visit(
      Overloaded{[](const ConstantFormula& c) { return c.value; },
                 [s](const ArctanMpr& a) { return std::sqrt(a.scale * (std::atan(s) + a.offset)); }},
      f);
}

LocalCoefficients local_coefficients(const CoefficientSpec& spec, int timeIndex,
                                     const ForwardState& state, double h) {
  if (!(std::abs(spec.rho) < 1.0)) {
    throw ConfigError("correlation must satisfy |rho| < 1", "E_RHO");
  }
  LocalCoefficients out;
  out.rho = spec.rho;
  out.sigmaC = evaluate(spec.sigmaC, state.s);
  out.muS = evaluate(spec.muS, state.s);
  out.sigmaS = evaluate(spec.sigmaS, state.s);
  if (!(out.sigmaC > 0.0) || !(out.sigmaS > 0.0)) {
    throw ConfigError("volatilities must be positive at " + describe(timeIndex, state));
  }
  if (spec.mprOverride) {
    out.mpr = evaluate(*spec.mprOverride, state.s);
    if (!std::isfinite(out.mpr)) {
      throw ConfigError("market price of risk override is not finite at " +
                        describe(timeIndex, state));
    }
    out.muC = out.mpr * out.sigmaC;
  } else {
    out.muC = evaluate(spec.muC, state.s);
    out.mpr = out.muC / out.sigmaC;
  }
  if (!(out.mpr >= 0.0)) {
    throw ConfigError("market price of risk must be nonnegative at " +
                      describe(timeIndex, state));
  }
  const double rsh = out.mpr * std::sqrt(h);
  if (!(rsh < 1.0)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "step size too coarse: r*sqrt(h) = " << rsh << " >= 1 at "
        << describe(timeIndex, state) << "; the time length h must be small enough that "
        << "r*sqrt(h) < 1";
    throw AdmissibilityError(msg.str());
  }
  return out;
}

double market_price_of_risk(const CoefficientSpec& spec, int timeIndex,
                            const ForwardState& state, double h) {
  return local_coefficients(spec, timeIndex, state, h).mpr;
}

ForwardState evolve_forward(const ForwardState& parent, const ShockVector& shock,
                            const LocalCoefficients& k, double h) {
  const double sh = std::sqrt(h);
  const int db1 = shock[0];
  const int db2 = shock.dim() > 1 ? shock[1] : 0;
  ForwardState next;
  next.c = parent.c * (1.0 + k.muC * h + k.sigmaC * sh * db1);
  next.s = parent.s *
           (1.0 + k.muS * h + k.sigmaS * sh * (k.rho * db1 + std::sqrt(1.0 - k.rho * k.rho) * db2));
  if (!(next.c > 0.0) || !(next.s > 0.0) || !std::isfinite(next.c) || !std::isfinite(next.s)) {
    throw ConfigError("forward prices must stay positive (child of C=" +
                      std::to_string(parent.c) + ", S=" + std::to_string(parent.s) + ")");
  }
  return next;
}

MarketTree::MarketTree(const Lattice& lattice, const CoefficientSpec& spec,
                       const ForwardState& initial)
    : states_(lattice.size()), coefs_(lattice.size()), s0_(initial.s) {
  if (!(initial.c > 0.0) || !(initial.s > 0.0)) {
    throw ConfigError("initial prices c and s must be positive");
  }
  if (spec.rho != 0.0 && lattice.dim() < 2) {
    throw ConfigError("a nonzero correlation needs walk dimension d >= 2");
  }
  const double h = lattice.grid().h();
  const double sh = std::sqrt(h);
  for (auto [r, end] = lattice.roots(); r < end; ++r) states_[r] = initial;

  for (NodeId id = 0; id < lattice.size(); ++id) {
    if (lattice.terminal(id)) continue;
    const int t = lattice.time(id);
    const LocalCoefficients k = local_coefficients(spec, t, states_[id], h);
    if (!(1.0 + k.muC * h - k.sigmaC * sh > 0.0) ||
        !(1.0 + k.muS * h - k.sigmaS * sh * (std::abs(k.rho) + std::sqrt(1.0 - k.rho * k.rho)) >
          0.0)) {
      throw ConfigError("positivity guard violated at " + describe(t, states_[id]) +
                        ": prices could become nonpositive");
    }
    coefs_[id] = k;
    for (auto [c, cend] = lattice.children(id); c < cend; ++c) {
      states_[c] = evolve_forward(states_[id], lattice.shock(c), k, h);
    }
  }
}

double risk_aversion(const Lattice& lattice, NodeId id) {
  return lattice.chain().gamma_of(lattice.regime(id));
}

bool IncomeSpec::identically_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const IncomeTerm& t) {
    return std::visit(Overloaded{[](const ConstantIncome& c) { return c.value == 0.0; },
                                 [](const ExpAffineIncome& e) { return e.coef == 0.0; },
                                 [](const IndicatorIncome& i) { return i.coef == 0.0; }},
                      t);
  });
}

int IncomeSpec::max_component() const {
  int m = -1;
  for (const auto& t : terms) {
    if (const auto* ind = std::get_if<IndicatorIncome>(&t)) {
      for (const auto& c : ind->shocks) m = std::max(m, c.component);
    }
  }
  return m;
}

double income(const Lattice& lattice, const MarketTree& market, NodeId terminal,
              const IncomeSpec& spec) {
  const double h = lattice.grid().h();
  KahanSum acc;
  for (const auto& term : spec.terms) {
    acc.add(std::visit(
        Overloaded{
            [](const ConstantIncome& c) { return c.value; },
            [&](const ExpAffineIncome& e) {
              NodeId at = terminal;
              if (e.time >= 0) {
                while (lattice.time(at) > e.time) at = lattice.parent(at);
              }
              return e.coef * std::exp(e.slope * (market.state(at).s - market.s0()) * h);
            },
            [&](const IndicatorIncome& ind) {
              for (const auto& c : ind.shocks) {
                if (lattice.shock_at(terminal, c.step)[c.component] != c.sign) return 0.0;
              }
              for (const auto& c : ind.regimes) {
                if (lattice.regime_at(terminal, c.time) != c.state) return 0.0;
              }
              return ind.coef * std::exp(ind.rate * h);
            }},
        term));
  }
  return acc.value();
}

bool DividendSpec::zero() const {
  const auto* c = std::get_if<ConstantFormula>(&phi);
  return c != nullptr && c->value == 0.0;
}

double dividend(const DividendSpec& spec, const MarketTree& market, NodeId id) {
  return evaluate(spec.phi, market.state(id).s);
}

double payoff(const PayoffSpec& spec, const Lattice& lattice, const MarketTree& market,
              NodeId terminal) {
  return std::visit(
      Overloaded{[&](const CallPayoff& p) { return std::max(market.state(terminal).s - p.strike, 0.0); },
                 [&](const DigitalPayoff&) {
                   return lattice.event(terminal) == ShockEvent::up ? 1.0 : 0.0;
                 },
                 [](const ConstantPayoff& p) { return p.value; }},
      spec);
}

std::pair<double, double> payoff_bounds(const PayoffSpec& spec, const Lattice& lattice,
                                        const MarketTree& market) {
  auto [first, last] = lattice.layer(lattice.grid().steps());
  double lo = payoff(spec, lattice, market, first);
  double hi = lo;
  for (NodeId id = first + 1; id < last; ++id) {
    const double v = payoff(spec, lattice, market, id);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace eqlat
