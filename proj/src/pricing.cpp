#include "eqlat/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "eqlat/errors.hpp"

namespace eqlat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string where(const Lattice& lattice, NodeId id) {
  const Node n = lattice.node(id);
  std::ostringstream out;
  out << "t_" << n.timeIndex << " shocks=";
  for (const auto& s : n.shocks) out << '[' << s.str() << ']';
  out << " regimes=";
  for (std::size_t i = 0; i < n.regimes.size(); ++i) {
    out << (i ? "," : "") << lattice.chain().labels[static_cast<std::size_t>(n.regimes[i])];
  }
  return out.str();
}

std::vector<double> distinct_gammas(const RegimeChain& chain) {
  std::set<double> keys(chain.gamma.data(), chain.gamma.data() + chain.gamma.size());
  return {keys.begin(), keys.end()};
}

std::vector<double> mode_gammas(const Lattice& lattice, SolutionMode mode) {
  std::vector<double> g(lattice.size());
  for (NodeId id = 0; id < lattice.size(); ++id) {
    g[id] = mode == SolutionMode::consistent
                ? risk_aversion(lattice, id)
                : risk_aversion(lattice, lattice.root_of(id));
  }
  return g;
}

int find_key(const std::vector<double>& keys, double gamma) {
  const auto it = std::lower_bound(keys.begin(), keys.end(), gamma);
  if (it == keys.end() || *it != gamma) {
    throw PreconditionError("no certainty equivalent stored for gamma = " +
                            std::to_string(gamma));
  }
  return static_cast<int>(it - keys.begin());
}

/// Exponential tilt of a child value z under weight e^{-gamma z}, restricted to
/// one A / A^c class. Computed relative to the class minimum of z.
struct TiltClass {
  double zmin = std::numeric_limits<double>::infinity();
  double mean = 0.0;  // E[e^{-gamma (z - zmin)} | class]

  double log_expectation(double gamma) const { return -gamma * zmin + std::log(mean); }
};

template <class ValueFn>
std::pair<TiltClass, TiltClass> tilt(const Lattice& lattice, NodeId id, double gamma,
                                     ValueFn&& z) {
  TiltClass up, down;
  auto [first, last] = lattice.children(id);
  for (NodeId c = first; c < last; ++c) {
    auto& cls = lattice.event(c) == ShockEvent::up ? up : down;
    cls.zmin = std::min(cls.zmin, z(c));
  }
  for (auto* cls : {&up, &down}) {
    const ShockEvent ev = cls == &up ? ShockEvent::up : ShockEvent::down;
    const double zmin = cls->zmin;
    cls->mean =
        lattice.expect_given(id, ev, [&](NodeId c) { return std::exp(-gamma * (z(c) - zmin)); });
    if (!(cls->mean > 0.0) || !std::isfinite(cls->mean)) {
      throw NumericalRangeError("exponential moment out of range at " + where(lattice, id));
    }
  }
  return {up, down};
}

double merton_term(double r, double h) {
  const double x = r * std::sqrt(h);
  return std::log1p(x) - std::log1p(-x);
}

/// alpha from the tilted child values z = D + Y under gamma.
template <class ValueFn>
double alpha_from_values(const Model& model, NodeId id, double gamma, ValueFn&& z) {
  const LocalCoefficients& k = model.market.coefficients(id);
  const double h = model.lattice.grid().h();
  const auto [up, down] = tilt(model.lattice, id, gamma, z);
  const double hedge = up.log_expectation(gamma) - down.log_expectation(gamma);
  return (merton_term(k.mpr, h) + hedge) / (2.0 * gamma * k.sigmaC * std::sqrt(h));
}

/// -1/gamma log E[e^{-gamma u}] over the children, shifted by min u.
template <class ValueFn>
double certainty_equivalent_of(const Lattice& lattice, NodeId id, double gamma, ValueFn&& u) {
  double umin = std::numeric_limits<double>::infinity();
  for (auto [c, end] = lattice.children(id); c < end; ++c) umin = std::min(umin, u(c));
  const double mean =
      lattice.expect(id, [&](NodeId c) { return std::exp(-gamma * (u(c) - umin)); });
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw NumericalRangeError("certainty equivalent out of range at " + where(lattice, id));
  }
  return umin - std::log(mean) / gamma;
}

double trading_gain(const LocalCoefficients& k, double h, int db1) {
  return k.muC * h + k.sigmaC * std::sqrt(h) * db1;
}

/// Solves alpha, child kernels and price at one non-terminal node. The order
/// (alpha, kernels, price) follows the data dependencies.
void solve_node(const Model& model, PricingSolution& sol, NodeId id) {
  const Lattice& lat = model.lattice;
  const double gamma = sol.modeGamma[id];
  const int key = find_key(sol.gammaKeys, gamma);
  const auto z = [&](NodeId c) {
    return sol.price[c] + sol.certEquiv(static_cast<Eigen::Index>(c), key);
  };
  const LocalCoefficients& k = model.market.coefficients(id);
  const double h = lat.grid().h();

  sol.alpha[id] = alpha_from_values(model, id, gamma, z);
  sol.beta[id] = 1.0;

  const auto [up, down] = tilt(lat, id, gamma, z);
  for (auto [c, end] = lat.children(id); c < end; ++c) {
    const ShockEvent ev = lat.event(c);
    const TiltClass& cls = ev == ShockEvent::up ? up : down;
    sol.kernel[c] =
        one_step_lambda(ev, k.mpr, h) * std::exp(-gamma * (z(c) - cls.zmin)) / cls.mean;
  }
  sol.price[id] = lat.expect(id, [&](NodeId c) { return sol.kernel[c] * sol.price[c]; }) +
                  dividend(model.config.dividend, model.market, id) * h;
}

void fill_cert_equivalents(const Model& model, PricingSolution& sol, int layer) {
  auto [first, last] = model.lattice.layer(layer);
  for (NodeId id = first; id < last; ++id) {
    for (std::size_t j = 0; j < sol.gammaKeys.size(); ++j) {
      sol.certEquiv(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(j)) =
          certainty_equivalent(model, sol, id, sol.gammaKeys[j]);
    }
  }
}

}  // namespace

std::string_view to_string(SolutionMode mode) {
  return mode == SolutionMode::consistent ? "consistent" : "inconsistent";
}

SolutionMode parse_mode(std::string_view text) {
  if (text == "consistent") return SolutionMode::consistent;
  if (text == "inconsistent") return SolutionMode::inconsistent;
  throw ConfigError("unknown solution mode '" + std::string(text) + "'");
}

int PricingSolution::key_index(double gamma) const { return find_key(gammaKeys, gamma); }

PricingSolution PricingSolution::initialise(const Model& model, SolutionMode mode) {
  const Lattice& lat = model.lattice;
  PricingSolution sol;
  sol.mode = mode;
  sol.gammaKeys = distinct_gammas(lat.chain());
  sol.modeGamma = mode_gammas(lat, mode);
  sol.price.assign(lat.size(), kNaN);
  sol.alpha.assign(lat.size(), kNaN);
  sol.beta.assign(lat.size(), kNaN);
  sol.kernel.assign(lat.size(), kNaN);
  sol.certEquiv = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(lat.size()),
                                            static_cast<Eigen::Index>(sol.gammaKeys.size()), kNaN);

  auto [first, last] = lat.layer(lat.grid().steps());
  for (NodeId id = first; id < last; ++id) {
    sol.price[id] = payoff(model.config.payoff, lat, model.market, id);
    const double y = income(lat, model.market, id, model.config.income);
    if (!std::isfinite(sol.price[id]) || !std::isfinite(y)) {
      throw NumericalRangeError("payoff or income not finite at " + where(lat, id));
    }
    sol.certEquiv.row(static_cast<Eigen::Index>(id)).setConstant(y);
  }
  return sol;
}

double one_step_lambda(ShockEvent event, double r, double h) {
  const double x = r * std::sqrt(h);
  if (!(x < 1.0)) {
    throw AdmissibilityError("r*sqrt(h) = " + std::to_string(x) +
                             " >= 1: one-step kernel would not be positive");
  }
  return event == ShockEvent::up ? 1.0 - x : 1.0 + x;
}

double certainty_equivalent(const Model& model, const PricingSolution& partial, NodeId id,
                            double gammaKey) {
  const Lattice& lat = model.lattice;
  if (lat.terminal(id)) return income(lat, model.market, id, model.config.income);

  const int key = partial.key_index(gammaKey);
  const LocalCoefficients& k = model.market.coefficients(id);
  const double h = lat.grid().h();
  const double alpha = partial.alpha[id];
  const double d = partial.price[id];
  const double phiH = dividend(model.config.dividend, model.market, id) * h;
  return certainty_equivalent_of(lat, id, gammaKey, [&](NodeId c) {
    const double gain = alpha * trading_gain(k, h, lat.shock(c)[0]) + (partial.price[c] - d) + phiH;
    return gain + partial.certEquiv(static_cast<Eigen::Index>(c), key);
  });
}

double optimal_alpha(const Model& model, const PricingSolution& partial, NodeId id) {
  const double gamma = partial.modeGamma[id];
  const int key = partial.key_index(gamma);
  return alpha_from_values(model, id, gamma, [&](NodeId c) {
    return partial.price[c] + partial.certEquiv(static_cast<Eigen::Index>(c), key);
  });
}

double one_step_kernel(const Model& model, const PricingSolution& partial, NodeId parent,
                       NodeId child) {
  const Lattice& lat = model.lattice;
  if (lat.parent(child) != parent) throw PreconditionError("child is not below parent");
  const double gamma = partial.modeGamma[parent];
  const int key = partial.key_index(gamma);
  const auto z = [&](NodeId c) {
    return partial.price[c] + partial.certEquiv(static_cast<Eigen::Index>(c), key);
  };
  const auto [up, down] = tilt(lat, parent, gamma, z);
  const ShockEvent ev = lat.event(child);
  const TiltClass& cls = ev == ShockEvent::up ? up : down;
  return one_step_lambda(ev, model.market.coefficients(parent).mpr, lat.grid().h()) *
         std::exp(-gamma * (z(child) - cls.zmin)) / cls.mean;
}

double price_single_period(const Model& model, NodeId id) {
  const Lattice& lat = model.lattice;
  if (lat.time(id) != lat.grid().steps() - 1) {
    throw PreconditionError("single-period pricing needs a node at t_{N-1}");
  }
  // Both modes coincide one step before maturity.
  PricingSolution sol = PricingSolution::initialise(model, SolutionMode::consistent);
  solve_node(model, sol, id);
  return sol.price[id];
}

PricingSolution solve_equilibrium(const Model& model, SolutionMode mode) {
  const Lattice& lat = model.lattice;
  PricingSolution sol = PricingSolution::initialise(model, mode);
  for (int n = lat.grid().steps() - 1; n >= 0; --n) {
    auto [first, last] = lat.layer(n);
    for (NodeId id = first; id < last; ++id) solve_node(model, sol, id);
    fill_cert_equivalents(model, sol, n);
  }
  return sol;
}

std::vector<double> path_probabilities(const Lattice& lattice) {
  std::vector<double> p(lattice.size());
  for (NodeId id = 0; id < lattice.size(); ++id) {
    const NodeId parent = lattice.parent(id);
    p[id] = parent == kNoNode ? lattice.weight(id) : p[parent] * lattice.weight(id);
  }
  return p;
}

MeasureDensity measure_density(const Model& model, const PricingSolution& solution) {
  const Lattice& lat = model.lattice;
  std::vector<double> cumulative(lat.size(), 1.0);
  for (NodeId id = 0; id < lat.size(); ++id) {
    const NodeId parent = lat.parent(id);
    if (parent != kNoNode) cumulative[id] = cumulative[parent] * solution.kernel[id];
  }
  auto [first, last] = lat.layer(lat.grid().steps());
  MeasureDensity out;
  out.firstTerminal = first;
  out.pathDensity.assign(cumulative.begin() + static_cast<std::ptrdiff_t>(first),
                         cumulative.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

double PortfolioSolution::cert_equiv(NodeId id, double gamma) const {
  return certEquiv(static_cast<Eigen::Index>(id), find_key(gammaKeys, gamma));
}

PortfolioSolution solve_portfolio(const Model& model, SolutionMode mode,
                                  std::span<const double> terminalValue) {
  const Lattice& lat = model.lattice;
  const int steps = lat.grid().steps();
  auto [tFirst, tLast] = lat.layer(steps);
  if (terminalValue.size() != tLast - tFirst) {
    throw PreconditionError("terminal value vector does not match the terminal layer");
  }

  PortfolioSolution sol;
  sol.mode = mode;
  sol.gammaKeys = distinct_gammas(lat.chain());
  sol.modeGamma = mode_gammas(lat, mode);
  sol.alpha.assign(lat.size(), kNaN);
  sol.certEquiv = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(lat.size()),
                                            static_cast<Eigen::Index>(sol.gammaKeys.size()), kNaN);
  for (NodeId id = tFirst; id < tLast; ++id) {
    sol.certEquiv.row(static_cast<Eigen::Index>(id)).setConstant(terminalValue[id - tFirst]);
  }

  const double h = lat.grid().h();
  for (int n = steps - 1; n >= 0; --n) {
    auto [first, last] = lat.layer(n);
    for (NodeId id = first; id < last; ++id) {
      const double gamma = sol.modeGamma[id];
      const auto key = static_cast<Eigen::Index>(find_key(sol.gammaKeys, gamma));
      sol.alpha[id] = alpha_from_values(model, id, gamma, [&](NodeId c) {
        return sol.certEquiv(static_cast<Eigen::Index>(c), key);
      });
    }
    for (NodeId id = first; id < last; ++id) {
      const LocalCoefficients& k = model.market.coefficients(id);
      for (std::size_t j = 0; j < sol.gammaKeys.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        sol.certEquiv(static_cast<Eigen::Index>(id), col) =
            certainty_equivalent_of(lat, id, sol.gammaKeys[j], [&](NodeId c) {
              return sol.alpha[id] * trading_gain(k, h, lat.shock(c)[0]) +
                     sol.certEquiv(static_cast<Eigen::Index>(c), col);
            });
      }
    }
  }
  return sol;
}

double claim_value_function(const Model& model, double quantity, double wealth, NodeId root) {
  const Lattice& lat = model.lattice;
  if (lat.parent(root) != kNoNode) throw PreconditionError("value function needs a root node");
  auto [first, last] = lat.layer(lat.grid().steps());
  std::vector<double> terminal(last - first);
  for (NodeId id = first; id < last; ++id) {
    terminal[id - first] = income(lat, model.market, id, model.config.income) +
                           quantity * payoff(model.config.payoff, lat, model.market, id);
  }
  const PortfolioSolution sol = solve_portfolio(model, SolutionMode::inconsistent, terminal);
  const double gamma = risk_aversion(lat, root);
  return -std::exp(-gamma * (wealth + sol.cert_equiv(root, gamma)));
}

double indifference_price(const Model& model, double quantity, NodeId root, double wealth) {
  const double without = claim_value_function(model, 0.0, wealth, root);
  const auto excess = [&](double p) {
    return claim_value_function(model, quantity, wealth - p, root) - without;
  };

  auto [lo, hi] = payoff_bounds(model.config.payoff, model.lattice, model.market);
  lo *= quantity;
  hi *= quantity;
  if (lo > hi) std::swap(lo, hi);
  const double margin = 1e-6 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  lo -= margin;
  hi += margin;

  double fLo = excess(lo);
  double fHi = excess(hi);
  if (!(fLo >= 0.0 && fHi <= 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "indifference price not bracketed by payoff bounds [" << lo << ", " << hi
        << "] (excess utility " << fLo << ", " << fHi << ")";
    throw ConvergenceError(msg.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace eqlat
