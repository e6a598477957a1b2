#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "eqlat/scenario.hpp"

namespace eqlat {

/// consistent: subgame-perfect strategies, re-optimised with gamma(J_{t_n}).
/// inconsistent: date-0 optimal strategies under the frozen gamma(J_{t_0}).
enum class SolutionMode { consistent, inconsistent };

std::string_view to_string(SolutionMode mode);
SolutionMode parse_mode(std::string_view text);

/// Equilibrium quantities on every lattice node. Vectors are indexed by
/// NodeId. Edge quantities (kernels) are stored on the child end of the edge.
struct PricingSolution {
  SolutionMode mode = SolutionMode::consistent;
  std::vector<double> gammaKeys;  // sorted distinct risk aversions
  std::vector<double> modeGamma;  // gamma that optimises at each node
  std::vector<double> price;      // D
  std::vector<double> alpha;      // wealth in the primary asset; NaN on terminals
  std::vector<double> beta;       // 1 on non-terminals (market clearing); NaN on terminals
  std::vector<double> kernel;     // one-step kernel parent -> node; NaN on roots
  Eigen::MatrixXd certEquiv;      // node x gamma key

  int key_index(double gamma) const;
  double cert_equiv(NodeId id, double gamma) const {
    return certEquiv(static_cast<Eigen::Index>(id), key_index(gamma));
  }

  /// Empty solution with terminal prices and certainty equivalents filled in.
  static PricingSolution initialise(const Model& model, SolutionMode mode);
};

/// lambda = 1 - r sqrt(h) on {db^1 = +1}, 1 + r sqrt(h) on {db^1 = -1}.
double one_step_lambda(ShockEvent event, double r, double h);

/// Y(node, gamma). Terminal: income. Otherwise the one-step recursion over the
/// node's already-solved alpha and price and the children's Y(., gamma).
double certainty_equivalent(const Model& model, const PricingSolution& partial, NodeId id,
                            double gammaKey);

/// Optimal wealth in the primary asset at a non-terminal node; requires price
/// and Y at the children.
double optimal_alpha(const Model& model, const PricingSolution& partial, NodeId id);

/// Lambda(parent -> child); requires price and Y at the parent's children.
double one_step_kernel(const Model& model, const PricingSolution& partial, NodeId parent,
                       NodeId child);

/// Equilibrium price at a node of layer N-1 from payoff and income alone.
double price_single_period(const Model& model, NodeId id);

PricingSolution solve_equilibrium(const Model& model, SolutionMode mode);

/// dQ/dP restricted to each terminal path; index i is the i-th terminal node.
struct MeasureDensity {
  NodeId firstTerminal = 0;
  std::vector<double> pathDensity;
};

MeasureDensity measure_density(const Model& model, const PricingSolution& solution);

/// Unconditional P-probability of reaching each node (roots weighted by the
/// initial regime law).
std::vector<double> path_probabilities(const Lattice& lattice);

/// Optimal trading in the primary asset alone (no derivative), terminal wealth
/// increment given per terminal node (index relative to the first terminal).
struct PortfolioSolution {
  SolutionMode mode = SolutionMode::consistent;
  std::vector<double> gammaKeys;
  std::vector<double> modeGamma;
  std::vector<double> alpha;
  Eigen::MatrixXd certEquiv;

  double cert_equiv(NodeId id, double gamma) const;
};

PortfolioSolution solve_portfolio(const Model& model, SolutionMode mode,
                                  std::span<const double> terminalValue);

/// Time-inconsistent (frozen gamma_{t_0}) value at a root with initial wealth,
/// holding `quantity` units of the claim that pays the configured payoff.
double claim_value_function(const Model& model, double quantity, double wealth, NodeId root);

/// Buyer's exponential-utility indifference price of `quantity` claims at a
/// root, found by bisection to 1e-10.
double indifference_price(const Model& model, double quantity, NodeId root,
                          double wealth = 0.0);

}  // namespace eqlat
