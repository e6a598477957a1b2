#pragma once

#include <span>
#include <string>
#include <vector>

#include "eqlat/pricing.hpp"

namespace eqlat {

/// The one-period objective g(alpha, beta) = E[exp(-gamma (x + dX + Y_next)) | F]
/// at a node, evaluated by direct enumeration of the children. The candidate
/// price D enters through dD = D_child - D. Nothing here uses the closed-form
/// strategy or kernel formulas.
class ObjectiveG {
 public:
  ObjectiveG(const Model& model, NodeId node, double gamma, std::vector<double> childPrice,
             std::vector<double> childContinuation, double wealth);

  double value(double alpha, double beta, double price) const;
  double d_alpha(double alpha, double beta, double price) const;
  double d_beta(double alpha, double beta, double price) const;

  /// d_beta / (-gamma g), in price units: positive when the candidate price is
  /// too low to clear the market.
  double clearing_residual(double alpha, double price) const;

  NodeId node() const { return node_; }
  double gamma() const { return gamma_; }
  std::pair<double, double> price_bracket() const;

 private:
  template <class F>
  double sum(F&& f) const;

  NodeId node_;
  double gamma_;
  double wealth_;
  double phiH_;
  std::vector<double> weight_;
  std::vector<double> gain_;  // mu h + sigma sqrt(h) db^1 per child
  std::vector<double> price_;
  std::vector<double> continuation_;
};

struct OracleResult {
  double alpha = 0.0;
  double price = 0.0;
  double clearingResidual = 0.0;
  int outerIterations = 0;
};

/// argmin over alpha of g(alpha, 1) by bisection on dg/dalpha.
double minimise_alpha(const ObjectiveG& g, double price);

/// Outer bisection on the price until dg/dbeta(alpha*, 1) = 0 within 1e-10.
OracleResult brute_force_node(const ObjectiveG& g);

/// Layer N-1 node, continuation value = income.
OracleResult brute_force_single_period(const Model& model, NodeId id, double wealth = 0.0);

/// Any non-terminal node, continuation values taken from the solver's Y at the
/// children under the node's mode gamma.
OracleResult brute_force_layer(const Model& model, const PricingSolution& solution, NodeId id,
                               double wealth = 0.0);

/// Full backward re-derivation: brute-force (alpha, D) per node and
/// continuation values by enumerating terminal paths. Restricted to N <= 2.
struct OracleSolution {
  std::vector<double> alpha;
  std::vector<double> price;
};
OracleSolution brute_force_equilibrium(const Model& model, SolutionMode mode);

/// g(., 1) on a 101-point grid centred on `centre` has a single sign change
/// in its discrete differences.
bool g_unimodal(const ObjectiveG& g, double centre, double halfWidth, double price,
                int points = 101);

struct MartingaleReport {
  double driftResidual = 0.0;  // |E^Q[r sqrt(h) + db^1]|
  double cResidual = 0.0;      // |E^Q[C_next / C] - 1|
  double dResidual = 0.0;      // |E^Q[D_next] - D|
  double max() const;
};

/// Requires a zero dividend.
MartingaleReport check_martingale(const Model& model, const PricingSolution& solution);

struct KernelReport {
  double normResidual = 0.0;  // max |E[Lambda] - 1|
  double minKernel = 0.0;
};
KernelReport check_kernel(const Model& model, const PricingSolution& solution);

/// Max edge residual between Lambda-hat and E_{t+}[U'(W)] / E_t[U'(W)], with
/// the optimal time-inconsistent terminal wealth enumerated path by path.
double check_marginal_utility(const Model& model, const PricingSolution& inconsistent,
                              double wealth = 0.0);

struct DominanceReport {
  int nodes = 0;             // t_1 nodes checked
  int violations = 0;        // E[U*] < E[U^] - tol
  int strictNodes = 0;       // E[U*] > E[U^] + tol
  double minGap = 0.0;       // min of E[U*] - E[U^]
  bool rootStrategiesEqual = false;  // alpha*_{t0} == alpha^_{t0} bitwise
  bool wealthEqual = false;          // W*_{t1} == W^_{t1} bitwise at every t_1 node
  int t1StrategyMismatches = 0;      // nodes with alpha*_{t1} != alpha^_{t1}
  int t1MismatchesUnchangedRegime = 0;
};

/// Two-period, primary asset only, zero income, constant coefficients.
DominanceReport check_dominance(const ScenarioConfig& config, double tolerance = 1e-12);

/// Max |(alpha, D)(x) - (alpha, D)(0)| over x in {-10, 0, 10} at every t_{N-1} node.
double check_wealth_invariance(const Model& model);

struct Tolerances {
  double martingale = 1e-10;
  double kernel = 1e-12;
  double oracle = 1e-8;
  double marginalUtility = 1e-12;
  double wealth = 1e-10;
  double dominance = 1e-12;
  double collapse = 1e-12;
};

struct VerificationReport {
  std::string scenario;
  double martingaleResidualMax = 0.0;
  double kernelNormResidualMax = 0.0;
  double kernelMin = 0.0;
  double oracleGapMax = 0.0;
  double marginalUtilityResidualMax = 0.0;
  int dominanceViolations = 0;
  double wealthInvarianceResidualMax = 0.0;
  double collapseResidualMax = 0.0;
  bool gShapeOk = true;

  bool martingaleChecked = false;
  bool dominanceChecked = false;
  bool collapseChecked = false;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  std::string key_values() const;
  static std::string csv_header();
  std::string csv_row() const;
};

VerificationReport verify_scenario(const ScenarioConfig& config, const Tolerances& tol = {});

/// max |a - b| over prices, alphas and kernels.
double solution_difference(const PricingSolution& a, const PricingSolution& b);

}  // namespace eqlat
