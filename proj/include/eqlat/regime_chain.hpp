#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace eqlat {

/// Finite homogeneous Markov chain driving the risk-aversion coefficient.
///
/// `transition(i, j)` is P(J_{n+1} = j | J_n = i). `initial` is the law of
/// J_0; every state with positive initial mass becomes a lattice root.
struct RegimeChain {
  std::vector<std::string> labels;
  Eigen::MatrixXd transition;
  Eigen::VectorXd initial;
  Eigen::VectorXd gamma;

  int size() const { return static_cast<int>(labels.size()); }
  double gamma_of(int state) const;
  /// Throws ConfigError (E_REGIME) for an unknown label.
  int index_of(std::string_view label) const;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  /// True when every state carries the same risk aversion.
  bool constant_gamma() const;

  static RegimeChain single(double gamma, std::string label = "base");

  friend bool operator==(const RegimeChain& a, const RegimeChain& b);
};

}  // namespace eqlat
