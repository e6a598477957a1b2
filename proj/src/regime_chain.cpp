#include "eqlat/regime_chain.hpp"

#include <cmath>
#include <sstream>

#include "eqlat/errors.hpp"

namespace eqlat {

namespace {
constexpr double kStochasticTol = 1e-14;
}

double RegimeChain::gamma_of(int state) const {
  if (state < 0 || state >= size()) {
    throw ConfigError("unknown regime index " + std::to_string(state), "E_REGIME");
  }
  return gamma(state);
}

int RegimeChain::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ConfigError("unknown regime label '" + std::string(label) + "'", "E_REGIME");
}

void RegimeChain::validate() const {
  const int n = size();
  if (n == 0) throw ConfigError("regime chain has no states");
  if (transition.rows() != n || transition.cols() != n) {
    throw ConfigError("transition matrix must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  }
  if (initial.size() != n || gamma.size() != n) {
    throw ConfigError("initial distribution and gamma must have one entry per regime");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(transition(i, j) >= 0.0) || !std::isfinite(transition(i, j))) {
        throw ConfigError("transition entries must be finite and nonnegative (row " +
                          labels[i] + ")");
      }
    }
    const double rowSum = transition.row(i).sum();
    if (std::abs(rowSum - 1.0) > kStochasticTol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "transition row '" << labels[i] << "' is not stochastic (sum " << rowSum
          << ")";
      throw ConfigError(msg.str());
    }
    if (!(gamma(i) > 0.0) || !std::isfinite(gamma(i))) {
      throw ConfigError("risk aversion for regime '" + labels[i] + "' must be positive");
    }
    if (!(initial(i) >= 0.0)) {
      throw ConfigError("initial regime distribution must be nonnegative");
    }
  }
  if (std::abs(initial.sum() - 1.0) > kStochasticTol) {
    throw ConfigError("initial regime distribution must sum to 1");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (labels[i] == labels[j]) throw ConfigError("duplicate regime label " + labels[i]);
    }
  }
}

bool RegimeChain::constant_gamma() const {
  for (int i = 1; i < size(); ++i) {
    if (gamma(i) != gamma(0)) return false;
  }
  return true;
}

RegimeChain RegimeChain::single(double g, std::string label) {
  RegimeChain chain;
  chain.labels = {std::move(label)};
  chain.transition = Eigen::MatrixXd::Ones(1, 1);
  chain.initial = Eigen::VectorXd::Ones(1);
  chain.gamma = Eigen::VectorXd::Constant(1, g);
  return chain;
}

bool operator==(const RegimeChain& a, const RegimeChain& b) {
  return a.labels == b.labels && a.transition.rows() == b.transition.rows() &&
         a.transition.cols() == b.transition.cols() && a.transition == b.transition &&
         a.initial.size() == b.initial.size() && a.initial == b.initial &&
         a.gamma.size() == b.gamma.size() && a.gamma == b.gamma;
}

}  // namespace eqlat
