#include "eqlat/lattice.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

#include "eqlat/errors.hpp"

namespace eqlat {

TimeGrid::TimeGrid(int steps, double h) : steps_(steps), h_(h) {
  if (steps < 1) throw ConfigError("time grid needs N >= 1 periods");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("time grid needs h > 0");
}

ShockVector::ShockVector(std::uint32_t upMask, int dim) : mask_(upMask), dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("walk dimension out of range");
  if (dim < 32 && (upMask >> dim) != 0u) throw ConfigError("shock mask exceeds dimension");
}

std::string ShockVector::str() const {
  std::string s(static_cast<std::size_t>(dim_), '-');
  for (int i = 0; i < dim_; ++i) {
    if ((*this)[i] > 0) s[static_cast<std::size_t>(i)] = '+';
  }
  return s;
}

namespace {

int positive_entries(const Eigen::VectorXd& row) {
  int n = 0;
  for (Eigen::Index j = 0; j < row.size(); ++j) n += row(j) > 0.0 ? 1 : 0;
  return n;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

}  // namespace

std::uint64_t Lattice::predicted_paths(int steps, int dim, const RegimeChain& chain) {
  int branching = 0;
  for (int i = 0; i < chain.size(); ++i) {
    branching = std::max(branching, positive_entries(chain.transition.row(i).transpose()));
  }
  const std::uint64_t perStep =
      saturating_mul(std::uint64_t{1} << std::min(dim, 63), static_cast<std::uint64_t>(branching));
  std::uint64_t paths = static_cast<std::uint64_t>(positive_entries(chain.initial));
  for (int n = 0; n < steps; ++n) paths = saturating_mul(paths, perStep);
  return paths;
}

Lattice::Lattice(TimeGrid grid, int dim, RegimeChain chain, std::uint64_t pathCap)
    : grid_(grid), dim_(dim), chain_(std::move(chain)) {
  if (dim < 1 || dim > ShockVector::kMaxDim) {
    throw ConfigError("walk dimension must be in [1, " +
                      std::to_string(ShockVector::kMaxDim) + "]");
  }
  chain_.validate();

  const std::uint64_t paths = predicted_paths(grid_.steps(), dim_, chain_);
  if (paths > pathCap) {
    std::ostringstream msg;
    msg << "lattice would have " << paths << " terminal paths (N=" << grid_.steps()
        << ", d=" << dim_ << ", regimes=" << chain_.size() << "), exceeding the path cap "
        << pathCap;
    throw ResourceError(msg.str());
  }

  const std::uint32_t shockCount = std::uint32_t{1} << dim_;
  const double shockWeight = std::ldexp(1.0, -dim_);

  layerStart_.push_back(0);
  for (int i = 0; i < chain_.size(); ++i) {
    if (chain_.initial(i) > 0.0) {
      nodes_.push_back({kNoNode, kNoNode, 0, 0, 0, i, chain_.initial(i)});
    }
  }
  layerStart_.push_back(nodes_.size());

  for (int n = 0; n < grid_.steps(); ++n) {
    const NodeId first = layerStart_[n];
    const NodeId last = layerStart_[n + 1];
    for (NodeId p = first; p < last; ++p) {
      const int from = nodes_[p].regime;
      nodes_[p].firstChild = nodes_.size();
      std::uint32_t count = 0;
      for (std::uint32_t s = 0; s < shockCount; ++s) {
        for (int j = 0; j < chain_.size(); ++j) {
          const double pj = chain_.transition(from, j);
          if (!(pj > 0.0)) continue;
          nodes_.push_back({p, kNoNode, 0, s, n + 1, j, shockWeight * pj});
          ++count;
        }
      }
      nodes_[p].childCount = count;
    }
    layerStart_.push_back(nodes_.size());
  }
}

NodeId Lattice::root_of(NodeId id) const {
  while (nodes_[id].parent != kNoNode) id = nodes_[id].parent;
  return id;
}

ShockVector Lattice::shock_at(NodeId id, int step) const {
  if (step < 0 || step >= nodes_[id].time) {
    throw PreconditionError("shock step " + std::to_string(step) + " not on path to node");
  }
  while (nodes_[id].time > step + 1) id = nodes_[id].parent;
  return shock(id);
}

int Lattice::regime_at(NodeId id, int k) const {
  if (k < 0 || k > nodes_[id].time) {
    throw PreconditionError("regime time " + std::to_string(k) + " not on path to node");
  }
  while (nodes_[id].time > k) id = nodes_[id].parent;
  return nodes_[id].regime;
}

Node Lattice::node(NodeId id) const {
  Node out;
  out.timeIndex = nodes_[id].time;
  out.shocks.resize(static_cast<std::size_t>(out.timeIndex));
  out.regimes.resize(static_cast<std::size_t>(out.timeIndex) + 1);
  for (NodeId cur = id;; cur = nodes_[cur].parent) {
    const auto t = static_cast<std::size_t>(nodes_[cur].time);
    out.regimes[t] = nodes_[cur].regime;
    if (t == 0) break;
    out.shocks[t - 1] = shock(cur);
  }
  return out;
}

NodeId Lattice::find(const Node& target) const {
  if (target.timeIndex < 0 || target.timeIndex > grid_.steps() ||
      target.shocks.size() != static_cast<std::size_t>(target.timeIndex) ||
      target.regimes.size() != static_cast<std::size_t>(target.timeIndex) + 1) {
    throw ConfigError("malformed node history");
  }
  NodeId cur = kNoNode;
  for (auto [r, end] = roots(); r < end; ++r) {
    if (nodes_[r].regime == target.regimes[0]) cur = r;
  }
  for (int t = 0; t < target.timeIndex && cur != kNoNode; ++t) {
    NodeId next = kNoNode;
    for (auto [c, end] = children(cur); c < end; ++c) {
      if (nodes_[c].shock == target.shocks[t].mask() &&
          nodes_[c].regime == target.regimes[t + 1]) {
        next = c;
        break;
      }
    }
    cur = next;
  }
  if (cur == kNoNode) throw ConfigError("node history not present in lattice");
  return cur;
}

void Lattice::require_children(NodeId id) const {
  if (nodes_[id].time >= grid_.steps()) {
    throw PreconditionError("no children: node at t_" + std::to_string(nodes_[id].time) +
                            " is terminal");
  }
}

ChildDistribution Lattice::enumerate_children(NodeId id) const {
  require_children(id);
  ChildDistribution dist;
  auto [first, last] = children(id);
  dist.entries.reserve(last - first);
  for (NodeId c = first; c < last; ++c) dist.entries.push_back({c, nodes_[c].weight});
  return dist;
}

}  // namespace eqlat
