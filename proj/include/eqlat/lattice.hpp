#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eqlat/regime_chain.hpp"

namespace eqlat {

/// Trading dates t_n = n*h, n = 0..N. The horizon is always derived.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(int steps, double h);

  int steps() const { return steps_; }
  double h() const { return h_; }
  double horizon() const { return steps_ * h_; }
  double time(int n) const { return n * h_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  int steps_ = 1;
  double h_ = 1.0;
};

/// One draw of the d-dimensional symmetric walk increment. Bit i of the mask
/// set means component i is +1.
class ShockVector {
 public:
  static constexpr int kMaxDim = 16;

  ShockVector() = default;
  ShockVector(std::uint32_t upMask, int dim);

  int dim() const { return dim_; }
  std::uint32_t mask() const { return mask_; }
  int operator[](int component) const { return (mask_ >> component) & 1u ? 1 : -1; }

  /// "+-+" style rendering, component 0 first.
  std::string str() const;

  friend bool operator==(const ShockVector&, const ShockVector&) = default;

 private:
  std::uint32_t mask_ = 0;
  int dim_ = 0;
};

/// Information-set point: the full shock and regime history up to t_n.
struct Node {
  int timeIndex = 0;
  std::vector<ShockVector> shocks;  // length timeIndex
  std::vector<int> regimes;         // length timeIndex + 1

  int regime() const { return regimes.back(); }
  friend bool operator==(const Node&, const Node&) = default;
};

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Conditioning events on the first shock component of the next increment.
enum class ShockEvent { up, down };  // A = {db^1 = +1}, A^c = {db^1 = -1}

struct ChildEntry {
  NodeId child;
  double weight;
};

struct ChildDistribution {
  std::vector<ChildEntry> entries;
};

/// Compensated (Neumaier) accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Exact non-recombining tree of (shock, regime) histories.
///
/// Nodes are stored breadth-first, so every layer and every sibling group is
/// a contiguous id range. The structure is immutable after construction.
class Lattice {
 public:
  static constexpr std::uint64_t kDefaultPathCap = std::uint64_t{1} << 24;

  struct Record {
    NodeId parent;
    NodeId firstChild;
    std::uint32_t childCount;
    std::uint32_t shock;  // mask of the increment leading into this node
    int time;
    int regime;
    double weight;  // conditional probability given the parent; root: initial law
  };

  Lattice(TimeGrid grid, int dim, RegimeChain chain,
          std::uint64_t pathCap = kDefaultPathCap);

  /// Terminal-path count the configuration would produce, or UINT64_MAX on
  /// overflow. Used for the size guard before anything is allocated.
  static std::uint64_t predicted_paths(int steps, int dim, const RegimeChain& chain);

  const TimeGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  const RegimeChain& chain() const { return chain_; }
  std::size_t size() const { return nodes_.size(); }

  const Record& record(NodeId id) const { return nodes_[id]; }
  int time(NodeId id) const { return nodes_[id].time; }
  int regime(NodeId id) const { return nodes_[id].regime; }
  NodeId parent(NodeId id) const { return nodes_[id].parent; }
  double weight(NodeId id) const { return nodes_[id].weight; }
  ShockVector shock(NodeId id) const { return {nodes_[id].shock, dim_}; }
  bool terminal(NodeId id) const { return nodes_[id].time == grid_.steps(); }

  /// First shock component of the increment into `id`.
  ShockEvent event(NodeId id) const {
    return (nodes_[id].shock & 1u) ? ShockEvent::up : ShockEvent::down;
  }

  /// Ids [first, last) of layer n.
  std::pair<NodeId, NodeId> layer(int n) const { return {layerStart_[n], layerStart_[n + 1]}; }
  std::pair<NodeId, NodeId> roots() const { return layer(0); }
  std::pair<NodeId, NodeId> children(NodeId id) const {
    return {nodes_[id].firstChild, nodes_[id].firstChild + nodes_[id].childCount};
  }

  /// Root of the subtree containing `id`.
  NodeId root_of(NodeId id) const;

  /// Shock at step k (0-based) along the path to `id`; requires k < time(id).
  ShockVector shock_at(NodeId id, int step) const;
  /// Regime at time k along the path to `id`; requires k <= time(id).
  int regime_at(NodeId id, int k) const;

  /// Materialise the information set of `id`.
  Node node(NodeId id) const;
  /// Inverse of node(); throws ConfigError if the history is not in the tree.
  NodeId find(const Node& node) const;

  /// Throws PreconditionError("no children") on terminal nodes.
  ChildDistribution enumerate_children(NodeId id) const;

  /// E[f | F_node] over the one-step child distribution.
  template <class F>
  double expect(NodeId id, F&& f) const {
    require_children(id);
    KahanSum acc;
    auto [first, last] = children(id);
    for (NodeId c = first; c < last; ++c) acc.add(nodes_[c].weight * f(c));
    return acc.value();
  }

  /// E[f | event v F_node]; the event selects children by the sign of the first
  /// shock component.
  template <class F>
  double expect_given(NodeId id, ShockEvent ev, F&& f) const {
    require_children(id);
    KahanSum acc;
    KahanSum mass;
    auto [first, last] = children(id);
    for (NodeId c = first; c < last; ++c) {
      if (event(c) != ev) continue;
      acc.add(nodes_[c].weight * f(c));
      mass.add(nodes_[c].weight);
    }
    return acc.value() / mass.value();
  }

 private:
  void require_children(NodeId id) const;

  TimeGrid grid_;
  int dim_;
  RegimeChain chain_;
  std::vector<Record> nodes_;
  std::vector<NodeId> layerStart_;
};

}  // namespace eqlat
