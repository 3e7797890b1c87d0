#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

// Finite trees of measurable sets on a probability space. Every internal node
// is partitioned by at least two children and the root has measure one. Leaves
// are the atoms on which tree functions are constant.
//
// Nodes live in one flat array; a parent always has a smaller index than its
// children, so bottom-up and top-down passes are plain loops.

namespace sharpmax {

using NodeId = std::size_t;

struct TreeNode {
  double measure = 0.0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  int depth = 0;

  bool is_leaf() const noexcept { return children.empty(); }
};

class Tree {
 public:
  class Builder;

  static constexpr NodeId root() noexcept { return 0; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }

  /// Leaf node ids in index order. Leaf position i in this list is the index
  /// used by TreeFunction values.
  std::span<const NodeId> leaves() const noexcept { return leaves_; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  std::size_t leaf_position(NodeId id) const;
  double leaf_measure(std::size_t position) const {
    return nodes_[leaves_[position]].measure;
  }

  int depth() const noexcept { return depth_; }
  double max_leaf_measure() const noexcept;

  /// True when `ancestor` lies on the path from `node` to the root (a node is
  /// its own ancestor).
  bool is_ancestor(NodeId ancestor, NodeId node) const;

  /// Leaf positions below `id`, in index order.
  std::vector<std::size_t> leaves_under(NodeId id) const;

 private:
  Tree() = default;

  std::vector<TreeNode> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<std::size_t> leaf_position_;  // npos for internal nodes
  int depth_ = 0;
};

class Tree::Builder {
 public:
  /// Starts from the single root of measure one.
  Builder();

  /// Starts from a copy of `base`, so that existing leaves can be refined.
  explicit Builder(const Tree& base);

  /// Splits leaf `parent` into children with the given measure fractions.
  /// Fractions must be positive, at least two, and sum to one.
  std::vector<NodeId> add_children(NodeId parent,
                                   std::span<const double> fractions);

  /// Same as add_children but with absolute child measures, which must add
  /// up to the parent's measure to relative 1e-12.
  std::vector<NodeId> add_children_with_measures(NodeId parent,
                                                 std::span<const double> measures);

  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Validates the tree invariants and freezes the result. Throws
  /// std::invalid_argument if a leaf is heavier than `max_leaf_measure`.
  Tree build(double max_leaf_measure = 1.0) &&;

 private:
  std::vector<TreeNode> nodes_;
};

/// Child fractions of one level. `expand[i]` says whether child i is refined
/// at the next level; an empty mask refines every child.
struct LevelSpec {
  std::vector<double> fractions;
  std::vector<bool> expand;
};

using BranchingSpec = std::vector<LevelSpec>;

BranchingSpec homogeneous_spec(std::vector<double> fractions, int depth);

/// Children (1 - r, r) at every level; only the r-child is refined, giving the
/// nested chain X = I_0 > I_1 > ... with mu(I_m) = r^m.
BranchingSpec chain_spec(double r, int depth);

Tree build_tree(const BranchingSpec& spec, double max_leaf_measure = 1.0);

/// Nonnegative function constant on the leaves of a tree.
class TreeFunction {
 public:
  TreeFunction(std::shared_ptr<const Tree> tree, std::vector<double> values);

  const Tree& tree() const noexcept { return *tree_; }
  const std::shared_ptr<const Tree>& tree_ptr() const noexcept { return tree_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t leaf_position) const {
    return values_.at(leaf_position);
  }

  /// Integral of phi over X.
  double integral() const;
  /// Integral of phi^p over X.
  double moment(double p) const;

 private:
  std::shared_ptr<const Tree> tree_;
  std::vector<double> values_;
};

/// Average of phi over every node, indexed by NodeId.
std::vector<double> node_averages(const TreeFunction& phi);

/// The tree maximal function: at each leaf, the largest average of phi over
/// the tree elements containing it. One bottom-up and one top-down pass.
TreeFunction maximal_operator(const TreeFunction& phi);

struct MeasureSplit {
  std::vector<NodeId> nodes;
  double achieved = 0.0;
};

/// Pairwise disjoint descendants of `id` whose measures add up to `target`.
/// Children are taken greedily in order, descending into the first child that
/// is heavier than the remaining target; on a dyadic tree this is the binary
/// expansion of target / mu(id). Throws std::runtime_error if the remaining
/// target exceeds `tolerance` once a leaf is reached.
MeasureSplit split_measure(const Tree& tree, NodeId id, double target,
                           double tolerance);

}  // namespace sharpmax
