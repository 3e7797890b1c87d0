#include "sharpmax/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sharpmax {
namespace {

constexpr std::size_t kNotALeaf = std::numeric_limits<std::size_t>::max();
constexpr double kMeasureTolerance = 1e-12;

void check_fractions(std::span<const double> fractions) {
  if (fractions.size() < 2) {
    throw std::invalid_argument("every split needs at least two children");
  }
  double total = 0.0;
  for (const double x : fractions) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      std::ostringstream msg;
      msg << "child fraction must be positive, got " << x;
      throw std::invalid_argument(msg.str());
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance) {
    std::ostringstream msg;
    msg << "child fractions sum to " << total << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::size_t Tree::leaf_position(NodeId id) const {
  const std::size_t pos = leaf_position_.at(id);
  if (pos == kNotALeaf) {
    throw std::invalid_argument("node is not a leaf");
  }
  return pos;
}

double Tree::max_leaf_measure() const noexcept {
  double m = 0.0;
  for (const NodeId id : leaves_) m = std::max(m, nodes_[id].measure);
  return m;
}

bool Tree::is_ancestor(NodeId ancestor, NodeId node) const {
  std::optional<NodeId> cur = node;
  while (cur) {
    if (*cur == ancestor) return true;
    if (*cur < ancestor) return false;
    cur = nodes_.at(*cur).parent;
  }
  return false;
}

std::vector<std::size_t> Tree::leaves_under(NodeId id) const {
  std::vector<std::size_t> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    const TreeNode& n = nodes_.at(cur);
    if (n.is_leaf()) {
      out.push_back(leaf_position_[cur]);
    } else {
      stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Tree::Builder::Builder() {
  nodes_.push_back(TreeNode{1.0, std::nullopt, {}, 0});
}

Tree::Builder::Builder(const Tree& base) : nodes_(base.nodes_) {}

std::vector<NodeId> Tree::Builder::add_children(
    NodeId parent, std::span<const double> fractions) {
  if (parent >= nodes_.size()) {
    throw std::out_of_range("add_children: unknown parent");
  }
  if (!nodes_[parent].is_leaf()) {
    throw std::invalid_argument("add_children: node already has children");
  }
  check_fractions(fractions);
  const double m = nodes_[parent].measure;
  const int d = nodes_[parent].depth + 1;
  std::vector<NodeId> ids;
  ids.reserve(fractions.size());
  for (const double x : fractions) {
    ids.push_back(nodes_.size());
    nodes_.push_back(TreeNode{m * x, parent, {}, d});
  }
  nodes_[parent].children = ids;
  return ids;
}

std::vector<NodeId> Tree::Builder::add_children_with_measures(
    NodeId parent, std::span<const double> measures) {
  if (parent >= nodes_.size()) {
    throw std::out_of_range("add_children: unknown parent");
  }
  const double m = nodes_[parent].measure;
  std::vector<double> fractions;
  fractions.reserve(measures.size());
  for (const double x : measures) fractions.push_back(x / m);
  const auto ids = add_children(parent, fractions);
  for (std::size_t i = 0; i < ids.size(); ++i) nodes_[ids[i]].measure = measures[i];
  return ids;
}

Tree Tree::Builder::build(double max_leaf_measure) && {
  Tree t;
  t.nodes_ = std::move(nodes_);
  t.leaf_position_.assign(t.nodes_.size(), kNotALeaf);
  for (NodeId id = 0; id < t.nodes_.size(); ++id) {
    const TreeNode& n = t.nodes_[id];
    if (!(n.measure > 0.0)) {
      throw std::invalid_argument("tree node with non-positive measure");
    }
    t.depth_ = std::max(t.depth_, n.depth);
    if (n.is_leaf()) {
      if (n.measure > max_leaf_measure) {
        std::ostringstream msg;
        msg << "leaf measure " << n.measure << " exceeds bound "
            << max_leaf_measure;
        throw std::invalid_argument(msg.str());
      }
      t.leaf_position_[id] = t.leaves_.size();
      t.leaves_.push_back(id);
      continue;
    }
    double sum = 0.0;
    for (const NodeId c : n.children) sum += t.nodes_[c].measure;
    if (std::abs(sum - n.measure) > kMeasureTolerance * n.measure) {
      throw std::invalid_argument("children do not partition their parent");
    }
  }
  return t;
}

BranchingSpec homogeneous_spec(std::vector<double> fractions, int depth) {
  return BranchingSpec(static_cast<std::size_t>(std::max(depth, 0)),
                       LevelSpec{std::move(fractions), {}});
}

BranchingSpec chain_spec(double r, int depth) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("chain ratio must lie in (0, 1)");
  }
  return BranchingSpec(static_cast<std::size_t>(std::max(depth, 0)),
                       LevelSpec{{1.0 - r, r}, {false, true}});
}

Tree build_tree(const BranchingSpec& spec, double max_leaf_measure) {
  Tree::Builder builder;
  std::vector<NodeId> frontier{Tree::root()};
  for (const LevelSpec& level : spec) {
    if (!level.expand.empty() &&
        level.expand.size() != level.fractions.size()) {
      throw std::invalid_argument("expand mask does not match fractions");
    }
    std::vector<NodeId> next;
    for (const NodeId id : frontier) {
      const auto children = builder.add_children(id, level.fractions);
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (level.expand.empty() || level.expand[i]) {
          next.push_back(children[i]);
        }
      }
    }
    frontier = std::move(next);
  }
  return std::move(builder).build(max_leaf_measure);
}

TreeFunction::TreeFunction(std::shared_ptr<const Tree> tree,
                           std::vector<double> values)
    : tree_(std::move(tree)), values_(std::move(values)) {
  if (!tree_) throw std::invalid_argument("TreeFunction needs a tree");
  if (values_.size() != tree_->leaf_count()) {
    throw std::invalid_argument("one value per leaf is required");
  }
  for (const double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("tree function values must be finite and >= 0");
    }
  }
}

double TreeFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s += values_[i] * tree_->leaf_measure(i);
  }
  return s;
}

double TreeFunction::moment(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s += std::pow(values_[i], p) * tree_->leaf_measure(i);
  }
  return s;
}

std::vector<double> node_averages(const TreeFunction& phi) {
  const Tree& tree = phi.tree();
  const auto nodes = tree.nodes();
  std::vector<double> mass(nodes.size(), 0.0);
  const auto leaves = tree.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    mass[leaves[i]] = phi.value(i) * nodes[leaves[i]].measure;
  }
  for (NodeId id = nodes.size(); id-- > 1;) {
    mass[*nodes[id].parent] += mass[id];
  }
  for (NodeId id = 0; id < nodes.size(); ++id) {
    mass[id] = nodes[id].is_leaf() ? phi.value(tree.leaf_position(id))
                                   : mass[id] / nodes[id].measure;
  }
  return mass;
}

TreeFunction maximal_operator(const TreeFunction& phi) {
  const Tree& tree = phi.tree();
  const auto nodes = tree.nodes();
  std::vector<double> best = node_averages(phi);
  for (NodeId id = 1; id < nodes.size(); ++id) {
    best[id] = std::max(best[id], best[*nodes[id].parent]);
  }
  std::vector<double> out;
  out.reserve(tree.leaf_count());
  for (const NodeId leaf : tree.leaves()) out.push_back(best[leaf]);
  return TreeFunction(phi.tree_ptr(), std::move(out));
}

MeasureSplit split_measure(const Tree& tree, NodeId id, double target,
                           double tolerance) {
  const double total = tree.node(id).measure;
  if (!(target > 0.0 && target <= total)) {
    std::ostringstream msg;
    msg << "split_measure: target " << target << " outside (0, " << total
        << "]";
    throw std::invalid_argument(msg.str());
  }
  MeasureSplit out;
  if (target == total) {
    out.nodes.push_back(id);
    out.achieved = total;
    return out;
  }
  double remaining = target;
  NodeId cur = id;
  while (remaining > 0.0 && !tree.node(cur).is_leaf()) {
    std::optional<NodeId> descend;
    for (const NodeId c : tree.node(cur).children) {
      const double m = tree.node(c).measure;
      if (m <= remaining) {
        out.nodes.push_back(c);
        out.achieved += m;
        remaining -= m;
      } else {
        descend = c;
        break;
      }
    }
    if (!descend) break;
    cur = *descend;
  }
  if (std::abs(target - out.achieved) > tolerance) {
    std::ostringstream msg;
    msg << "split_measure: reached " << out.achieved << " of target " << target
        << ", tolerance " << tolerance << " needs a deeper tree";
    throw std::runtime_error(msg.str());
  }
  return out;
}

}  // namespace sharpmax
