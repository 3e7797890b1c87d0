#include "sharpmax/serialize.hpp"

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sharpmax {
namespace {

// Rebuilds the tree in document order. Returns the tree and, for each
// document node, the id it received.
std::pair<Tree, std::vector<NodeId>> rebuild(const nlohmann::json& doc) {
  const auto& nodes = doc.at("nodes");
  if (!nodes.is_array() || nodes.empty()) {
    throw std::invalid_argument("tree document needs a non-empty node array");
  }
  constexpr NodeId kUnset = static_cast<NodeId>(-1);
  std::vector<NodeId> ids(nodes.size(), kUnset);
  ids[0] = Tree::root();
  Tree::Builder builder;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (ids[i] == kUnset) {
      throw std::invalid_argument("tree document node is unreachable or out of order");
    }
    const auto children = nodes[i].at("children").get<std::vector<std::size_t>>();
    if (children.empty()) continue;
    std::vector<double> measures;
    for (const std::size_t c : children) {
      if (c <= i || c >= nodes.size() || ids[c] != kUnset) {
        throw std::invalid_argument("tree document has an invalid child index");
      }
      measures.push_back(nodes[c].at("measure").get<double>());
    }
    const auto assigned = builder.add_children_with_measures(ids[i], measures);
    for (std::size_t j = 0; j < children.size(); ++j) ids[children[j]] = assigned[j];
  }
  return {std::move(builder).build(), std::move(ids)};
}

}  // namespace

nlohmann::json tree_to_json(const Tree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : tree.nodes()) {
    nodes.push_back({{"measure", n.measure}, {"children", n.children}});
  }
  return {{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const nlohmann::json& doc) { return rebuild(doc).first; }

nlohmann::json function_to_json(const TreeFunction& phi) {
  nlohmann::json doc = tree_to_json(phi.tree());
  const Tree& tree = phi.tree();
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
    doc["nodes"][tree.leaves()[i]]["value"] = phi.value(i);
  }
  return doc;
}

TreeFunction function_from_json(const nlohmann::json& doc) {
  auto [tree, ids] = rebuild(doc);
  auto shared = std::make_shared<const Tree>(std::move(tree));
  std::vector<double> values(shared->leaf_count(), 0.0);
  const auto& nodes = doc.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].at("children").empty()) continue;
    values[shared->leaf_position(ids[i])] = nodes[i].at("value").get<double>();
  }
  return TreeFunction(std::move(shared), std::move(values));
}

}  // namespace sharpmax
