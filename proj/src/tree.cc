#include "zipboost/tree.h"

#include <algorithm>
#include <utility>

#include "zipboost/error.h"

namespace zipboost {

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ModelError("tree: no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.is_leaf()) continue;
    const int size = static_cast<int>(nodes_.size());
    if (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) || n.left >= size ||
        n.right >= size) {
      throw ModelError("tree: node " + std::to_string(i) + " has invalid children");
    }
  }
}

Tree Tree::single_leaf(double value) {
  TreeNode leaf;
  leaf.value = value;
  return Tree({leaf});
}

int Tree::leaf_index(const BinnedMatrix& binned, std::size_t row) const {
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& n = nodes_[id];
    id = binned.at(row, n.feature) <= n.threshold_bin ? n.left : n.right;
  }
  return id;
}

double Tree::predict(std::span<const double> row) const {
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& n = nodes_[id];
    if (static_cast<std::size_t>(n.feature) >= row.size()) {
      throw ModelError("tree: row has no feature " + std::to_string(n.feature));
    }
    id = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[id].value;
}

double Tree::predict(const std::map<std::string, double>& row,
                     std::span<const std::string> feature_names) const {
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& n = nodes_[id];
    const std::string name = static_cast<std::size_t>(n.feature) < feature_names.size()
                                 ? feature_names[n.feature]
                                 : "#" + std::to_string(n.feature);
    auto it = row.find(name);
    if (it == row.end()) throw ModelError("tree: row is missing feature '" + name + "'");
    id = it->second <= n.threshold ? n.left : n.right;
  }
  return nodes_[id].value;
}

int Tree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    best = std::max(best, d[i]);
    if (!n.is_leaf()) {
      d[n.left] = d[i] + 1;
      d[n.right] = d[i] + 1;
    }
  }
  return best;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace zipboost
