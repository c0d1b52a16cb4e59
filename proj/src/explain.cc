#include "zipboost/explain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zipboost/log.h"

namespace zipboost {

namespace {

std::size_t pair_index(std::size_t a, std::size_t b, std::size_t n) {
  // Row-major position of (a, b), a < b, in the strict upper triangle.
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

struct LeafPath {
  double value;
  std::vector<int> features;  // sorted, unique
};

void collect_leaves(const Tree& tree, int id, std::vector<int>& path, std::vector<LeafPath>& out) {
  const TreeNode& node = tree.node(id);
  if (node.is_leaf()) {
    std::vector<int> feats = path;
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    out.push_back({node.value, std::move(feats)});
    return;
  }
  path.push_back(node.feature);
  collect_leaves(tree, node.left, path, out);
  collect_leaves(tree, node.right, path, out);
  path.pop_back();
}

}  // namespace

double InteractionTable::strength(std::size_t a, std::size_t b) const {
  if (a == b) return 0.0;
  if (a > b) std::swap(a, b);
  if (b >= features.size()) throw std::out_of_range("interaction feature index");
  return pairs[pair_index(a, b, features.size())].strength;
}

ImportanceTable feature_importance(std::span<const Tree> trees,
                                   const std::vector<std::string>& features) {
  ImportanceTable table;
  table.features = features;
  table.raw.assign(features.size(), 0.0);
  for (const Tree& tree : trees) {
    for (const TreeNode& node : tree.nodes()) {
      if (node.is_leaf()) continue;
      const TreeNode& l = tree.node(node.left);
      const TreeNode& r = tree.node(node.right);
      const double c1 = static_cast<double>(l.count);
      const double c2 = static_cast<double>(r.count);
      if (c1 + c2 <= 0) continue;
      const double m = (l.value * c1 + r.value * c2) / (c1 + c2);
      table.raw.at(node.feature) += (l.value - m) * (l.value - m) * c1 +
                                    (r.value - m) * (r.value - m) * c2;
    }
  }
  const double total = std::accumulate(table.raw.begin(), table.raw.end(), 0.0);
  table.importance.assign(features.size(), 0.0);
  if (total > 0) {
    for (std::size_t f = 0; f < features.size(); ++f) {
      table.importance[f] = table.raw[f] / total * 100.0;
    }
  } else {
    warn("no split changes the fitted values; feature importances are all zero");
  }
  return table;
}

InteractionTable interaction_strength(std::span<const Tree> trees,
                                      const std::vector<std::string>& features, double scale) {
  const std::size_t n = features.size();
  InteractionTable table;
  table.features = features;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) table.pairs.push_back({a, b, 0.0});
  }

  std::vector<LeafPath> leaves;
  std::vector<int> path;
  for (const Tree& tree : trees) {
    leaves.clear();
    collect_leaves(tree, 0, path, leaves);

    std::vector<int> used;
    for (const TreeNode& node : tree.nodes()) {
      if (!node.is_leaf()) used.push_back(node.feature);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());

    for (std::size_t i = 0; i < used.size(); ++i) {
      for (std::size_t j = i + 1; j < used.size(); ++j) {
        const int a = used[i], b = used[j];
        double combined = 0.0, separate = 0.0;
        for (const LeafPath& leaf : leaves) {
          const bool has_a = std::binary_search(leaf.features.begin(), leaf.features.end(), a);
          const bool has_b = std::binary_search(leaf.features.begin(), leaf.features.end(), b);
          if (has_a && has_b) {
            combined += scale * leaf.value;
          } else if (has_a || has_b) {
            separate += scale * leaf.value;
          }
        }
        table.pairs[pair_index(a, b, n)].strength += std::abs(combined - separate);
      }
    }
  }
  return table;
}

Explanation explain(const Model& model) {
  const auto names = model.transform.names();
  Explanation out;
  out.importance_po = feature_importance(model.trees_po, names);
  out.interaction_po = interaction_strength(model.trees_po, names, model.learning_rate());
  if (model.loss.kind == LossKind::kZipb2) {
    out.importance_logit = feature_importance(model.trees_logit, names);
    out.interaction_logit = interaction_strength(model.trees_logit, names, model.learning_rate());
  }
  return out;
}

std::vector<std::size_t> top_k(const ImportanceTable& table, std::size_t k) {
  std::vector<std::size_t> idx(table.importance.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return table.importance[a] > table.importance[b];
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

std::vector<std::size_t> top_k(const InteractionTable& table, std::size_t k) {
  std::vector<std::size_t> idx(table.pairs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return table.pairs[a].strength > table.pairs[b].strength;
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

}  // namespace zipboost
