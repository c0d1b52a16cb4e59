#ifndef ZIPBOOST_TREE_H_
#define ZIPBOOST_TREE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zipboost/binning.h"

namespace zipboost {

// Every node keeps its Newton value and training statistics, so internal
// nodes can be inspected (feature importance) without the training data.
struct TreeNode {
  int feature = -1;        // split feature, -1 for a leaf
  int threshold_bin = 0;   // rows with bin <= threshold_bin go left
  double threshold = 0.0;  // raw-value form of the same rule: value <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;      // -G / (H + lambda)
  double sum_gradient = 0.0;
  double sum_hessian = 0.0;
  std::int64_t count = 0;
  double gain = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class Tree {
 public:
  Tree() : nodes_(1) {}
  explicit Tree(std::vector<TreeNode> nodes);

  static Tree single_leaf(double value);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_[id]; }

  int leaf_index(const BinnedMatrix& binned, std::size_t row) const;
  double predict(const BinnedMatrix& binned, std::size_t row) const {
    return nodes_[leaf_index(binned, row)].value;
  }

  // Raw design values, one per feature index.
  double predict(std::span<const double> row) const;

  // Named raw values; throws ModelError naming the first referenced feature
  // that is absent from `row`.
  double predict(const std::map<std::string, double>& row,
                 std::span<const std::string> feature_names) const;

  int depth() const;
  std::size_t num_leaves() const;

  bool operator==(const Tree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace zipboost

#endif  // ZIPBOOST_TREE_H_
