#ifndef ZIPBOOST_TREE_BUILDER_H_
#define ZIPBOOST_TREE_BUILDER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "zipboost/binning.h"
#include "zipboost/tree.h"

namespace zipboost {

struct TreeParams {
  double lambda = 0.0;             // L2 penalty on leaf values
  int max_depth = 8;
  double min_child_hessian = 1e-3;  // both children need at least this much curvature
};

struct SplitCandidate {
  int feature = -1;
  int bin = -1;
  double gain = 0.0;
  double g_left = 0.0;
  double h_left = 0.0;
  double g_right = 0.0;
  double h_right = 0.0;
  std::int64_t count_left = 0;
  std::int64_t count_right = 0;

  bool valid() const { return feature >= 0; }
};

// Reduction in the regularized second-order objective from splitting a node:
// ½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)].
double split_gain(double g_left, double h_left, double g_right, double h_right, double lambda);

// Newton step of a leaf: −G/(H+λ).
double leaf_value(double sum_gradient, double sum_hessian, double lambda);

// Grows one level-wise regression tree on per-row gradients and Hessians.
// Each node takes the histogram split with the largest positive gain; ties
// go to the lower feature index, then the lower bin. Bin sums use
// compensated accumulation so row order does not change the tree.
//
// When `row_leaf` is non-null it receives the leaf id of every training row.
// Throws std::invalid_argument on empty input or misaligned g/h.
Tree build_tree(const BinnedMatrix& binned, std::span<const double> gradients,
                std::span<const double> hessians, const TreeParams& params,
                std::vector<int>* row_leaf = nullptr);

}  // namespace zipboost

#endif  // ZIPBOOST_TREE_BUILDER_H_
