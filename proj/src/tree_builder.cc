#include "zipboost/tree_builder.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace zipboost {
namespace {

struct HistBin {
  double g = 0.0;
  double h = 0.0;
  std::int64_t n = 0;
};

// Neumaier's variant of Kahan summation.
inline void compensated_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
  sum = t;
}

class HistogramBuilder {
 public:
  HistogramBuilder(const BinnedMatrix& binned, std::span<const double> g,
                   std::span<const double> h)
      : binned_(binned), g_(g), h_(h) {
    offsets_.resize(binned.n_features() + 1, 0);
    for (std::size_t f = 0; f < binned.n_features(); ++f) {
      offsets_[f + 1] = offsets_[f] + binned.bins(f).bin_count();
    }
  }

  std::size_t total_bins() const { return offsets_.back(); }
  std::size_t offset(std::size_t f) const { return offsets_[f]; }

  std::vector<HistBin> build(std::span<const std::size_t> rows) const {
    std::vector<HistBin> hist(total_bins());
    const long nf = static_cast<long>(binned_.n_features());
    const bool parallel = rows.size() * binned_.n_features() > (1u << 16);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long f = 0; f < nf; ++f) {
      const auto column = binned_.column(f);
      const int bins = binned_.bins(f).bin_count();
      double sg[kMaxBinCount] = {}, cg[kMaxBinCount] = {};
      double sh[kMaxBinCount] = {}, ch[kMaxBinCount] = {};
      std::int64_t cnt[kMaxBinCount] = {};
      for (std::size_t r : rows) {
        const BinIndex b = column[r];
        compensated_add(sg[b], cg[b], g_[r]);
        compensated_add(sh[b], ch[b], h_[r]);
        ++cnt[b];
      }
      HistBin* out = hist.data() + offsets_[f];
      for (int b = 0; b < bins; ++b) out[b] = {sg[b] + cg[b], sh[b] + ch[b], cnt[b]};
    }
    return hist;
  }

 private:
  const BinnedMatrix& binned_;
  std::span<const double> g_;
  std::span<const double> h_;
  std::vector<std::size_t> offsets_;
};

struct NodeWork {
  int id;
  std::size_t begin;
  std::size_t end;
  std::vector<HistBin> hist;
};

SplitCandidate best_split_for_feature(const HistBin* hist, int bins, int feature, double g_total,
                                      double h_total, std::int64_t n_total,
                                      const TreeParams& params) {
  SplitCandidate best;
  const double parent = g_total * g_total / (h_total + params.lambda);
  double gl = 0.0, hl = 0.0;
  std::int64_t nl = 0;
  for (int b = 0; b + 1 < bins; ++b) {
    gl += hist[b].g;
    hl += hist[b].h;
    nl += hist[b].n;
    if (nl == 0) continue;
    const std::int64_t nr = n_total - nl;
    if (nr <= 0) break;
    const double gr = g_total - gl;
    const double hr = h_total - hl;
    if (hl < params.min_child_hessian || hr < params.min_child_hessian) continue;
    const double gain =
        0.5 * (gl * gl / (hl + params.lambda) + gr * gr / (hr + params.lambda) - parent);
    if (gain > best.gain) {
      best = {feature, b, gain, gl, hl, gr, hr, nl, nr};
    }
  }
  return best;
}

}  // namespace

double split_gain(double g_left, double h_left, double g_right, double h_right, double lambda) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + lambda) + g_right * g_right / (h_right + lambda) -
                g * g / (h + lambda));
}

double leaf_value(double sum_gradient, double sum_hessian, double lambda) {
  const double denom = sum_hessian + lambda;
  return denom > 0.0 ? -sum_gradient / denom : 0.0;
}

Tree build_tree(const BinnedMatrix& binned, std::span<const double> gradients,
                std::span<const double> hessians, const TreeParams& params,
                std::vector<int>* row_leaf) {
  const std::size_t n = binned.n_rows();
  if (n == 0) throw std::invalid_argument("build_tree: no rows");
  if (gradients.size() != n || hessians.size() != n) {
    throw std::invalid_argument("build_tree: gradients/hessians do not match the row count");
  }
  if (!(params.lambda >= 0.0)) throw std::invalid_argument("build_tree: lambda must be >= 0");
  if (params.max_depth < 0) throw std::invalid_argument("build_tree: max_depth must be >= 0");

  const HistogramBuilder builder(binned, gradients, hessians);
  const std::size_t nf = binned.n_features();

  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<std::size_t> scratch(n);

  std::vector<TreeNode> nodes(1);
  std::vector<NodeWork> level;
  {
    NodeWork root{0, 0, n, {}};
    double g = 0.0, h = 0.0;
    if (nf > 0) {
      root.hist = builder.build(rows);
      for (int b = 0; b < binned.bins(0).bin_count(); ++b) {
        g += root.hist[b].g;
        h += root.hist[b].h;
      }
    } else {
      double cg = 0.0, ch = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        compensated_add(g, cg, gradients[r]);
        compensated_add(h, ch, hessians[r]);
      }
      g += cg;
      h += ch;
    }
    nodes[0].sum_gradient = g;
    nodes[0].sum_hessian = h;
    nodes[0].count = static_cast<std::int64_t>(n);
    nodes[0].value = leaf_value(g, h, params.lambda);
    level.push_back(std::move(root));
  }

  std::vector<SplitCandidate> per_feature(nf);
  for (int depth = 0; depth < params.max_depth && !level.empty(); ++depth) {
    std::vector<NodeWork> next;
    for (NodeWork& work : level) {
      const TreeNode parent = nodes[work.id];
      if (parent.count < 2 || work.hist.empty()) continue;

      const bool parallel = nf > 1 && work.end - work.begin > 4096;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
      for (long f = 0; f < static_cast<long>(nf); ++f) {
        per_feature[f] = best_split_for_feature(work.hist.data() + builder.offset(f),
                                                binned.bins(f).bin_count(), static_cast<int>(f),
                                                parent.sum_gradient, parent.sum_hessian,
                                                parent.count, params);
      }
      SplitCandidate best;
      for (const auto& c : per_feature) {
        if (c.valid() && c.gain > best.gain) best = c;
      }
      if (!best.valid()) continue;

      const int left_id = static_cast<int>(nodes.size());
      const int right_id = left_id + 1;
      {
        TreeNode& p = nodes[work.id];
        p.feature = best.feature;
        p.threshold_bin = best.bin;
        p.threshold = binned.bins(best.feature).boundaries[best.bin];
        p.left = left_id;
        p.right = right_id;
        p.gain = best.gain;
      }
      TreeNode left, right;
      left.sum_gradient = best.g_left;
      left.sum_hessian = best.h_left;
      left.count = best.count_left;
      left.value = leaf_value(best.g_left, best.h_left, params.lambda);
      right.sum_gradient = best.g_right;
      right.sum_hessian = best.h_right;
      right.count = best.count_right;
      right.value = leaf_value(best.g_right, best.h_right, params.lambda);
      nodes.push_back(left);
      nodes.push_back(right);

      // Stable partition of this node's rows.
      const auto column = binned.column(best.feature);
      std::size_t nl = 0, nr = 0;
      for (std::size_t i = work.begin; i < work.end; ++i) {
        const std::size_t r = rows[i];
        if (column[r] <= best.bin) {
          rows[work.begin + nl++] = r;
        } else {
          scratch[nr++] = r;
        }
      }
      std::copy(scratch.begin(), scratch.begin() + nr, rows.begin() + work.begin + nl);
      const std::size_t mid = work.begin + nl;

      NodeWork lw{left_id, work.begin, mid, {}};
      NodeWork rw{right_id, mid, work.end, {}};
      const bool last_level = depth + 1 >= params.max_depth;
      const bool need_left = !last_level && best.count_left >= 2;
      const bool need_right = !last_level && best.count_right >= 2;
      if (need_left || need_right) {
        NodeWork& small = best.count_left <= best.count_right ? lw : rw;
        NodeWork& large = best.count_left <= best.count_right ? rw : lw;
        small.hist = builder.build(
            std::span<const std::size_t>(rows.data() + small.begin, small.end - small.begin));
        large.hist = std::move(work.hist);
        for (std::size_t b = 0; b < large.hist.size(); ++b) {
          large.hist[b].g -= small.hist[b].g;
          large.hist[b].h -= small.hist[b].h;
          large.hist[b].n -= small.hist[b].n;
        }
      }
      work.hist.clear();
      next.push_back(std::move(lw));
      next.push_back(std::move(rw));
    }
    level = std::move(next);
  }

  Tree tree(std::move(nodes));
  if (row_leaf) {
    row_leaf->assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) (*row_leaf)[r] = tree.leaf_index(binned, r);
  }
  return tree;
}

}  // namespace zipboost
