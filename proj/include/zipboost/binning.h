#ifndef ZIPBOOST_BINNING_H_
#define ZIPBOOST_BINNING_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zipboost {

using BinIndex = std::uint8_t;
inline constexpr int kMaxBinCount = 256;

// Histogram bins of one feature. Bin i holds values in
// (boundaries[i-1], boundaries[i]]; a value equal to a boundary goes left.
struct FeatureBins {
  std::vector<double> boundaries;  // strictly increasing

  int bin_count() const { return static_cast<int>(boundaries.size()) + 1; }
  bool splittable() const { return !boundaries.empty(); }

  BinIndex bin_of(double value) const {
    return static_cast<BinIndex>(std::lower_bound(boundaries.begin(), boundaries.end(), value) -
                                 boundaries.begin());
  }

  bool operator==(const FeatureBins&) const = default;
};

// Equal-frequency cut points. With at most `max_bins` distinct values every
// distinct value gets its own bin; otherwise the lower k/max_bins quantiles
// are used as cut points and duplicates are merged. A constant column yields
// a single unsplittable bin.
FeatureBins fit_feature_bins(std::span<const double> values, int max_bins);

// Per-feature bin indices, stored column-major.
class BinnedMatrix {
 public:
  BinnedMatrix() = default;

  // Bins raw columns with already-fitted boundaries.
  BinnedMatrix(std::size_t n_rows, std::vector<std::string> names, std::vector<FeatureBins> bins,
               const std::vector<std::vector<double>>& raw_columns);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return bins_.size(); }

  const std::vector<std::string>& names() const { return names_; }
  const FeatureBins& bins(std::size_t feature) const { return bins_[feature]; }
  const std::vector<FeatureBins>& all_bins() const { return bins_; }

  std::span<const BinIndex> column(std::size_t feature) const { return codes_[feature]; }
  BinIndex at(std::size_t row, std::size_t feature) const { return codes_[feature][row]; }

 private:
  std::size_t n_rows_ = 0;
  std::vector<std::string> names_;
  std::vector<FeatureBins> bins_;
  std::vector<std::vector<BinIndex>> codes_;
};

}  // namespace zipboost

#endif  // ZIPBOOST_BINNING_H_
