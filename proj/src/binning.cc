#include "zipboost/binning.h"

#include "zipboost/error.h"

namespace zipboost {

FeatureBins fit_feature_bins(std::span<const double> values, int max_bins) {
  if (max_bins < 2 || max_bins > kMaxBinCount) {
    throw SchemaError("max_bins must lie in [2, 256], got " + std::to_string(max_bins));
  }
  FeatureBins bins;
  if (values.empty()) return bins;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= 1) return bins;

  if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
    bins.boundaries.assign(distinct.begin(), distinct.end() - 1);
    return bins;
  }

  const std::uint64_t n = sorted.size();
  const double max_value = distinct.back();
  for (std::uint64_t k = 1; k < static_cast<std::uint64_t>(max_bins); ++k) {
    const std::uint64_t pos = (k * n + max_bins - 1) / max_bins - 1;
    const double cut = sorted[pos];
    if (cut >= max_value) break;
    if (bins.boundaries.empty() || cut > bins.boundaries.back()) bins.boundaries.push_back(cut);
  }
  return bins;
}

BinnedMatrix::BinnedMatrix(std::size_t n_rows, std::vector<std::string> names,
                           std::vector<FeatureBins> bins,
                           const std::vector<std::vector<double>>& raw_columns)
    : n_rows_(n_rows), names_(std::move(names)), bins_(std::move(bins)) {
  if (names_.size() != bins_.size() || bins_.size() != raw_columns.size()) {
    throw SchemaError("binned matrix: names, bins and columns disagree in length");
  }
  codes_.resize(bins_.size());
  for (std::size_t f = 0; f < bins_.size(); ++f) {
    if (raw_columns[f].size() != n_rows_) {
      throw SchemaError("binned matrix: ragged column '" + names_[f] + "'");
    }
    if (bins_[f].bin_count() > kMaxBinCount) {
      throw SchemaError("binned matrix: too many bins for '" + names_[f] + "'");
    }
    codes_[f].resize(n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) codes_[f][r] = bins_[f].bin_of(raw_columns[f][r]);
  }
}

}  // namespace zipboost
