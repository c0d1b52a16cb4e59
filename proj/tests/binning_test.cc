#include "zipboost/binning.h"

#include <gtest/gtest.h>

#include "zipboost/error.h"
#include "zipboost/random.h"

namespace zipboost {
namespace {

TEST(Binning, FewDistinctValuesGetOwnBins) {
  const std::vector<double> v = {3, 1, 2, 2, 3, 1, 5};
  const FeatureBins b = fit_feature_bins(v, 255);
  EXPECT_EQ(b.boundaries, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(b.bin_count(), 4);
  EXPECT_EQ(b.bin_of(1.0), 0);
  EXPECT_EQ(b.bin_of(1.5), 1);
  EXPECT_EQ(b.bin_of(2.0), 1);
  EXPECT_EQ(b.bin_of(5.0), 3);
  EXPECT_EQ(b.bin_of(100.0), 3);
  EXPECT_EQ(b.bin_of(-100.0), 0);
}

TEST(Binning, ConstantColumnIsUnsplittable) {
  const std::vector<double> v(10, 4.0);
  const FeatureBins b = fit_feature_bins(v, 255);
  EXPECT_FALSE(b.splittable());
  EXPECT_EQ(b.bin_count(), 1);
}

TEST(Binning, QuantileCutsForManyValues) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const FeatureBins b = fit_feature_bins(v, 4);
  // Cuts at sorted positions ceil(k*100/4)-1 for k = 1..3.
  EXPECT_EQ(b.boundaries, (std::vector<double>{25, 50, 75}));
}

TEST(Binning, RespectsMaxBinsAndMonotone) {
  Rng rng(5);
  std::vector<double> v(5000);
  for (auto& x : v) x = rng.normal();
  for (int max_bins : {2, 16, 255, 256}) {
    const FeatureBins b = fit_feature_bins(v, max_bins);
    EXPECT_LE(b.bin_count(), max_bins);
    EXPECT_TRUE(std::is_sorted(b.boundaries.begin(), b.boundaries.end()));
    EXPECT_EQ(std::adjacent_find(b.boundaries.begin(), b.boundaries.end()), b.boundaries.end());
  }
  EXPECT_THROW(fit_feature_bins(v, 1), SchemaError);
  EXPECT_THROW(fit_feature_bins(v, 257), SchemaError);
}

TEST(Binning, HeavyTiesAreMerged) {
  std::vector<double> v(1000, 0.0);
  for (int i = 0; i < 10; ++i) v[i] = i + 1;
  const FeatureBins b = fit_feature_bins(v, 4);
  EXPECT_GE(b.bin_count(), 2);
  EXPECT_EQ(b.boundaries.front(), 0.0);
}

TEST(BinnedMatrix, ColumnMajorCodes) {
  std::vector<FeatureBins> bins = {fit_feature_bins(std::vector<double>{1, 2, 3}, 255),
                                   fit_feature_bins(std::vector<double>{0, 0, 1}, 255)};
  const std::vector<std::vector<double>> raw = {{3, 1, 2}, {0, 1, 0}};
  const BinnedMatrix m(3, {"a", "b"}, bins, raw);
  EXPECT_EQ(m.n_rows(), 3u);
  EXPECT_EQ(m.n_features(), 2u);
  EXPECT_EQ(m.at(0, 0), 2);
  EXPECT_EQ(m.at(1, 0), 0);
  EXPECT_EQ(m.at(1, 1), 1);
  EXPECT_EQ(m.column(1).size(), 3u);
}

TEST(BinnedMatrix, ZeroFeaturesKeepsRowCount) {
  const BinnedMatrix m(7, {}, {}, {});
  EXPECT_EQ(m.n_rows(), 7u);
  EXPECT_EQ(m.n_features(), 0u);
}

}  // namespace
}  // namespace zipboost
