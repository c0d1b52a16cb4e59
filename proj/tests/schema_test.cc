#include "zipboost/schema.h"

#include <gtest/gtest.h>

#include "zipboost/error.h"

namespace zipboost {
namespace {

TEST(Schema, ParsesKeysAndKeepsFeatureOrder) {
  const Schema s = parse_schema(
      "# claims\n"
      "response = ClaimNb\n"
      "exposure = Exposure\n"
      "numeric = VehPower, DrivAge\n"
      "categorical = Area\n"
      "feature = Density:numeric\n"
      "max_bins = 64\n"
      "ts_smoothing = 2.5\n"
      "seed = 42\n");
  EXPECT_EQ(s.response_column, "ClaimNb");
  ASSERT_TRUE(s.exposure_column.has_value());
  EXPECT_EQ(*s.exposure_column, "Exposure");
  ASSERT_EQ(s.features.size(), 4u);
  EXPECT_EQ(s.features[0].name, "VehPower");
  EXPECT_EQ(s.features[2].name, "Area");
  EXPECT_EQ(s.features[2].kind, FeatureKind::kCategorical);
  EXPECT_EQ(s.features[3].name, "Density");
  EXPECT_EQ(s.max_bins, 64);
  EXPECT_EQ(s.ts_smoothing, 2.5);
  EXPECT_EQ(s.seed, 42u);
}

TEST(Schema, ExposureNoneMeansUnitExposure) {
  const Schema s = parse_schema("response = y\nexposure = none\nnumeric = x\n");
  EXPECT_FALSE(s.exposure_column.has_value());
}

TEST(Schema, FormatRoundTrips) {
  const Schema s = parse_schema("response = y\nexposure = w\nnumeric = a,b\ncategorical = c\nseed = 9\n");
  EXPECT_EQ(parse_schema(format_schema(s)), s);
}

TEST(Schema, RejectsInvalidDefinitions) {
  EXPECT_THROW(parse_schema("numeric = x\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nnumeric = x, x\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nnumeric = y\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nexposure = w\nnumeric = w\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nmax_bins = 1\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nmax_bins = 257\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nts_smoothing = -1\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\ncolour = red\n"), SchemaError);
  EXPECT_THROW(parse_schema("response = y\nfeature = z:ordinal\n"), SchemaError);
  EXPECT_THROW(parse_schema("response y\n"), SchemaError);
}

TEST(Schema, FindFeature) {
  const Schema s = parse_schema("response = y\nnumeric = a\ncategorical = b\n");
  ASSERT_NE(s.find_feature("b"), nullptr);
  EXPECT_EQ(s.find_feature("b")->kind, FeatureKind::kCategorical);
  EXPECT_EQ(s.find_feature("zzz"), nullptr);
}

}  // namespace
}  // namespace zipboost
