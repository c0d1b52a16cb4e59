#ifndef ZIPBOOST_FEATURES_H_
#define ZIPBOOST_FEATURES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zipboost/binning.h"
#include "zipboost/dataset.h"
#include "zipboost/schema.h"
#include "zipboost/target_stat.h"

namespace zipboost {

enum class DerivedKind { kNumeric, kIndicator, kTargetStat };

std::string_view to_string(DerivedKind kind);
DerivedKind parse_derived_kind(std::string_view text);

// One column of the numeric design the trees see.
//   kNumeric    raw numeric feature
//   kIndicator  1.0 when the categorical source equals `level` (binary categoricals)
//   kTargetStat ordered target statistic of a categorical with > 2 levels
struct DerivedFeature {
  std::string name;
  std::string source;
  DerivedKind kind = DerivedKind::kNumeric;
  std::string level;
  TargetStatEncoder encoder;
  FeatureBins bins;

  bool operator==(const DerivedFeature&) const = default;
};

// Turns a Dataset into a BinnedMatrix. Fitted once on training data and
// stored with the model so prediction reproduces the training encoding.
class FeatureTransform {
 public:
  struct Fitted;

  FeatureTransform() = default;
  FeatureTransform(Schema schema, std::vector<DerivedFeature> features)
      : schema_(std::move(schema)), features_(std::move(features)) {}

  static Fitted fit(const Dataset& data, const Schema& schema);

  // Throws ModelError listing missing and unexpected columns when `data`
  // does not carry exactly the schema's features.
  void check_compatible(const Dataset& data) const;

  // Design values for prediction; target statistics use full-data stats.
  std::vector<std::vector<double>> raw_columns(const Dataset& data) const;
  BinnedMatrix transform(const Dataset& data) const;

  const Schema& schema() const { return schema_; }
  const std::vector<DerivedFeature>& features() const { return features_; }
  std::vector<std::string> names() const;

  bool operator==(const FeatureTransform&) const = default;

 private:
  Schema schema_;
  std::vector<DerivedFeature> features_;
};

struct FeatureTransform::Fitted {
  FeatureTransform transform;
  BinnedMatrix binned;
};

BinnedMatrix fit_bins(const Dataset& data, const Schema& schema);

// Ordered target-statistic encoding of one categorical column.
TargetStatEncoder::Fitted encode_categorical(const Dataset& data, std::string_view feature,
                                             double smoothing, std::uint64_t seed);

}  // namespace zipboost

#endif  // ZIPBOOST_FEATURES_H_
