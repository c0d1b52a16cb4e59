#ifndef ZIPBOOST_SCHEMA_H_
#define ZIPBOOST_SCHEMA_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zipboost {

enum class FeatureKind { kNumeric, kCategorical };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;

  bool operator==(const FeatureColumn&) const = default;
};

// Declares how a claim table is read: which column holds the claim count,
// which the exposure, and which are features (in order).
struct Schema {
  std::string response_column;
  std::optional<std::string> exposure_column;
  std::vector<FeatureColumn> features;
  int max_bins = 255;
  double ts_smoothing = 1.0;
  std::uint64_t seed = 0;

  // Throws SchemaError on duplicate names, response/exposure listed as a
  // feature, or max_bins outside [2, 256].
  void validate() const;

  const FeatureColumn* find_feature(std::string_view name) const;

  bool operator==(const Schema&) const = default;
};

// Parses the key/value schema format:
//
//   # comment
//   response     = ClaimNb
//   exposure     = Exposure
//   numeric      = VehPower, VehAge, DrivAge
//   categorical  = Area, VehBrand
//   feature      = Density:numeric
//   max_bins     = 255
//   ts_smoothing = 1.0
//   seed         = 42
//
// Feature order is the order of appearance across numeric/categorical/feature
// lines. The result is validated.
Schema parse_schema(std::string_view text);
Schema load_schema(const std::filesystem::path& path);

// Canonical text form; parse_schema(format_schema(s)) == s.
std::string format_schema(const Schema& schema);

}  // namespace zipboost

#endif  // ZIPBOOST_SCHEMA_H_
