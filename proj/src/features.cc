#include "zipboost/features.h"

#include <algorithm>

#include "zipboost/error.h"
#include "zipboost/log.h"
#include "zipboost/random.h"

namespace zipboost {

std::string_view to_string(DerivedKind kind) {
  switch (kind) {
    case DerivedKind::kNumeric: return "numeric";
    case DerivedKind::kIndicator: return "indicator";
    case DerivedKind::kTargetStat: return "target_stat";
  }
  return "numeric";
}

DerivedKind parse_derived_kind(std::string_view text) {
  if (text == "numeric") return DerivedKind::kNumeric;
  if (text == "indicator") return DerivedKind::kIndicator;
  if (text == "target_stat") return DerivedKind::kTargetStat;
  throw ModelError("unknown derived feature kind '" + std::string(text) + "'");
}

TargetStatEncoder::Fitted encode_categorical(const Dataset& data, std::string_view feature,
                                             double smoothing, std::uint64_t seed) {
  return TargetStatEncoder::fit(data.categorical(feature), data.y(), data.w(), smoothing, seed);
}

FeatureTransform::Fitted FeatureTransform::fit(const Dataset& data, const Schema& schema) {
  schema.validate();
  std::vector<DerivedFeature> features;
  std::vector<std::vector<double>> columns;
  for (const auto& spec : schema.features) {
    const FeatureData* col = data.find(spec.name);
    if (!col) throw SchemaError("dataset: missing column '" + spec.name + "'");
    DerivedFeature d;
    d.source = spec.name;
    if (spec.kind == FeatureKind::kNumeric) {
      d.name = spec.name;
      d.kind = DerivedKind::kNumeric;
      columns.push_back(data.numeric(spec.name).values);
    } else {
      const CategoricalColumn& cat = data.categorical(spec.name);
      if (cat.levels.size() <= 2) {
        std::vector<std::string> sorted = cat.levels;
        std::sort(sorted.begin(), sorted.end());
        d.kind = DerivedKind::kIndicator;
        d.level = sorted.empty() ? std::string() : sorted.back();
        d.name = spec.name + "=" + d.level;
        std::vector<double> values(data.n_rows());
        for (std::size_t r = 0; r < values.size(); ++r) {
          values[r] = cat.level_of(r) == d.level ? 1.0 : 0.0;
        }
        columns.push_back(std::move(values));
      } else {
        d.name = spec.name;
        d.kind = DerivedKind::kTargetStat;
        auto fitted = TargetStatEncoder::fit(cat, data.y(), data.w(), schema.ts_smoothing,
                                             derive_seed(schema.seed, "ts:" + spec.name));
        d.encoder = std::move(fitted.encoder);
        columns.push_back(std::move(fitted.encoded));
      }
    }
    d.bins = fit_feature_bins(columns.back(), schema.max_bins);
    features.push_back(std::move(d));
  }

  Fitted out;
  out.transform = FeatureTransform(schema, std::move(features));
  std::vector<FeatureBins> bins;
  for (const auto& d : out.transform.features_) bins.push_back(d.bins);
  out.binned = BinnedMatrix(data.n_rows(), out.transform.names(), std::move(bins), columns);
  return out;
}

void FeatureTransform::check_compatible(const Dataset& data) const {
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  for (const auto& f : schema_.features) {
    const FeatureData* col = data.find(f.name);
    if (!col) {
      missing.push_back(f.name);
    } else if ((f.kind == FeatureKind::kNumeric) != std::holds_alternative<NumericColumn>(*col)) {
      missing.push_back(f.name + " (as " + std::string(to_string(f.kind)) + ")");
    }
  }
  for (const auto& name : data.feature_names()) {
    if (!schema_.find_feature(name)) extra.push_back(name);
  }
  if (missing.empty() && extra.empty()) return;
  std::string msg = "data does not match the model schema;";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  if (!missing.empty()) msg += " missing columns: " + join(missing) + ";";
  if (!extra.empty()) msg += " unexpected columns: " + join(extra) + ";";
  msg.pop_back();
  throw ModelError(msg);
}

std::vector<std::vector<double>> FeatureTransform::raw_columns(const Dataset& data) const {
  check_compatible(data);
  std::vector<std::vector<double>> columns;
  columns.reserve(features_.size());
  for (const auto& d : features_) {
    if (d.kind == DerivedKind::kNumeric) {
      columns.push_back(data.numeric(d.source).values);
      continue;
    }
    const CategoricalColumn& cat = data.categorical(d.source);
    std::vector<double> per_level(cat.levels.size());
    if (d.kind == DerivedKind::kIndicator) {
      for (std::size_t c = 0; c < cat.levels.size(); ++c) {
        per_level[c] = cat.levels[c] == d.level ? 1.0 : 0.0;
      }
    } else {
      std::size_t unseen = 0;
      for (std::size_t c = 0; c < cat.levels.size(); ++c) {
        per_level[c] = d.encoder.encode(cat.levels[c]);
        if (!d.encoder.stats().count(cat.levels[c])) ++unseen;
      }
      if (unseen > 0) {
        warn("feature '" + d.source + "': " + std::to_string(unseen) +
             " unseen categories encoded with the prior");
      }
    }
    std::vector<double> values(data.n_rows());
    for (std::size_t r = 0; r < values.size(); ++r) values[r] = per_level[cat.codes[r]];
    columns.push_back(std::move(values));
  }
  return columns;
}

BinnedMatrix FeatureTransform::transform(const Dataset& data) const {
  std::vector<FeatureBins> bins;
  for (const auto& d : features_) bins.push_back(d.bins);
  return BinnedMatrix(data.n_rows(), names(), std::move(bins), raw_columns(data));
}

std::vector<std::string> FeatureTransform::names() const {
  std::vector<std::string> out;
  for (const auto& d : features_) out.push_back(d.name);
  return out;
}

BinnedMatrix fit_bins(const Dataset& data, const Schema& schema) {
  return FeatureTransform::fit(data, schema).binned;
}

}  // namespace zipboost
