#ifndef ZIPBOOST_MODEL_IO_H_
#define ZIPBOOST_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zipboost/booster.h"
#include "zipboost/glm.h"

namespace zipboost {

inline constexpr int kModelSchemaVersion = 1;

using AnyModel = std::variant<Model, GlmModel>;

// "poisson", "zipb1", "zipb2" or "poisson_glm".
std::string model_kind(const AnyModel& model);
bool zero_inflated(const AnyModel& model);
const Schema& model_schema(const AnyModel& model);

// Hex FNV-1a hash of the serialized feature transform (schema, bin
// boundaries, target-statistic tables).
std::string transform_fingerprint(const FeatureTransform& transform);

// JSON model document. Doubles are written in shortest round-trip form, so
// parse_model(serialize_model(m)) == m bit for bit, and equal models give
// byte-identical documents.
std::string serialize_model(const AnyModel& model);
// Throws ModelError on malformed documents, unknown versions or a
// fingerprint mismatch.
AnyModel parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel load_model(const std::filesystem::path& path);

// Per-row (mu, p); GLM models report p = 0.
std::vector<ZipParams> predict_params(const AnyModel& model, const Dataset& data);

}  // namespace zipboost

#endif  // ZIPBOOST_MODEL_IO_H_
