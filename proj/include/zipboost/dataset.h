#ifndef ZIPBOOST_DATASET_H_
#define ZIPBOOST_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "zipboost/schema.h"

namespace zipboost {

struct NumericColumn {
  std::vector<double> values;
};

// Category identifiers interned case-sensitively in order of first appearance.
struct CategoricalColumn {
  std::vector<std::string> levels;
  std::vector<std::uint32_t> codes;
  std::unordered_map<std::string, std::uint32_t> lookup;

  std::uint32_t intern(std::string_view level);
  const std::string& level_of(std::size_t row) const { return levels[codes[row]]; }
};

using FeatureData = std::variant<NumericColumn, CategoricalColumn>;

// Columnar claim table: counts y, exposures w and feature columns.
class Dataset {
 public:
  Dataset() = default;

  // Unit exposure when `w` is empty. Throws ValidationError on negative y or
  // nonpositive / non-finite w.
  Dataset(std::vector<int> y, std::vector<double> w);

  std::size_t n_rows() const { return y_.size(); }
  bool has_response() const { return has_response_; }

  std::span<const int> y() const { return y_; }
  std::span<const double> w() const { return w_; }

  void add_numeric(std::string name, std::vector<double> values);
  void add_categorical(std::string name, const std::vector<std::string>& values);
  void add_categorical(std::string name, CategoricalColumn column);

  std::size_t n_features() const { return names_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }
  FeatureKind kind(std::size_t index) const;
  const FeatureData& feature(std::size_t index) const { return columns_[index]; }

  // nullptr when the column does not exist.
  const FeatureData* find(std::string_view name) const;
  const NumericColumn& numeric(std::string_view name) const;
  const CategoricalColumn& categorical(std::string_view name) const;

  // Rows in the given order; categorical levels are re-interned.
  Dataset subset(std::span<const std::size_t> rows) const;

  // Marks the response as unknown (prediction-only data).
  void set_has_response(bool value) { has_response_ = value; }

  double total_claims() const;
  double total_exposure() const;

 private:
  void check_length(std::size_t n, const std::string& name) const;

  std::vector<int> y_;
  std::vector<double> w_;
  bool has_response_ = true;
  std::vector<std::string> names_;
  std::vector<FeatureData> columns_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
  // When false a missing response column is allowed and y is filled with 0.
  bool require_response = true;
};

// Reads an RFC-4180 CSV with a header row. Only schema columns are kept;
// rows keep file order. Missing values are rejected.
Dataset load_csv(const std::filesystem::path& path, const Schema& schema,
                 const LoadOptions& options = {});
Dataset read_csv(std::istream& in, const Schema& schema, const LoadOptions& options = {});

void write_csv(std::ostream& out, const Dataset& data, const Schema& schema);

}  // namespace zipboost

#endif  // ZIPBOOST_DATASET_H_
