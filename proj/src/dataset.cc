#include "zipboost/dataset.h"

#include <cmath>
#include <fstream>

#include "zipboost/csv.h"
#include "zipboost/error.h"

namespace zipboost {

std::uint32_t CategoricalColumn::intern(std::string_view level) {
  if (lookup.size() != levels.size()) {
    lookup.clear();
    for (std::size_t i = 0; i < levels.size(); ++i) lookup.emplace(levels[i], i);
  }
  auto [it, inserted] = lookup.emplace(std::string(level), static_cast<std::uint32_t>(levels.size()));
  if (inserted) levels.emplace_back(level);
  return it->second;
}

Dataset::Dataset(std::vector<int> y, std::vector<double> w) : y_(std::move(y)), w_(std::move(w)) {
  if (w_.empty()) w_.assign(y_.size(), 1.0);
  if (w_.size() != y_.size()) {
    throw SchemaError("dataset: exposure has " + std::to_string(w_.size()) + " rows, response has " +
                      std::to_string(y_.size()));
  }
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (y_[i] < 0) throw ValidationError("negative claim count " + std::to_string(y_[i]), i + 1);
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
      throw ValidationError("exposure must be positive and finite", i + 1);
    }
  }
}

void Dataset::check_length(std::size_t n, const std::string& name) const {
  if (n != n_rows()) {
    throw SchemaError("dataset: column '" + name + "' has " + std::to_string(n) +
                      " rows, expected " + std::to_string(n_rows()));
  }
  if (index_.count(name)) throw SchemaError("dataset: duplicate column '" + name + "'");
}

void Dataset::add_numeric(std::string name, std::vector<double> values) {
  check_length(values.size(), name);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("feature '" + name + "' is missing or not finite", i + 1);
    }
  }
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  columns_.emplace_back(NumericColumn{std::move(values)});
}

void Dataset::add_categorical(std::string name, const std::vector<std::string>& values) {
  CategoricalColumn column;
  column.codes.reserve(values.size());
  for (const auto& v : values) column.codes.push_back(column.intern(v));
  add_categorical(std::move(name), std::move(column));
}

void Dataset::add_categorical(std::string name, CategoricalColumn column) {
  check_length(column.codes.size(), name);
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  columns_.emplace_back(std::move(column));
}

FeatureKind Dataset::kind(std::size_t index) const {
  return std::holds_alternative<NumericColumn>(columns_[index]) ? FeatureKind::kNumeric
                                                                : FeatureKind::kCategorical;
}

const FeatureData* Dataset::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &columns_[it->second];
}

const NumericColumn& Dataset::numeric(std::string_view name) const {
  const FeatureData* col = find(name);
  if (!col || !std::holds_alternative<NumericColumn>(*col)) {
    throw SchemaError("dataset: no numeric column '" + std::string(name) + "'");
  }
  return std::get<NumericColumn>(*col);
}

const CategoricalColumn& Dataset::categorical(std::string_view name) const {
  const FeatureData* col = find(name);
  if (!col || !std::holds_alternative<CategoricalColumn>(*col)) {
    throw SchemaError("dataset: no categorical column '" + std::string(name) + "'");
  }
  return std::get<CategoricalColumn>(*col);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<int> y;
  std::vector<double> w;
  y.reserve(rows.size());
  w.reserve(rows.size());
  for (std::size_t r : rows) {
    y.push_back(y_.at(r));
    w.push_back(w_[r]);
  }
  Dataset out(std::move(y), std::move(w));
  out.has_response_ = has_response_;
  for (std::size_t f = 0; f < names_.size(); ++f) {
    if (const auto* num = std::get_if<NumericColumn>(&columns_[f])) {
      std::vector<double> values;
      values.reserve(rows.size());
      for (std::size_t r : rows) values.push_back(num->values[r]);
      out.add_numeric(names_[f], std::move(values));
    } else {
      const auto& cat = std::get<CategoricalColumn>(columns_[f]);
      CategoricalColumn sub;
      sub.codes.reserve(rows.size());
      for (std::size_t r : rows) sub.codes.push_back(sub.intern(cat.level_of(r)));
      out.add_categorical(names_[f], std::move(sub));
    }
  }
  return out;
}

double Dataset::total_claims() const {
  double s = 0.0;
  for (int v : y_) s += v;
  return s;
}

double Dataset::total_exposure() const {
  double s = 0.0;
  for (double v : w_) s += v;
  return s;
}

Dataset read_csv(std::istream& in, const Schema& schema, const LoadOptions& options) {
  schema.validate();
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next_row(header)) throw SchemaError("csv: missing header row");

  auto column_index = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<long>(i);
    }
    return -1;
  };

  const long y_col = column_index(schema.response_column);
  if (y_col < 0 && options.require_response) {
    throw SchemaError("csv: missing column '" + schema.response_column + "'");
  }
  long w_col = -1;
  if (schema.exposure_column) {
    w_col = column_index(*schema.exposure_column);
    if (w_col < 0) throw SchemaError("csv: missing column '" + *schema.exposure_column + "'");
  }
  std::vector<long> feature_cols;
  for (const auto& f : schema.features) {
    const long idx = column_index(f.name);
    if (idx < 0) throw SchemaError("csv: missing column '" + f.name + "'");
    feature_cols.push_back(idx);
  }

  std::vector<int> y;
  std::vector<double> w;
  std::vector<std::vector<double>> numeric(schema.features.size());
  std::vector<CategoricalColumn> categorical(schema.features.size());

  std::vector<std::string> fields;
  std::size_t row = 0;
  while (reader.next_row(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++row;
    if (fields.size() != header.size()) {
      throw ValidationError("expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()),
                            row);
    }
    if (y_col >= 0) {
      double v;
      if (!parse_double(fields[y_col], v)) {
        throw ValidationError("claim count '" + fields[y_col] + "' is not a number", row);
      }
      if (v < 0.0 || v != std::floor(v) || v > 1e9) {
        throw ValidationError("claim count '" + fields[y_col] + "' is not a nonnegative integer",
                              row);
      }
      y.push_back(static_cast<int>(v));
    } else {
      y.push_back(0);
    }
    if (w_col >= 0) {
      double v;
      if (!parse_double(fields[w_col], v)) {
        throw ValidationError("exposure '" + fields[w_col] + "' is not a number", row);
      }
      if (!(v > 0.0)) throw ValidationError("exposure must be positive, got " + fields[w_col], row);
      w.push_back(v);
    } else {
      w.push_back(1.0);
    }
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
      const std::string& field = fields[feature_cols[f]];
      if (schema.features[f].kind == FeatureKind::kNumeric) {
        double v;
        if (!parse_double(field, v)) {
          throw ValidationError("feature '" + schema.features[f].name + "' value '" + field +
                                    "' is missing or not numeric",
                                row);
        }
        numeric[f].push_back(v);
      } else {
        if (field.empty()) {
          throw ValidationError("feature '" + schema.features[f].name + "' is missing", row);
        }
        categorical[f].codes.push_back(categorical[f].intern(field));
      }
    }
  }

  Dataset data(std::move(y), std::move(w));
  data.set_has_response(y_col >= 0);
  for (std::size_t f = 0; f < schema.features.size(); ++f) {
    if (schema.features[f].kind == FeatureKind::kNumeric) {
      data.add_numeric(schema.features[f].name, std::move(numeric[f]));
    } else {
      data.add_categorical(schema.features[f].name, std::move(categorical[f]));
    }
  }
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema,
                 const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open data file " + path.string());
  return read_csv(in, schema, options);
}

void write_csv(std::ostream& out, const Dataset& data, const Schema& schema) {
  std::vector<std::string> row;
  for (const auto& f : schema.features) row.push_back(f.name);
  if (schema.exposure_column) row.push_back(*schema.exposure_column);
  row.push_back(schema.response_column);
  write_csv_row(out, row);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    row.clear();
    for (const auto& f : schema.features) {
      const FeatureData* col = data.find(f.name);
      if (!col) throw SchemaError("dataset: missing column '" + f.name + "'");
      if (const auto* num = std::get_if<NumericColumn>(col)) {
        row.push_back(format_double(num->values[i]));
      } else {
        row.push_back(std::get<CategoricalColumn>(*col).level_of(i));
      }
    }
    if (schema.exposure_column) row.push_back(format_double(data.w()[i]));
    row.push_back(std::to_string(data.y()[i]));
    write_csv_row(out, row);
  }
}

}  // namespace zipboost
