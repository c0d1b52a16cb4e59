#include "zipboost/schema.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "zipboost/csv.h"
#include "zipboost/error.h"

namespace zipboost {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  while (true) {
    const auto comma = value.find(',');
    const std::string_view item = trim(value.substr(0, comma));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw SchemaError("schema: '" + std::string(key) + "' expects an integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kNumeric ? "numeric" : "categorical";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "numeric") return FeatureKind::kNumeric;
  if (text == "categorical") return FeatureKind::kCategorical;
  throw SchemaError("schema: unknown feature kind '" + std::string(text) + "'");
}

void Schema::validate() const {
  if (response_column.empty()) throw SchemaError("schema: response column is not set");
  if (exposure_column && exposure_column->empty()) {
    throw SchemaError("schema: exposure column name is empty");
  }
  if (exposure_column && *exposure_column == response_column) {
    throw SchemaError("schema: response and exposure are the same column");
  }
  std::set<std::string> seen;
  for (const auto& f : features) {
    if (f.name.empty()) throw SchemaError("schema: empty feature name");
    if (f.name == response_column) {
      throw SchemaError("schema: response column '" + f.name + "' is listed as a feature");
    }
    if (exposure_column && f.name == *exposure_column) {
      throw SchemaError("schema: exposure column '" + f.name + "' is listed as a feature");
    }
    if (!seen.insert(f.name).second) {
      throw SchemaError("schema: duplicate feature '" + f.name + "'");
    }
  }
  if (max_bins < 2 || max_bins > 256) {
    throw SchemaError("schema: max_bins must lie in [2, 256], got " + std::to_string(max_bins));
  }
  if (!(ts_smoothing >= 0.0)) throw SchemaError("schema: ts_smoothing must be nonnegative");
}

const FeatureColumn* Schema::find_feature(std::string_view name) const {
  for (const auto& f : features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Schema parse_schema(std::string_view text) {
  Schema schema;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError("schema line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "response") {
      schema.response_column = std::string(value);
    } else if (key == "exposure") {
      if (value.empty() || value == "none") {
        schema.exposure_column.reset();
      } else {
        schema.exposure_column = std::string(value);
      }
    } else if (key == "numeric" || key == "categorical") {
      const FeatureKind kind = parse_feature_kind(key);
      for (auto& name : split_list(value)) schema.features.push_back({std::move(name), kind});
    } else if (key == "feature") {
      for (const auto& item : split_list(value)) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) {
          throw SchemaError("schema line " + std::to_string(line_no) +
                            ": feature entries are written name:kind");
        }
        schema.features.push_back({std::string(trim(std::string_view(item).substr(0, colon))),
                                   parse_feature_kind(trim(std::string_view(item).substr(colon + 1)))});
      }
    } else if (key == "max_bins") {
      schema.max_bins = parse_integer<int>(key, value);
    } else if (key == "ts_smoothing") {
      if (!parse_double(value, schema.ts_smoothing)) {
        throw SchemaError("schema: 'ts_smoothing' expects a number, got '" + std::string(value) + "'");
      }
    } else if (key == "seed") {
      schema.seed = parse_integer<std::uint64_t>(key, value);
    } else {
      throw SchemaError("schema line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
  }
  schema.validate();
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

std::string format_schema(const Schema& schema) {
  std::ostringstream out;
  out << "response = " << schema.response_column << '\n';
  out << "exposure = " << (schema.exposure_column ? *schema.exposure_column : "none") << '\n';
  for (const auto& f : schema.features) {
    out << "feature = " << f.name << ':' << to_string(f.kind) << '\n';
  }
  out << "max_bins = " << schema.max_bins << '\n';
  out << "ts_smoothing = " << format_double(schema.ts_smoothing) << '\n';
  out << "seed = " << schema.seed << '\n';
  return out.str();
}

}  // namespace zipboost
