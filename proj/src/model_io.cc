#include "zipboost/model_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zipboost/error.h"
#include "zipboost/random.h"

namespace zipboost {

using Json = nlohmann::ordered_json;

namespace {

Json schema_to_json(const Schema& s) {
  Json features = Json::array();
  for (const auto& f : s.features) {
    features.push_back({{"name", f.name}, {"kind", std::string(to_string(f.kind))}});
  }
  return {{"response", s.response_column},
          {"exposure", s.exposure_column ? Json(*s.exposure_column) : Json(nullptr)},
          {"features", features},
          {"max_bins", s.max_bins},
          {"ts_smoothing", s.ts_smoothing},
          {"seed", s.seed}};
}

Schema schema_from_json(const Json& j) {
  Schema s;
  s.response_column = j.at("response").get<std::string>();
  if (!j.at("exposure").is_null()) s.exposure_column = j.at("exposure").get<std::string>();
  for (const auto& f : j.at("features")) {
    s.features.push_back(
        {f.at("name").get<std::string>(), parse_feature_kind(f.at("kind").get<std::string>())});
  }
  s.max_bins = j.at("max_bins").get<int>();
  s.ts_smoothing = j.at("ts_smoothing").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.validate();
  return s;
}

Json transform_to_json(const FeatureTransform& t) {
  Json features = Json::array();
  for (const auto& f : t.features()) {
    Json jf = {{"name", f.name},
               {"source", f.source},
               {"kind", std::string(to_string(f.kind))},
               {"boundaries", f.bins.boundaries}};
    if (f.kind == DerivedKind::kIndicator) jf["level"] = f.level;
    if (f.kind == DerivedKind::kTargetStat) {
      Json stats = Json::array();
      for (const auto& [level, st] : f.encoder.stats()) {
        stats.push_back({level, st.response_sum, st.count});
      }
      jf["target_stat"] = {{"prior", f.encoder.prior()},
                           {"smoothing", f.encoder.smoothing()},
                           {"levels", stats}};
    }
    features.push_back(std::move(jf));
  }
  return {{"schema", schema_to_json(t.schema())}, {"features", features}};
}

FeatureTransform transform_from_json(const Json& j) {
  Schema schema = schema_from_json(j.at("schema"));
  std::vector<DerivedFeature> features;
  for (const auto& jf : j.at("features")) {
    DerivedFeature f;
    f.name = jf.at("name").get<std::string>();
    f.source = jf.at("source").get<std::string>();
    f.kind = parse_derived_kind(jf.at("kind").get<std::string>());
    f.bins.boundaries = jf.at("boundaries").get<std::vector<double>>();
    if (f.bins.bin_count() > kMaxBinCount) throw ModelError("feature " + f.name + ": too many bins");
    if (f.kind == DerivedKind::kIndicator) f.level = jf.at("level").get<std::string>();
    if (f.kind == DerivedKind::kTargetStat) {
      const Json& ts = jf.at("target_stat");
      std::map<std::string, CategoryStats> stats;
      for (const auto& row : ts.at("levels")) {
        stats[row.at(0).get<std::string>()] = {row.at(1).get<double>(), row.at(2).get<double>()};
      }
      f.encoder = TargetStatEncoder(ts.at("prior").get<double>(), ts.at("smoothing").get<double>(),
                                    std::move(stats));
    }
    features.push_back(std::move(f));
  }
  return FeatureTransform(std::move(schema), std::move(features));
}

// Column-wise node arrays keep large ensembles compact.
Json tree_to_json(const Tree& tree) {
  Json feature = Json::array(), bin = Json::array(), threshold = Json::array(),
       left = Json::array(), right = Json::array(), value = Json::array(),
       grad = Json::array(), hess = Json::array(), count = Json::array(), gain = Json::array();
  for (const auto& n : tree.nodes()) {
    feature.push_back(n.feature);
    bin.push_back(n.threshold_bin);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    grad.push_back(n.sum_gradient);
    hess.push_back(n.sum_hessian);
    count.push_back(n.count);
    gain.push_back(n.gain);
  }
  return {{"feature", feature}, {"threshold_bin", bin}, {"threshold", threshold},
          {"left", left},       {"right", right},       {"value", value},
          {"sum_gradient", grad}, {"sum_hessian", hess}, {"count", count},
          {"gain", gain}};
}

Tree tree_from_json(const Json& j, std::size_t n_features) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto bin = j.at("threshold_bin").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto grad = j.at("sum_gradient").get<std::vector<double>>();
  const auto hess = j.at("sum_hessian").get<std::vector<double>>();
  const auto count = j.at("count").get<std::vector<std::int64_t>>();
  const auto gain = j.at("gain").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (bin.size() != n || threshold.size() != n || left.size() != n || right.size() != n ||
      value.size() != n || grad.size() != n || hess.size() != n || count.size() != n ||
      gain.size() != n) {
    throw ModelError("tree node arrays have different lengths");
  }
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (feature[i] >= static_cast<int>(n_features)) {
      throw ModelError("tree node refers to feature index " + std::to_string(feature[i]));
    }
    nodes[i] = {feature[i], bin[i], threshold[i], left[i], right[i],
                value[i],   grad[i], hess[i],     count[i], gain[i]};
  }
  try {
    return Tree(std::move(nodes));
  } catch (const std::exception& e) {
    throw ModelError(std::string("invalid tree: ") + e.what());
  }
}

Json config_to_json(const BoostConfig& c) {
  return {{"num_trees", c.num_trees},
          {"learning_rate", c.learning_rate},
          {"lambda", c.lambda},
          {"gamma", c.gamma},
          {"max_depth", c.max_depth},
          {"min_child_hessian", c.min_child_hessian},
          {"seed", c.seed},
          {"early_stopping_rounds", c.early_stopping_rounds},
          {"init_from_mean_rate", c.init_from_mean_rate}};
}

BoostConfig config_from_json(const Json& j) {
  BoostConfig c;
  c.num_trees = j.at("num_trees").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.max_depth = j.at("max_depth").get<int>();
  c.min_child_hessian = j.at("min_child_hessian").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.early_stopping_rounds = j.at("early_stopping_rounds").get<int>();
  c.init_from_mean_rate = j.at("init_from_mean_rate").get<bool>();
  return c;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json booster_to_json(const Model& m) {
  Json trees_po = Json::array(), trees_logit = Json::array();
  for (const auto& t : m.trees_po) trees_po.push_back(tree_to_json(t));
  for (const auto& t : m.trees_logit) trees_logit.push_back(tree_to_json(t));
  return {{"schema_version", kModelSchemaVersion},
          {"kind", std::string(to_string(m.loss.kind))},
          {"gamma", m.loss.gamma},
          {"hessian_floor", m.loss.hessian_floor},
          {"learning_rate", m.learning_rate()},
          {"config", config_to_json(m.config)},
          {"base_score_po", m.base_score_po},
          {"base_score_logit", m.base_score_logit},
          {"fingerprint", transform_fingerprint(m.transform)},
          {"transform", transform_to_json(m.transform)},
          {"trees_po", trees_po},
          {"trees_logit", trees_logit},
          {"training_loss", m.training_loss}};
}

Model booster_from_json(const Json& j) {
  Model m;
  m.loss.kind = parse_loss_kind(j.at("kind").get<std::string>());
  m.loss.gamma = j.at("gamma").get<double>();
  m.loss.hessian_floor = j.at("hessian_floor").get<double>();
  m.config = config_from_json(j.at("config"));
  if (j.at("learning_rate").get<double>() != m.config.learning_rate) {
    throw ModelError("learning_rate disagrees with the stored config");
  }
  m.base_score_po = j.at("base_score_po").get<double>();
  m.base_score_logit = j.at("base_score_logit").get<double>();
  m.transform = transform_from_json(j.at("transform"));
  if (transform_fingerprint(m.transform) != j.at("fingerprint").get<std::string>()) {
    throw ModelError("fingerprint does not match the stored feature transform");
  }
  const std::size_t nf = m.transform.features().size();
  for (const auto& t : j.at("trees_po")) m.trees_po.push_back(tree_from_json(t, nf));
  for (const auto& t : j.at("trees_logit")) m.trees_logit.push_back(tree_from_json(t, nf));
  if (m.loss.kind == LossKind::kZipb2 ? m.trees_logit.size() != m.trees_po.size()
                                      : !m.trees_logit.empty()) {
    throw ModelError("logit ensemble size does not fit the model kind");
  }
  m.training_loss = j.at("training_loss").get<std::vector<double>>();
  return m;
}

Json glm_to_json(const GlmModel& g) {
  Json terms = Json::array();
  for (std::size_t k = 0; k < g.terms.size(); ++k) {
    terms.push_back({{"name", g.terms[k].name},
                     {"source", g.terms[k].source},
                     {"level", g.terms[k].level},
                     {"coefficient", g.coefficients[k]}});
  }
  return {{"schema_version", kModelSchemaVersion},
          {"kind", "poisson_glm"},
          {"schema", schema_to_json(g.schema)},
          {"reference_levels", g.reference_levels},
          {"terms", terms},
          {"converged", g.converged},
          {"iterations", g.iterations},
          {"deviance", g.deviance}};
}

GlmModel glm_from_json(const Json& j) {
  GlmModel g;
  g.schema = schema_from_json(j.at("schema"));
  g.reference_levels = j.at("reference_levels").get<std::vector<std::string>>();
  for (const auto& t : j.at("terms")) {
    g.terms.push_back({t.at("name").get<std::string>(), t.at("source").get<std::string>(),
                       t.at("level").get<std::string>()});
    g.coefficients.push_back(t.at("coefficient").get<double>());
  }
  if (g.terms.empty()) throw ModelError("GLM has no terms");
  g.converged = j.at("converged").get<bool>();
  g.iterations = j.at("iterations").get<int>();
  g.deviance = j.at("deviance").get<double>();
  return g;
}

}  // namespace

std::string model_kind(const AnyModel& model) {
  if (const auto* m = std::get_if<Model>(&model)) return std::string(to_string(m->loss.kind));
  return "poisson_glm";
}

bool zero_inflated(const AnyModel& model) {
  const auto* m = std::get_if<Model>(&model);
  return m && m->zero_inflated();
}

const Schema& model_schema(const AnyModel& model) {
  if (const auto* m = std::get_if<Model>(&model)) return m->transform.schema();
  return std::get<GlmModel>(model).schema;
}

std::string transform_fingerprint(const FeatureTransform& transform) {
  return hex64(fnv1a64(transform_to_json(transform).dump()));
}

std::string serialize_model(const AnyModel& model) {
  const Json j = std::visit(
      [](const auto& m) -> Json {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Model>) {
          return booster_to_json(m);
        } else {
          return glm_to_json(m);
        }
      },
      model);
  return j.dump() + "\n";
}

AnyModel parse_model(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw ModelError("unsupported model schema_version " + std::to_string(version));
    }
    if (j.at("kind").get<std::string>() == "poisson_glm") return glm_from_json(j);
    return booster_from_json(j);
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write model file " + path.string());
  out << serialize_model(model);
  if (!out) throw ModelError("failed writing model file " + path.string());
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::vector<ZipParams> predict_params(const AnyModel& model, const Dataset& data) {
  if (const auto* m = std::get_if<Model>(&model)) return predict(*m, data);
  const auto mu = predict_glm(std::get<GlmModel>(model), data);
  std::vector<ZipParams> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = {mu[i], 0.0};
  return out;
}

}  // namespace zipboost
