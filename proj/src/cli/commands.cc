#include "zipboost/cli/commands.h"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "zipboost/booster.h"
#include "zipboost/csv.h"
#include "zipboost/dataset.h"
#include "zipboost/error.h"
#include "zipboost/explain.h"
#include "zipboost/glm.h"
#include "zipboost/log.h"
#include "zipboost/metrics.h"
#include "zipboost/model_io.h"
#include "zipboost/random.h"
#include "zipboost/schema.h"
#include "zipboost/simulate.h"

namespace zipboost::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Bad flag values or combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_fingerprint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return hex64(fnv1a64(buf.str()));
}

std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("ZIPBOOST_SEED");
  if (!text || !*text) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end) throw UsageError(std::string("ZIPBOOST_SEED is not an integer: ") + text);
  return v;
}

void apply_thread_env() {
  const char* text = std::getenv("ZIPBOOST_THREADS");
  if (!text || !*text) return;
  char* end = nullptr;
  const long v = std::strtol(text, &end, 10);
  if (*end || v < 1) throw UsageError(std::string("ZIPBOOST_THREADS must be a positive integer: ") + text);
  omp_set_num_threads(static_cast<int>(v));
}

// Seed precedence: --seed flag, then ZIPBOOST_SEED, then `fallback`.
std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value, std::uint64_t fallback) {
  if (flag->count() > 0) return flag_value;
  if (auto env = env_seed()) return *env;
  return fallback;
}

fs::path manifest_path(const fs::path& output) {
  fs::path stem = output.stem();
  return output.parent_path() / (stem.string() + ".manifest.json");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_manifest(const fs::path& output, const std::string& command, const Json& config,
                    const std::string& dataset_fingerprint, std::uint64_t seed,
                    Clock::time_point start) {
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  Json m = {{"schema_version", 1},
            {"command", command},
            {"tool_version", kToolVersion},
            {"config", config},
            {"dataset_fingerprint", dataset_fingerprint},
            {"seed", seed},
            {"output", output.string()},
            {"duration_seconds", seconds}};
  write_text(manifest_path(output), m.dump(2) + "\n");
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json report_json(const EvalReport& r) {
  return {{"n", r.n},
          {"mean_deviance", number(r.mean_deviance)},
          {"null_deviance", number(r.null_deviance)},
          {"pseudo_r2", number(r.pseudo_r2)},
          {"zero_inflated", r.zero_inflated},
          {"infinite_deviance", r.infinite_deviance}};
}

Json config_json(const BoostConfig& c) {
  return {{"num_trees", c.num_trees},       {"learning_rate", c.learning_rate},
          {"lambda", c.lambda},             {"gamma", c.gamma},
          {"max_depth", c.max_depth},       {"min_child_hessian", c.min_child_hessian},
          {"seed", c.seed},                 {"early_stopping_rounds", c.early_stopping_rounds},
          {"init_from_mean_rate", c.init_from_mean_rate}};
}

Dataset load_for_model(const AnyModel& model, const fs::path& path, bool need_response) {
  LoadOptions options;
  options.require_response = need_response;
  return load_csv(path, model_schema(model), options);
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data, schema, loss = "poisson", out, validation;
  double gamma = 1.0, alpha = 0.1, lambda = 0.0, min_child_hessian = 1e-3;
  int depth = 8, trees = 500, early_stopping = 0;
  std::uint64_t seed = 0;
  bool init_mean_rate = false;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  if (a.gamma_opt->count() > 0 && a.loss != "zipb1") {
    throw UsageError("--gamma is only valid with --loss zipb1");
  }
  if (a.early_stopping > 0 && a.validation.empty()) {
    throw UsageError("--early-stopping needs --validation");
  }
  Schema schema = load_schema(a.schema);
  const std::uint64_t seed = resolve_seed(a.seed_opt, a.seed, schema.seed);
  schema.seed = seed;
  const Dataset data = load_csv(a.data, schema);

  Json config = {{"data", a.data}, {"schema", a.schema}, {"loss", a.loss}};
  AnyModel model;
  if (a.loss == "poisson_glm") {
    model = fit_glm(data, schema);
  } else {
    LossSpec loss;
    loss.kind = parse_loss_kind(a.loss);
    if (loss.kind == LossKind::kZipb1) loss.gamma = a.gamma;
    BoostConfig bc;
    bc.num_trees = a.trees;
    bc.learning_rate = a.alpha;
    bc.lambda = a.lambda;
    bc.gamma = loss.gamma;
    bc.max_depth = a.depth;
    bc.min_child_hessian = a.min_child_hessian;
    bc.seed = seed;
    bc.early_stopping_rounds = a.early_stopping;
    bc.init_from_mean_rate = a.init_mean_rate;
    bc.validate(loss.kind);
    loss.validate();
    std::optional<Dataset> validation;
    if (!a.validation.empty()) validation = load_csv(a.validation, schema);
    model = train(data, schema, loss, bc, validation ? &*validation : nullptr);
    config["booster"] = config_json(bc);
  }
  save_model(a.out, model);
  write_manifest(a.out, "train", config, file_fingerprint(a.data), seed, start);
  out << "wrote " << model_kind(model) << " model to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
  std::string model, data, out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const AnyModel model = load_model(a.model);
  const Dataset data = load_for_model(model, a.data, false);
  const auto params = predict_params(model, data);

  std::ofstream csv(a.out, std::ios::binary);
  if (!csv) throw Error("cannot write " + a.out);
  const std::vector<std::string> header = {"row_id", "mu", "p", "expected_count"};
  write_csv_row(csv, header);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::vector<std::string> row = {std::to_string(i + 1), format_double(params[i].mu),
                                          format_double(params[i].p),
                                          format_double(params[i].expected_count())};
    write_csv_row(csv, row);
  }
  csv.close();
  if (!csv) throw Error("failed writing " + a.out);
  write_manifest(a.out, "predict", {{"model", a.model}, {"data", a.data}, {"kind", model_kind(model)}},
                 file_fingerprint(a.data), 0, start);
  out << "wrote " << params.size() << " predictions to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string model, data, out, rqr_out;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const std::uint64_t seed = resolve_seed(a.seed_opt, a.seed, 0);
  const AnyModel model = load_model(a.model);
  const Dataset data = load_for_model(model, a.data, true);
  const auto params = predict_params(model, data);
  const EvalReport report = evaluate(data.y(), data.w(), params, zero_inflated(model));

  std::vector<double> residuals = rqr_sample(data.y(), params, derive_seed(seed, "rqr"));
  const KsResult ks = ks_test_normal(residuals);
  std::sort(residuals.begin(), residuals.end());

  const fs::path rqr_path =
      a.rqr_out.empty() ? fs::path(a.out).parent_path() / (fs::path(a.out).stem().string() + ".rqr.csv")
                        : fs::path(a.rqr_out);
  std::ofstream csv(rqr_path, std::ios::binary);
  if (!csv) throw Error("cannot write " + rqr_path.string());
  const std::vector<std::string> header = {"theoretical_quantile", "residual"};
  write_csv_row(csv, header);
  const double n = static_cast<double>(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const std::vector<std::string> row = {
        format_double(normal_quantile((static_cast<double>(i) + 0.5) / n)),
        format_double(residuals[i])};
    write_csv_row(csv, row);
  }
  csv.close();
  if (!csv) throw Error("failed writing " + rqr_path.string());

  Json j = {{"schema_version", 1}, {"kind", model_kind(model)}};
  j.update(report_json(report));
  j["rqr"] = {{"seed", seed}, {"ks_statistic", ks.statistic}, {"ks_p_value", ks.p_value},
              {"csv", rqr_path.string()}};
  write_text(a.out, j.dump(2) + "\n");
  write_manifest(a.out, "evaluate", {{"model", a.model}, {"data", a.data}}, file_fingerprint(a.data),
                 seed, start);
  out << j.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string model_a, model_b, data, out;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const AnyModel first = load_model(a.model_a);
  const AnyModel second = load_model(a.model_b);
  const Dataset data_a = load_for_model(first, a.data, true);
  const Dataset data_b = load_for_model(second, a.data, true);
  const auto ll_a = log_likelihoods(data_a.y(), predict_params(first, data_a));
  const auto ll_b = log_likelihoods(data_b.y(), predict_params(second, data_b));
  VuongResult v;
  try {
    v = vuong(ll_a, ll_b);
  } catch (const std::domain_error& e) {
    throw Error(e.what());
  }
  Json j = {{"schema_version", 1},
            {"model_a", {{"path", a.model_a}, {"kind", model_kind(first)}}},
            {"model_b", {{"path", a.model_b}, {"kind", model_kind(second)}}},
            {"n", data_a.n_rows()},
            {"statistic", v.statistic},
            {"p_value", v.p_value},
            {"preferred", std::string(to_string(v.preferred))}};
  if (!a.out.empty()) {
    write_text(a.out, j.dump(2) + "\n");
    write_manifest(a.out, "compare", {{"model_a", a.model_a}, {"model_b", a.model_b}, {"data", a.data}},
                   file_fingerprint(a.data), 0, start);
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- cv

struct CvArgs {
  std::string data, schema, loss = "poisson", grid_file, out, folds_out;
  int folds = 3, trees = 500, depth = 8;
  double holdout = 0.2;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

std::vector<double> grid_values(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<double>>();
}

int cmd_cv(const CvArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  LossSpec loss;
  try {
    loss.kind = parse_loss_kind(a.loss);
  } catch (const std::exception&) {
    throw UsageError("--loss must be poisson, zipb1 or zipb2 for cv");
  }
  Schema schema = load_schema(a.schema);
  const std::uint64_t seed = resolve_seed(a.seed_opt, a.seed, schema.seed);
  schema.seed = seed;

  BoostConfig base;
  base.num_trees = a.trees;
  base.max_depth = a.depth;
  base.seed = seed;

  std::vector<BoostConfig> grid;
  if (a.grid_file.empty()) {
    grid = reference_grid(loss.kind, base);
  } else {
    std::ifstream in(a.grid_file);
    if (!in) throw UsageError("cannot read grid file " + a.grid_file);
    Json g;
    try {
      g = Json::parse(in);
    } catch (const std::exception& e) {
      throw UsageError("grid file is not valid JSON: " + std::string(e.what()));
    }
    const auto gammas = grid_values(g, "gamma");
    if (!gammas.empty() && loss.kind != LossKind::kZipb1) {
      throw UsageError("a gamma grid is only valid with --loss zipb1");
    }
    grid = make_grid(base, grid_values(g, "learning_rate"), grid_values(g, "lambda"), gammas);
  }
  for (const auto& c : grid) c.validate(loss.kind);

  const Dataset data = load_csv(a.data, schema);
  const HoldoutSplit split = holdout_split(data.n_rows(), a.holdout, seed);
  const Dataset train_part = data.subset(split.train);
  const CvResult result = cross_validate(train_part, schema, loss, grid, a.folds, seed);
  const auto fold_of = assign_folds(train_part.n_rows(), a.folds, seed);

  std::string fold_bytes;
  for (int f : fold_of) fold_bytes += static_cast<char>('0' + f % 10);

  Json candidates = Json::array();
  for (const auto& c : result.candidates) {
    Json folds = Json::array();
    for (const auto& r : c.folds) folds.push_back(report_json(r));
    candidates.push_back(
        {{"config", config_json(c.config)}, {"mean_deviance", number(c.mean_deviance)}, {"folds", folds}});
  }
  Json j = {{"schema_version", 1},
            {"loss", a.loss},
            {"folds", a.folds},
            {"seed", seed},
            {"n_train", split.train.size()},
            {"n_holdout", split.test.size()},
            {"fold_assignment_hash", hex64(fnv1a64(fold_bytes))},
            {"best_index", result.best_index},
            {"best", config_json(result.best)},
            {"candidates", candidates}};

  if (!split.test.empty()) {
    LossSpec best_loss = loss;
    if (loss.kind == LossKind::kZipb1) best_loss.gamma = result.best.gamma;
    const Model model = train(train_part, schema, best_loss, result.best);
    const Dataset test_part = data.subset(split.test);
    const auto params = predict(model, test_part);
    j["holdout"] = report_json(evaluate(test_part.y(), test_part.w(), params, model.zero_inflated()));
  }

  if (!a.folds_out.empty()) {
    std::ofstream csv(a.folds_out, std::ios::binary);
    if (!csv) throw Error("cannot write " + a.folds_out);
    const std::vector<std::string> header = {"row_id", "fold"};
    write_csv_row(csv, header);
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      const std::vector<std::string> row = {std::to_string(split.train[i] + 1),
                                            std::to_string(fold_of[i])};
      write_csv_row(csv, row);
    }
  }

  if (!a.out.empty()) {
    write_text(a.out, j.dump(2) + "\n");
    write_manifest(a.out, "cv",
                   {{"data", a.data}, {"schema", a.schema}, {"loss", a.loss}, {"grid_file", a.grid_file},
                    {"folds", a.folds}, {"holdout", a.holdout}, {"grid_size", grid.size()}},
                   file_fingerprint(a.data), seed, start);
  }
  out << "best config (index " << result.best_index << " of " << grid.size()
      << "): learning_rate=" << result.best.learning_rate << " lambda=" << result.best.lambda;
  if (loss.kind == LossKind::kZipb1) out << " gamma=" << result.best.gamma;
  out << " mean deviance=" << result.candidates[result.best_index].mean_deviance << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string model, out, importance_csv, interaction_csv;
  std::size_t top_k = 10;
};

Json importance_json(const ImportanceTable& t) {
  Json rows = Json::array();
  for (std::size_t i : top_k(t, t.features.size())) {
    rows.push_back({{"feature", t.features[i]}, {"importance", t.importance[i]}, {"raw", t.raw[i]}});
  }
  return rows;
}

Json interaction_json(const InteractionTable& t) {
  Json rows = Json::array();
  for (std::size_t i : top_k(t, t.pairs.size())) {
    const auto& p = t.pairs[i];
    rows.push_back({{"first", t.features[p.first]},
                    {"second", t.features[p.second]},
                    {"strength", p.strength}});
  }
  return rows;
}

void print_tables(std::ostream& out, const std::string& label, const ImportanceTable& imp,
                  const InteractionTable& inter, std::size_t k) {
  out << "Top " << std::min(k, imp.features.size()) << " feature importance (" << label << ")\n";
  for (std::size_t i : top_k(imp, k)) {
    out << "  " << std::left << std::setw(28) << imp.features[i] << std::right << std::fixed
        << std::setprecision(4) << std::setw(10) << imp.importance[i] << "\n";
  }
  out << "Top " << std::min(k, inter.pairs.size()) << " interaction strength (" << label << ")\n";
  for (std::size_t i : top_k(inter, k)) {
    const auto& p = inter.pairs[i];
    out << "  " << std::left << std::setw(40) << (inter.features[p.first] + " x " + inter.features[p.second])
        << std::right << std::setprecision(6) << std::setw(14) << p.strength << "\n";
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

void write_importance_csv(std::ostream& csv, const std::string& ensemble, const ImportanceTable& t) {
  for (std::size_t i : top_k(t, t.features.size())) {
    const std::vector<std::string> row = {ensemble, t.features[i], format_double(t.importance[i]),
                                          format_double(t.raw[i])};
    write_csv_row(csv, row);
  }
}

void write_interaction_csv(std::ostream& csv, const std::string& ensemble, const InteractionTable& t) {
  for (std::size_t i : top_k(t, t.pairs.size())) {
    const auto& p = t.pairs[i];
    const std::vector<std::string> row = {ensemble, t.features[p.first], t.features[p.second],
                                          format_double(p.strength)};
    write_csv_row(csv, row);
  }
}

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const AnyModel any = load_model(a.model);
  const auto* model = std::get_if<Model>(&any);
  if (!model) throw ModelError("explain needs a boosted model, got " + model_kind(any));
  const Explanation e = explain(*model);

  const std::string po_label = e.importance_logit ? "mu ensemble" : "ensemble";
  print_tables(out, po_label, e.importance_po, e.interaction_po, a.top_k);
  if (e.importance_logit) print_tables(out, "logit ensemble", *e.importance_logit, *e.interaction_logit, a.top_k);

  if (!a.out.empty()) {
    Json j = {{"schema_version", 1},
              {"kind", model_kind(any)},
              {"importance", {{"po", importance_json(e.importance_po)}}},
              {"interaction", {{"po", interaction_json(e.interaction_po)}}}};
    if (e.importance_logit) {
      j["importance"]["logit"] = importance_json(*e.importance_logit);
      j["interaction"]["logit"] = interaction_json(*e.interaction_logit);
    }
    write_text(a.out, j.dump(2) + "\n");
    write_manifest(a.out, "explain", {{"model", a.model}, {"top_k", a.top_k}},
                   file_fingerprint(a.model), model->config.seed, start);
  }
  if (!a.importance_csv.empty()) {
    std::ofstream csv(a.importance_csv, std::ios::binary);
    if (!csv) throw Error("cannot write " + a.importance_csv);
    const std::vector<std::string> header = {"ensemble", "feature", "importance", "raw"};
    write_csv_row(csv, header);
    write_importance_csv(csv, "po", e.importance_po);
    if (e.importance_logit) write_importance_csv(csv, "logit", *e.importance_logit);
  }
  if (!a.interaction_csv.empty()) {
    std::ofstream csv(a.interaction_csv, std::ios::binary);
    if (!csv) throw Error("cannot write " + a.interaction_csv);
    const std::vector<std::string> header = {"ensemble", "first", "second", "strength"};
    write_csv_row(csv, header);
    write_interaction_csv(csv, "po", e.interaction_po);
    if (e.interaction_logit) write_interaction_csv(csv, "logit", *e.interaction_logit);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t n = 0;
  std::string mu_spec = "tree", p_spec = "none", out, schema_out;
  int features = 5;
  bool categorical = false;
  double exposure_min = 1.0, exposure_max = 1.0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  SimulationConfig config;
  if (a.n < 1) throw UsageError("--n must be at least 1");
  config.n = a.n;
  try {
    config.mu = parse_mu_spec(a.mu_spec);
    config.p = parse_p_spec(a.p_spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  config.num_features = a.features;
  config.categorical = a.categorical;
  config.exposure_min = a.exposure_min;
  config.exposure_max = a.exposure_max;
  config.seed = resolve_seed(a.seed_opt, a.seed, 0);
  Simulation sim;
  try {
    sim = simulate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::ofstream csv(a.out, std::ios::binary);
  if (!csv) throw Error("cannot write " + a.out);
  write_csv(csv, sim.data, sim.schema);
  csv.close();
  if (!csv) throw Error("failed writing " + a.out);
  if (!a.schema_out.empty()) write_text(a.schema_out, format_schema(sim.schema));

  write_manifest(a.out, "simulate",
                 {{"n", a.n},
                  {"mu_spec", to_string(config.mu)},
                  {"p_spec", to_string(config.p)},
                  {"features", a.features},
                  {"categorical", a.categorical},
                  {"exposure_min", a.exposure_min},
                  {"exposure_max", a.exposure_max}},
                 file_fingerprint(a.out), config.seed, start);
  out << "wrote " << a.n << " rows to " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient-boosted Poisson and zero-inflated Poisson claim-frequency models", "zipboost"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::vector<std::string> losses = {"poisson", "zipb1", "zipb2", "poisson_glm"};

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Fit a model and write it as JSON");
  train_cmd->add_option("--data", train_args.data, "Training CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--schema", train_args.schema, "Schema file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--loss", train_args.loss, "Objective")->check(CLI::IsMember(losses))->capture_default_str();
  train_args.gamma_opt = train_cmd->add_option("--gamma", train_args.gamma, "ZIPB1 inflation exponent")
                             ->check(CLI::PositiveNumber);
  train_cmd->add_option("--alpha", train_args.alpha, "Learning rate")->capture_default_str();
  train_cmd->add_option("--lambda", train_args.lambda, "L2 penalty on leaf values")->capture_default_str();
  train_cmd->add_option("--depth", train_args.depth, "Maximum tree depth")->capture_default_str();
  train_cmd->add_option("--trees", train_args.trees, "Number of boosting iterations")->capture_default_str();
  train_cmd->add_option("--min-child-hessian", train_args.min_child_hessian)->capture_default_str();
  train_args.seed_opt = train_cmd->add_option("--seed", train_args.seed, "Random seed");
  train_cmd->add_flag("--init-mean-rate", train_args.init_mean_rate, "Start from the mean log rate instead of 0");
  train_cmd->add_option("--early-stopping", train_args.early_stopping, "Stop after N rounds without improvement");
  train_cmd->add_option("--validation", train_args.validation, "Validation CSV for early stopping")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out, "Model JSON path")->required();

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Write per-row mu, p and expected count");
  predict_cmd->add_option("--model", predict_args.model)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--data", predict_args.data)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict_args.out, "Output CSV")->required();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Deviance, pseudo-R2 and quantile residuals");
  eval_cmd->add_option("--model", eval_args.model)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", eval_args.data)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_args.out, "Report JSON")->required();
  eval_cmd->add_option("--rqr-out", eval_args.rqr_out, "Residual CSV (default <out>.rqr.csv)");
  eval_args.seed_opt = eval_cmd->add_option("--seed", eval_args.seed, "Seed for the residual uniforms");

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Vuong test between two models");
  compare_cmd->add_option("--model-a", compare_args.model_a)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--model-b", compare_args.model_b)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--data", compare_args.data)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare_args.out, "Result JSON");

  CvArgs cv_args;
  auto* cv_cmd = app.add_subcommand("cv", "Holdout split plus k-fold grid search");
  cv_cmd->add_option("--data", cv_args.data)->required()->check(CLI::ExistingFile);
  cv_cmd->add_option("--schema", cv_args.schema)->required()->check(CLI::ExistingFile);
  cv_cmd->add_option("--loss", cv_args.loss)->check(CLI::IsMember({"poisson", "zipb1", "zipb2"}))->capture_default_str();
  cv_cmd->add_option("--grid-file", cv_args.grid_file, "JSON with learning_rate, lambda and gamma lists")
      ->check(CLI::ExistingFile);
  cv_cmd->add_option("--folds", cv_args.folds)->check(CLI::Range(2, 1000))->capture_default_str();
  cv_cmd->add_option("--holdout", cv_args.holdout)->check(CLI::Range(0.0, 0.99))->capture_default_str();
  cv_cmd->add_option("--trees", cv_args.trees)->capture_default_str();
  cv_cmd->add_option("--depth", cv_args.depth)->capture_default_str();
  cv_args.seed_opt = cv_cmd->add_option("--seed", cv_args.seed);
  cv_cmd->add_option("--out", cv_args.out, "Result JSON");
  cv_cmd->add_option("--folds-out", cv_args.folds_out, "CSV of (row_id, fold) for the training part");

  ExplainArgs explain_args;
  auto* explain_cmd = app.add_subcommand("explain", "Feature importance and interaction strength");
  explain_cmd->add_option("--model", explain_args.model)->required()->check(CLI::ExistingFile);
  explain_cmd->add_option("--top-k", explain_args.top_k)->capture_default_str();
  explain_cmd->add_option("--out", explain_args.out, "Full tables as JSON");
  explain_cmd->add_option("--importance-csv", explain_args.importance_csv);
  explain_cmd->add_option("--interaction-csv", explain_args.interaction_csv);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic zero-inflated claim table");
  sim_cmd->add_option("--n", sim_args.n, "Row count")->required();
  sim_cmd->add_option("--mu-spec", sim_args.mu_spec, "tree | const:R | loglinear:b0,b1,...")->capture_default_str();
  sim_cmd->add_option("--p-spec", sim_args.p_spec, "none | eq16:G | independent:P")->capture_default_str();
  sim_cmd->add_option("--features", sim_args.features)->check(CLI::NonNegativeNumber)->capture_default_str();
  sim_cmd->add_flag("--categorical", sim_args.categorical, "Add a noise categorical column 'region'");
  sim_cmd->add_option("--exposure-min", sim_args.exposure_min)->capture_default_str();
  sim_cmd->add_option("--exposure-max", sim_args.exposure_max)->capture_default_str();
  sim_args.seed_opt = sim_cmd->add_option("--seed", sim_args.seed);
  sim_cmd->add_option("--out", sim_args.out, "Output CSV")->required();
  sim_cmd->add_option("--schema-out", sim_args.schema_out, "Also write a matching schema file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ScopedWarningSink sink([&err](std::string_view msg) { err << "warning: " << msg << "\n"; });
  try {
    apply_thread_env();
    if (train_cmd->parsed()) return cmd_train(train_args, out);
    if (predict_cmd->parsed()) return cmd_predict(predict_args, out);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_args, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_args, out);
    if (cv_cmd->parsed()) return cmd_cv(cv_args, out);
    if (explain_cmd->parsed()) return cmd_explain(explain_args, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace zipboost::cli
