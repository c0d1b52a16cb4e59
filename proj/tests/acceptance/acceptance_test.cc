// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "zipboost/booster.h"
#include "zipboost/cli/commands.h"
#include "zipboost/explain.h"
#include "zipboost/glm.h"
#include "zipboost/log.h"
#include "zipboost/losses.h"
#include "zipboost/metrics.h"
#include "zipboost/random.h"
#include "zipboost/simulate.h"
#include "zipboost/tree_builder.h"
#include "zipboost/zip_distribution.h"

namespace fs = std::filesystem;
using namespace zipboost;

namespace {

using Clock = std::chrono::steady_clock;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------- 1

Outcome gradient_correctness() {
  const auto start = Clock::now();
  const int points = 2000;
  const double ws[] = {0.1, 1.0, 2.0};
  const double e = 1e-5;
  int checked = 0;
  std::string first_failure;
  using Nll = std::function<double(int, double, double)>;
  using Grad = std::function<GradHess(int, double, double)>;
  auto check = [&](const std::string& label, Nll nll, Grad grad, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "acceptance:fd"));
    for (int i = 0; i < points; ++i) {
      const int y = static_cast<int>(rng.below(6));
      const double f = -4.0 + 8.0 * rng.uniform();
      const double w = ws[rng.below(3)];
      const GradHess d = grad(y, f, w);
      const double g_fd = (nll(y, f + e, w) - nll(y, f - e, w)) / (2 * e);
      const double h_fd = (grad(y, f + e, w).g - grad(y, f - e, w).g) / (2 * e);
      ++checked;
      if ((!close_rel(d.g, g_fd, 1e-5) || !close_rel(d.h, h_fd, 1e-5)) && first_failure.empty()) {
        first_failure = label + " y=" + std::to_string(y) + " F=" + fmt(f, 17) + " w=" + fmt(w);
      }
    }
  };
  check("poisson", poisson_nll, [](int y, double f, double w) { return poisson_grad_hess(y, f, w, 1e-300); }, 1);
  for (double gamma : {1.0, 5.0, 10.0, 50.0}) {
    check("zipb1 gamma=" + fmt(gamma), [gamma](int y, double f, double w) { return zipb1_nll(y, f, w, gamma); },
          [gamma](int y, double f, double w) { return zipb1_derivatives(y, f, w, gamma); },
          static_cast<std::uint64_t>(10 + gamma));
  }
  // Both ZIPB2 directions, with the other score drawn per point from the same range.
  Rng other_rng(derive_seed(5, "acceptance:fd-other"));
  Rng rng2(derive_seed(4, "acceptance:fd"));
  for (int i = 0; i < points; ++i) {
    const int y = static_cast<int>(rng2.below(6));
    const double f = -4.0 + 8.0 * rng2.uniform();
    const double w = ws[rng2.below(3)];
    const double o = -4.0 + 8.0 * other_rng.uniform();
    const GradHess d = zipb2_derivatives_logit(y, o, f, w);
    const double g_fd = (zipb2_nll(y, o, f + e, w) - zipb2_nll(y, o, f - e, w)) / (2 * e);
    const double h_fd =
        (zipb2_derivatives_logit(y, o, f + e, w).g - zipb2_derivatives_logit(y, o, f - e, w).g) / (2 * e);
    const GradHess q = zipb2_derivatives_po(y, f, o, w);
    const double gq_fd = (zipb2_nll(y, f + e, o, w) - zipb2_nll(y, f - e, o, w)) / (2 * e);
    const double hq_fd = (zipb2_derivatives_po(y, f + e, o, w).g - zipb2_derivatives_po(y, f - e, o, w).g) / (2 * e);
    checked += 2;
    const bool ok = close_rel(d.g, g_fd, 1e-5) && close_rel(d.h, h_fd, 1e-5) && close_rel(q.g, gq_fd, 1e-5) &&
                    close_rel(q.h, hq_fd, 1e-5);
    if (!ok && first_failure.empty()) {
      first_failure = "zipb2 y=" + std::to_string(y) + " F=" + fmt(f, 17) + " other=" + fmt(o, 17);
    }
  }
  const double t = seconds_since(start);
  Outcome out;
  out.detail = std::to_string(checked) + " (g, h) checks, " + fmt(t, 3) + " s";
  if (!first_failure.empty()) {
    out.status = Status::kFail;
    out.detail += "; mismatch at " + first_failure;
  } else if (t >= 5.0) {
    out.status = Status::kFail;
    out.detail += " (limit 5 s)";
  }
  return out;
}

// ---------------------------------------------------------------- 2

Outcome distribution_validity() {
  double worst_sum = 0.0;
  for (double mu : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0}) {
    for (double p : {0.0, 0.05, 0.3, 0.5, 0.8, 0.95}) {
      double s = 0.0;
      for (int y = 0; y <= 200; ++y) s += zip_pmf(y, mu, p);
      worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
    }
  }
  const int n = 100000;
  double worst_z = 0.0;
  std::uint64_t stream = 0;
  for (double mu : {0.2, 1.0, 4.0, 20.0}) {
    for (double p : {0.0, 0.4, 0.95}) {
      Rng rng(derive_seed(++stream, "acceptance:zip-sample"));
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rng.zip(mu, p);
      const double mean = (1 - p) * mu;
      const double se = std::sqrt(mu * (1 - p) * (1 + p * mu) / n);
      worst_z = std::max(worst_z, std::fabs(s / n - mean) / se);
    }
  }
  Outcome out;
  out.detail = "max |sum pmf - 1| = " + fmt(worst_sum, 3) + ", max |mean error| = " + fmt(worst_z, 3) + " SE";
  if (worst_sum > 1e-8 || worst_z > 3.0) out.status = Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 3

Outcome tree_oracle() {
  const auto start = Clock::now();
  int mismatches = 0;
  int splits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(seed, "acceptance:tree"));
    const std::size_t n = 2 + rng.below(199);
    const int nf = 1 + static_cast<int>(rng.below(3));
    std::vector<std::vector<double>> raw;
    std::vector<FeatureBins> bins;
    std::vector<std::string> names;
    for (int f = 0; f < nf; ++f) {
      const std::uint64_t levels = 2 + rng.below(30);
      std::vector<double> col(n);
      for (double& v : col) v = static_cast<double>(rng.below(levels)) * 0.25 - 1.0;
      bins.push_back(fit_feature_bins(col, 256));
      raw.push_back(std::move(col));
      names.push_back("f" + std::to_string(f));
    }
    const BinnedMatrix binned(n, names, bins, raw);
    std::vector<double> g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = rng.normal();
      h[i] = 0.01 + rng.uniform();
    }
    TreeParams params;
    params.max_depth = 1;
    params.lambda = static_cast<double>(seed % 4);
    const Tree tree = build_tree(binned, g, h, params);

    int best_f = -1;
    double best_t = 0.0, best_gain = 0.0;
    for (int f = 0; f < nf; ++f) {
      std::vector<double> values = raw[f];
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (double t : values) {
        double gl = 0, hl = 0, gr = 0, hr = 0;
        std::size_t nl = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (raw[f][i] <= t) {
            gl += g[i], hl += h[i], ++nl;
          } else {
            gr += g[i], hr += h[i];
          }
        }
        if (nl == 0 || nl == n || hl < params.min_child_hessian || hr < params.min_child_hessian) continue;
        const double gain =
            0.5 * (gl * gl / (hl + params.lambda) + gr * gr / (hr + params.lambda) -
                   (gl + gr) * (gl + gr) / (hl + hr + params.lambda));
        if (gain > best_gain + 1e-12) best_f = f, best_t = t, best_gain = gain;
      }
    }
    const TreeNode& root = tree.node(0);
    if (best_f < 0) {
      if (!root.is_leaf()) ++mismatches;
      continue;
    }
    ++splits;
    if (root.is_leaf() || root.feature != best_f || root.threshold != best_t ||
        std::fabs(root.gain - best_gain) > 1e-9) {
      ++mismatches;
    }
  }
  const double t = seconds_since(start);
  Outcome out;
  out.detail = "100 datasets, " + std::to_string(splits) + " splits, " + std::to_string(mismatches) +
               " mismatches, " + fmt(t, 3) + " s";
  if (mismatches > 0 || t >= 10.0) out.status = Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 4, 5, 6

struct RecoveryRun {
  Dataset train, test;
  Schema schema;
  Model pb, zipb1, zipb2;
  std::vector<ZipParams> pb_test, zipb1_test, zipb2_test;
  double seconds = 0.0;
};

RecoveryRun& recovery() {
  static RecoveryRun run = [] {
    RecoveryRun r;
    const auto start = Clock::now();
    SimulationConfig sc;
    sc.n = 50000;
    sc.mu = parse_mu_spec("tree");
    sc.p = parse_p_spec("eq16:2");
    sc.num_features = 5;
    sc.seed = 20240501;
    const Simulation sim = simulate(sc);
    r.schema = sim.schema;
    const HoldoutSplit split = holdout_split(sim.data.n_rows(), 0.2, sc.seed);
    r.train = sim.data.subset(split.train);
    r.test = sim.data.subset(split.test);

    BoostConfig bc;
    bc.num_trees = 200;
    bc.learning_rate = 0.1;
    bc.lambda = 0.0;
    bc.max_depth = 4;
    bc.gamma = 2.0;
    LossSpec pois;
    LossSpec zipb1;
    zipb1.kind = LossKind::kZipb1;
    zipb1.gamma = 2.0;
    LossSpec zipb2;
    zipb2.kind = LossKind::kZipb2;
    r.pb = train(r.train, r.schema, pois, bc);
    r.zipb1 = train(r.train, r.schema, zipb1, bc);
    r.zipb2 = train(r.train, r.schema, zipb2, bc);
    r.pb_test = predict(r.pb, r.test);
    r.zipb1_test = predict(r.zipb1, r.test);
    r.zipb2_test = predict(r.zipb2, r.test);
    r.seconds = seconds_since(start);
    return r;
  }();
  return run;
}

Outcome zip_recovery() {
  RecoveryRun& r = recovery();
  const auto y = r.test.y();
  const double d_pb = mean_deviance(y, r.pb_test);
  const double d_z1 = mean_deviance(y, r.zipb1_test);
  const double d_z2 = mean_deviance(y, r.zipb2_test);
  const VuongResult v = vuong(log_likelihoods(y, r.zipb1_test), log_likelihoods(y, r.pb_test));
  const bool a = d_z1 < d_pb;
  const bool b = v.statistic > 1.96;
  const bool c = d_z1 <= d_z2;
  Outcome out;
  out.detail = "test deviance PB " + fmt(d_pb) + ", ZIPB1 " + fmt(d_z1) + ", ZIPB2 " + fmt(d_z2) +
               "; Vuong(ZIPB1, PB) V = " + fmt(v.statistic) + "; (a) " + (a ? "ok" : "no") + " (b) " +
               (b ? "ok" : "no") + " (c) " + (c ? "ok" : "no") + "; " + fmt(r.seconds, 3) + " s";
  if (!a || !b || !c || r.seconds >= 180.0) out.status = Status::kFail;
  return out;
}

Outcome rqr_normality() {
  RecoveryRun& r = recovery();
  // Fresh responses drawn from the fitted ZIPB1 model on the held-out rows.
  Rng rng(derive_seed(7, "acceptance:rqr-data"));
  std::vector<int> y(r.zipb1_test.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.zip(r.zipb1_test[i].mu, r.zipb1_test[i].p);
  const KsResult ks_z1 = ks_test_normal(rqr_sample(y, r.zipb1_test, 11));
  const KsResult ks_pb = ks_test_normal(rqr_sample(y, r.pb_test, 11));
  Outcome out;
  out.detail = "KS p-value ZIPB1 " + fmt(ks_z1.p_value) + " (D = " + fmt(ks_z1.statistic) + "), PB " +
               fmt(ks_pb.p_value) + " (D = " + fmt(ks_pb.statistic) + ")";
  if (!(ks_z1.p_value > 0.01) || !(ks_pb.p_value < 0.01)) out.status = Status::kFail;
  return out;
}

std::vector<ZipParams> glm_params(const GlmModel& g, const Dataset& data) {
  std::vector<ZipParams> out;
  for (double mu : predict_glm(g, data)) out.push_back({mu, 0.0});
  return out;
}

fs::path fremtpl_path() {
  if (const char* env = std::getenv("ZIPBOOST_FREMTPL2"); env && *env) return env;
  return fs::path(ZIPBOOST_TEST_DATA_DIR) / "freMTPL2freq.csv";
}

Outcome table_ordering() {
  const fs::path csv = fremtpl_path();
  if (fs::exists(csv)) {
    const Schema schema = load_schema(fs::path(ZIPBOOST_TEST_DATA_DIR) / "freMTPL2freq.schema");
    const Dataset data = load_csv(csv, schema);
    const HoldoutSplit split = holdout_split(data.n_rows(), 0.2, schema.seed);
    const Dataset tr = data.subset(split.train);
    const Dataset te = data.subset(split.test);
    BoostConfig bc;
    bc.num_trees = 300;
    bc.learning_rate = 0.05;
    bc.lambda = 100.0;
    bc.max_depth = 6;
    bc.seed = schema.seed;
    LossSpec pois, z1, z2;
    z1.kind = LossKind::kZipb1;
    z1.gamma = 1.0;
    z2.kind = LossKind::kZipb2;
    const auto r2 = [&](const std::vector<ZipParams>& params, bool zi) {
      return evaluate(te.y(), te.w(), params, zi).pseudo_r2;
    };
    const double pg = r2(glm_params(fit_glm(tr, schema), te), false);
    const double pb = r2(predict(train(tr, schema, pois, bc), te), false);
    const double zb1 = r2(predict(train(tr, schema, z1, bc), te), true);
    const double zb2 = r2(predict(train(tr, schema, z2, bc), te), true);
    Outcome out;
    out.detail = "freMTPL2 holdout pseudo-R2 ZIPB2 " + fmt(zb2) + ", ZIPB1 " + fmt(zb1) + ", PB " + fmt(pb) +
                 ", PG " + fmt(pg);
    if (!(zb2 > zb1 && zb1 > pb && pb > pg)) out.status = Status::kFail;
    return out;
  }

  // Synthetic fallback: the criterion-4 checks on the recovery data, plus the
  // GLM baseline ranking last on pseudo-R2.
  RecoveryRun& r = recovery();
  const auto y = r.test.y();
  const auto w = r.test.w();
  const GlmModel glm = fit_glm(r.train, r.schema);
  const double pg = evaluate(y, w, glm_params(glm, r.test), false).pseudo_r2;
  const double pb = evaluate(y, w, r.pb_test, false).pseudo_r2;
  const double zb1 = evaluate(y, w, r.zipb1_test, true).pseudo_r2;
  const double zb2 = evaluate(y, w, r.zipb2_test, true).pseudo_r2;
  const bool pg_lowest = pg < pb && pg < zb1 && pg < zb2;
  const Outcome recovery_checks = zip_recovery();
  const bool recovery_ok = recovery_checks.status == Status::kPass;
  Outcome out;
  out.detail = "freMTPL2freq not found (" + csv.string() + "); synthetic fallback: pseudo-R2 ZIPB2 " + fmt(zb2) +
               ", ZIPB1 " + fmt(zb1) + ", PB " + fmt(pb) + ", PG " + fmt(pg) + "; PG lowest " +
               (pg_lowest ? "ok" : "no") + ", criterion-4 checks " + (recovery_ok ? "ok" : "no") +
               "; test deviance ZIPB2 " + fmt(mean_deviance(y, r.zipb2_test)) + " vs PB " +
               fmt(mean_deviance(y, r.pb_test)) + " (reported, not asserted)";
  out.status = pg_lowest && recovery_ok ? Status::kSkip : Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 7

Outcome glm_correctness() {
  Schema schema;
  schema.response_column = "y";
  schema.exposure_column = "w";

  Rng rng(derive_seed(3, "acceptance:glm"));
  std::vector<int> y;
  std::vector<double> w, x;
  std::vector<std::string> g;
  const char* levels[] = {"north", "south", "east"};
  for (int i = 0; i < 5000; ++i) {
    x.push_back(rng.normal());
    g.push_back(levels[rng.below(3)]);
    w.push_back(0.1 + 0.9 * rng.uniform());
    const double eff = g.back() == "south" ? 0.4 : (g.back() == "east" ? -0.3 : 0.0);
    y.push_back(rng.poisson(w.back() * std::exp(-1.0 + 0.3 * x.back() + eff)));
  }
  Dataset data(y, w);
  const GlmModel intercept = fit_glm(data, schema);
  const double rate = data.total_claims() / data.total_exposure();
  const double err_intercept = std::fabs(intercept.coefficients[0] - std::log(rate));

  data.add_numeric("x", x);
  data.add_categorical("g", g);
  schema.features = {{"x", FeatureKind::kNumeric}, {"g", FeatureKind::kCategorical}};
  const GlmModel full = fit_glm(data, schema);
  const auto mu = predict_glm(full, data);
  double s0 = 0, s1 = 0, s_south = 0, s_east = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double e = y[i] - mu[i];
    s0 += e;
    s1 += e * x[i];
    if (g[i] == "south") s_south += e;
    if (g[i] == "east") s_east += e;
  }
  const double score = std::max({std::fabs(s0), std::fabs(s1), std::fabs(s_south), std::fabs(s_east)});

  // Two groups of two rows; the fit reproduces each group's claim rate.
  Dataset four({1, 2, 5, 0}, {0.5, 1.0, 2.0, 0.5});
  four.add_categorical("grp", {"a", "a", "b", "b"});
  Schema s4 = schema;
  s4.features = {{"grp", FeatureKind::kCategorical}};
  const GlmModel m4 = fit_glm(four, s4);
  const auto mu4 = predict_glm(m4, four);
  const double rate_a = 3.0 / 1.5, rate_b = 5.0 / 2.5;
  const double rates[] = {rate_a, rate_a, rate_b, rate_b};
  double err_groups = 0.0;
  for (std::size_t i = 0; i < 4; ++i) err_groups = std::max(err_groups, std::fabs(mu4[i] - four.w()[i] * rates[i]));
  // Same fixture with distinct rates per group.
  Dataset four2({1, 3, 6, 0}, {0.5, 1.0, 2.0, 1.0});
  four2.add_categorical("grp", {"a", "a", "b", "b"});
  const auto mu42 = predict_glm(fit_glm(four2, s4), four2);
  const double rates2[] = {4.0 / 1.5, 4.0 / 1.5, 6.0 / 3.0, 6.0 / 3.0};
  for (std::size_t i = 0; i < 4; ++i) {
    err_groups = std::max(err_groups, std::fabs(mu42[i] - four2.w()[i] * rates2[i]));
  }

  Outcome out;
  out.detail = "|b0 - ln rate| = " + fmt(err_intercept, 3) + ", max |score| = " + fmt(score, 3) +
               ", group-rate error = " + fmt(err_groups, 3);
  if (!(err_intercept <= 1e-8) || !(score <= 1e-6) || !(err_groups <= 1e-8)) out.status = Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 8

// Golden digest of assign_folds(10007, 5, 2024), written as decimal text.
constexpr const char* kFoldDigest = "e62480afdb63ab28";

std::string fold_digest() {
  std::string text;
  for (int f : assign_folds(10007, 5, 2024)) text += std::to_string(f);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("zipboost_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream sink_out, sink_err;
  auto run = [&](std::vector<std::string> args) { return cli::run(args, sink_out, sink_err); };
  const std::string data = (dir / "d.csv").string();
  const std::string schema = (dir / "d.schema").string();
  int rc = run({"simulate", "--n", "5000", "--p-spec", "eq16:2", "--categorical", "--exposure-min", "0.2", "--seed",
                "8", "--out", data, "--schema-out", schema});
  for (const char* tag : {"a", "b"}) {
    rc |= run({"train", "--data", data, "--schema", schema, "--loss", "zipb2", "--trees", "30", "--depth", "5",
               "--seed", "5", "--out", (dir / (std::string(tag) + ".json")).string()});
  }
  const bool same_model =
      rc == 0 && !read_file(dir / "a.json").empty() && read_file(dir / "a.json") == read_file(dir / "b.json");
  const std::string grid = (dir / "grid.json").string();
  std::ofstream(grid) << R"({"learning_rate": [0.1], "lambda": [0]})";
  for (const char* tag : {"a", "b"}) {
    rc |= run({"cv", "--data", data, "--schema", schema, "--grid-file", grid, "--trees", "5", "--depth", "3",
               "--seed", "9", "--out", (dir / (std::string("cv_") + tag + ".json")).string(), "--folds-out",
               (dir / (std::string("folds_") + tag + ".csv")).string()});
  }
  const bool same_folds = rc == 0 && !read_file(dir / "folds_a.csv").empty() &&
                          read_file(dir / "folds_a.csv") == read_file(dir / "folds_b.csv");
  const std::string digest = fold_digest();
  const bool golden = digest == kFoldDigest;
  fs::remove_all(dir);
  Outcome out;
  out.detail = std::string("train byte-identical ") + (same_model ? "ok" : "no") + ", cv folds identical " +
               (same_folds ? "ok" : "no") + ", fold digest " + digest + (golden ? " matches golden" : " != golden");
  if (rc != 0) out.detail += "; cli error: " + sink_err.str();
  if (!same_model || !same_folds || !golden) out.status = Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 9

TreeNode node(int feature, int left, int right, double value, std::int64_t count) {
  TreeNode n;
  n.feature = feature;
  n.left = left;
  n.right = right;
  n.value = value;
  n.count = count;
  return n;
}

Outcome interpretation() {
  const std::vector<std::string> names = {"a", "b", "c"};
  ScopedWarningSink quiet([](std::string_view) {});
  const std::vector<Tree> single = {Tree({node(1, 1, 2, 0, 20), node(-1, -1, -1, -0.5, 12), node(-1, -1, -1, 0.7, 8)})};
  const ImportanceTable imp1 = feature_importance(single, names);
  const bool single_ok = imp1.importance[1] == 100.0 && imp1.importance[0] == 0.0 && imp1.importance[2] == 0.0;

  // Root on a; left child on b with leaves 1 and 2; right leaf 5.
  const Tree nested({node(0, 1, 2, 0, 30), node(1, 3, 4, 1.5, 20), node(-1, -1, -1, 5.0, 10),
                     node(-1, -1, -1, 1.0, 10), node(-1, -1, -1, 2.0, 10)});
  const std::vector<Tree> once = {nested};
  const std::vector<Tree> twice = {nested, nested};
  const double s1 = interaction_strength(once, names).strength(0, 1);
  const double s2 = interaction_strength(twice, names).strength(0, 1);
  const bool additive = s2 == 2.0 * s1;

  // Golden tables: |(1 + 2) - 5| = 2; importance 75 / 25 from raw scores 3 and 1.
  const std::vector<Tree> pair = {Tree({node(0, 1, 2, 0, 4), node(-1, -1, -1, 0.0, 3), node(-1, -1, -1, 2.0, 1)}),
                                  Tree({node(1, 1, 2, 0, 4), node(-1, -1, -1, 0.0, 2), node(-1, -1, -1, 1.0, 2)})};
  const ImportanceTable imp2 = feature_importance(pair, names);
  const InteractionTable it = interaction_strength(once, names, 0.1);
  const bool golden = s1 == 2.0 && imp2.importance == std::vector<double>{75.0, 25.0, 0.0} &&
                      imp2.raw == std::vector<double>{3.0, 1.0, 0.0} && std::fabs(it.strength(0, 1) - 0.2) < 1e-15 &&
                      it.strength(0, 2) == 0.0 && it.strength(1, 2) == 0.0;
  Outcome out;
  out.detail = std::string("single split = 100 ") + (single_ok ? "ok" : "no") + ", duplicated tree " + fmt(s1) +
               " -> " + fmt(s2) + (additive ? " ok" : " no") + ", golden tables " + (golden ? "ok" : "no");
  if (!single_ok || !additive || !golden) out.status = Status::kFail;
  return out;
}

// ---------------------------------------------------------------- 10

Outcome performance() {
  SimulationConfig sc;
  sc.n = 100000;
  sc.num_features = 50;
  sc.mu = parse_mu_spec("tree");
  sc.seed = 10;
  const Simulation sim = simulate(sc);
  BoostConfig bc;
  bc.num_trees = 500;
  bc.max_depth = 8;
  const auto t0 = Clock::now();
  const Model model = train(sim.data, sim.schema, LossSpec{}, bc);
  const double train_s = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto params = predict(model, sim.data);
  const double predict_s = seconds_since(t1);
  Outcome out;
  out.detail = "100000 x 50, T = 500, depth 8: train " + fmt(train_s, 4) + " s (limit 300), predict " +
               fmt(predict_s, 3) + " s (limit 5), threads " + std::to_string(omp_get_max_threads());
  if (train_s >= 300.0 || predict_s >= 5.0 || params.size() != sc.n) out.status = Status::kFail;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "gradient correctness", gradient_correctness},
      {2, "distribution validity", distribution_validity},
      {3, "tree-builder oracle equivalence", tree_oracle},
      {4, "ZIP recovery", zip_recovery},
      {5, "RQR normality", rqr_normality},
      {6, "pseudo-R2 ordering", table_ordering},
      {7, "GLM correctness", glm_correctness},
      {8, "determinism", determinism},
      {9, "interpretation formulas", interpretation},
      {10, "performance envelope", performance},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* label = o.status == Status::kPass ? "PASS" : (o.status == Status::kSkip ? "SKIP" : "FAIL");
    if (o.status == Status::kFail) ++failures;
    std::cout << "criterion " << c.id << " [" << label << "] " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed or skipped" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
