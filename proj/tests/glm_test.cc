#include "zipboost/glm.h"

#include <gtest/gtest.h>

#include <cmath>

#include "zipboost/error.h"
#include "zipboost/log.h"
#include "zipboost/metrics.h"
#include "zipboost/random.h"

namespace zipboost {
namespace {

Schema schema_of(std::vector<FeatureColumn> features) {
  Schema s;
  s.response_column = "y";
  s.exposure_column = "w";
  s.features = std::move(features);
  return s;
}

// Reference fit: statsmodels GLM(Poisson, offset = ln w), tests/oracles/generate.py.
struct Reference {
  Dataset data;
  Schema schema;
};

Reference reference_data() {
  Dataset d({0, 1, 0, 3, 1, 0, 2, 1, 0, 2}, {1, .5, 2, 1, .7, 1.3, .9, 1, .4, 1.8});
  d.add_numeric("x", {0.5, 1.2, -0.3, 2.0, 0.8, -1.1, 1.7, 0.1, -0.6, 1.4});
  d.add_categorical("g", {"a", "b", "a", "b", "b", "a", "b", "a", "a", "b"});
  return {std::move(d), schema_of({{"x", FeatureKind::kNumeric}, {"g", FeatureKind::kCategorical}})};
}

TEST(Glm, InterceptOnlyIsLogRate) {
  Dataset d({0, 2, 1, 4}, {1.0, 0.5, 2.0, 1.5});
  const GlmModel m = fit_glm(d, schema_of({}));
  ASSERT_TRUE(m.converged);
  EXPECT_NEAR(m.coefficients[0], std::log(7.0 / 5.0), 1e-8);
}

TEST(Glm, MatchesReferenceFit) {
  const Reference r = reference_data();
  const GlmModel m = fit_glm(r.data, r.schema);
  ASSERT_TRUE(m.converged);
  ASSERT_EQ(m.terms.size(), 3u);
  EXPECT_EQ(m.terms[0].name, "(Intercept)");
  EXPECT_EQ(m.terms[1].name, "x");
  EXPECT_EQ(m.terms[2].name, "g=b");
  EXPECT_EQ(m.reference_levels, std::vector<std::string>{"a"});
  EXPECT_NEAR(m.coefficients[0], -1.589395123691647, 1e-7);
  EXPECT_NEAR(m.coefficients[1], 0.9206556696715767, 1e-7);
  EXPECT_NEAR(m.coefficients[2], 0.7852532994489068, 1e-7);
  EXPECT_NEAR(m.deviance, 3.6293817596539206, 1e-9);
}

TEST(Glm, ScoreEquationsHold) {
  const Reference r = reference_data();
  const GlmModel m = fit_glm(r.data, r.schema);
  const auto mu = predict_glm(m, r.data);
  const auto& x = r.data.numeric("x").values;
  const auto& g = r.data.categorical("g");
  double s0 = 0, s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double e = r.data.y()[i] - mu[i];
    s0 += e;
    s1 += e * x[i];
    s2 += e * (g.level_of(i) == "b" ? 1.0 : 0.0);
  }
  EXPECT_NEAR(s0, 0.0, 1e-6);
  EXPECT_NEAR(s1, 0.0, 1e-6);
  EXPECT_NEAR(s2, 0.0, 1e-6);
}

TEST(Glm, SaturatedGroupsRecoverRates) {
  Dataset d({1, 3, 2, 8}, {2.0, 1.0, 4.0, 2.0});
  d.add_categorical("g", {"p", "q", "r", "s"});
  const GlmModel m = fit_glm(d, schema_of({{"g", FeatureKind::kCategorical}}));
  const auto mu = predict_glm(m, d);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(mu[i], d.y()[i], 1e-8);
  EXPECT_NEAR(m.coefficients[0], std::log(0.5), 1e-8);
}

TEST(Glm, RankDeficiencyNamesColumns) {
  Dataset d({0, 1, 2, 1, 0}, {});
  d.add_numeric("u", {1, 2, 3, 4, 5});
  d.add_numeric("v", {2, 4, 6, 8, 10});
  try {
    fit_glm(d, schema_of({{"u", FeatureKind::kNumeric}, {"v", FeatureKind::kNumeric}}));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("u"), std::string::npos);
    EXPECT_NE(what.find("v"), std::string::npos);
  }
}

TEST(Glm, DuplicatedRowsGiveSameCoefficients) {
  const Reference r = reference_data();
  std::vector<std::size_t> rows;
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < r.data.n_rows(); ++i) rows.push_back(i);
  }
  const GlmModel a = fit_glm(r.data, r.schema);
  const GlmModel b = fit_glm(r.data.subset(rows), r.schema);
  for (std::size_t j = 0; j < a.coefficients.size(); ++j) {
    EXPECT_NEAR(a.coefficients[j], b.coefficients[j], 1e-8);
  }
  EXPECT_NEAR(b.deviance, 2 * a.deviance, 1e-8);
}

TEST(Glm, UnseenLevelWarnsAndUsesReference) {
  const Reference r = reference_data();
  const GlmModel m = fit_glm(r.data, r.schema);
  Dataset d({0, 0}, {1.0, 1.0});
  d.add_numeric("x", {0.5, 0.5});
  d.add_categorical("g", {"a", "zzz"});
  std::vector<std::string> warnings;
  ScopedWarningSink sink([&](std::string_view s) { warnings.emplace_back(s); });
  const auto mu = predict_glm(m, d);
  EXPECT_DOUBLE_EQ(mu[0], mu[1]);
  ASSERT_FALSE(warnings.empty());
  EXPECT_NE(warnings[0].find("zzz"), std::string::npos);
}

TEST(Glm, MissingColumnIsModelError) {
  const Reference r = reference_data();
  const GlmModel m = fit_glm(r.data, r.schema);
  Dataset d({0}, {1.0});
  d.add_numeric("x", {0.5});
  EXPECT_THROW(predict_glm(m, d), ModelError);
}

TEST(Glm, DevianceAgreesWithUnitDeviance) {
  Rng rng(8);
  Dataset d = [&] {
    std::vector<int> y;
    std::vector<double> w;
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) {
      x.push_back(rng.uniform());
      w.push_back(0.2 + rng.uniform());
      y.push_back(rng.poisson(w.back() * std::exp(-0.5 + x.back())));
    }
    Dataset out(std::move(y), std::move(w));
    out.add_numeric("x", std::move(x));
    return out;
  }();
  const GlmModel m = fit_glm(d, schema_of({{"x", FeatureKind::kNumeric}}));
  const auto mu = predict_glm(m, d);
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) total += unit_deviance(d.y()[i], mu[i], 0.0);
  EXPECT_NEAR(m.deviance, total, 1e-9 * total);
  EXPECT_NEAR(poisson_deviance(d.y(), mu), total, 1e-9 * total);
  EXPECT_NEAR(m.coefficients[1], 1.0, 0.2);
}

TEST(Glm, ZeroCoefficientsGiveExposure) {
  const Reference r = reference_data();
  GlmModel m = fit_glm(r.data, r.schema);
  for (double& b : m.coefficients) b = 0.0;
  const auto mu = predict_glm(m, r.data);
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_DOUBLE_EQ(mu[i], r.data.w()[i]);
}

TEST(Glm, InterceptOnlyDevianceIsTheNullDeviance) {
  const Reference r = reference_data();
  const GlmModel m = fit_glm(r.data, schema_of({}));
  std::vector<ZipParams> params;
  for (double mu : predict_glm(m, r.data)) params.push_back({mu, 0.0});
  const EvalReport report = evaluate(r.data.y(), r.data.w(), params, false);
  EXPECT_NEAR(report.mean_deviance, report.null_deviance, 1e-14);
  EXPECT_NEAR(report.pseudo_r2, 0.0, 1e-13);
}

}  // namespace
}  // namespace zipboost
