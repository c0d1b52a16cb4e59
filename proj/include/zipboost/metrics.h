#ifndef ZIPBOOST_METRICS_H_
#define ZIPBOOST_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "zipboost/losses.h"

namespace zipboost {

// Probabilities are clamped to at least this before logs and normal quantiles.
inline constexpr double kProbabilityFloor = 1e-12;

// Unit deviance of a ZIP fit (p = 0 for Poisson models):
//   y = 0:  -2 ln(p + (1-p) e^-mu)
//   y >= 1: 2 (y ln y - y - ln(1-p) - y ln mu + mu)
// Returns +inf when p = 1 and y >= 1.
double unit_deviance(int y, double mu, double p);

double mean_deviance(std::span<const int> y, std::span<const ZipParams> params);

// Intercept-only reference: mu_i = w_i * (sum y / sum w) with p = 0.5 for
// zero-inflated comparisons and p = 0 for Poisson ones.
std::vector<ZipParams> null_model(std::span<const int> y, std::span<const double> w,
                                  bool zero_inflated);

// 1 - D_model / D_null. Throws std::domain_error when D_null is 0.
double pseudo_r2(double model_deviance, double null_deviance);

// Full normalized per-row log-likelihoods ln P(y_i | mu_i, p_i).
std::vector<double> log_likelihoods(std::span<const int> y, std::span<const ZipParams> params);

struct EvalReport {
  double mean_deviance = 0.0;
  double null_deviance = 0.0;
  double pseudo_r2 = 0.0;  // NaN when the null deviance is zero
  std::size_t n = 0;
  bool zero_inflated = false;
  bool infinite_deviance = false;  // some row had p = 1 with y >= 1
  std::vector<double> loglik;
};

EvalReport evaluate(std::span<const int> y, std::span<const double> w,
                    std::span<const ZipParams> params, bool zero_inflated);

enum class VuongPreference { kFirst, kSecond, kInconclusive };
std::string_view to_string(VuongPreference preference);

struct VuongResult {
  double statistic = 0.0;
  double p_value = 1.0;  // two-sided
  VuongPreference preferred = VuongPreference::kInconclusive;
};

// Vuong's non-nested test on m_i = loglik1_i - loglik2_i with the population
// (1/n) variance. |V| > 1.96 picks a model. Throws std::domain_error when all
// m_i are equal.
VuongResult vuong(std::span<const double> loglik1, std::span<const double> loglik2);

double normal_cdf(double x);
double normal_quantile(double probability);

// Randomized quantile residual: Φ⁻¹(F(y-1) + u·P(y)) under ZIP(mu, p),
// with the argument clamped to [1e-12, 1 - 1e-12].
double rqr(int y, double mu, double p, double u);

// One residual per row; the uniforms come from a seeded stream.
std::vector<double> rqr_sample(std::span<const int> y, std::span<const ZipParams> params,
                               std::uint64_t seed);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against N(0, 1).
KsResult ks_test_normal(std::vector<double> sample);

}  // namespace zipboost

#endif  // ZIPBOOST_METRICS_H_
