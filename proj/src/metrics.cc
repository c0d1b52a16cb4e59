#include "zipboost/metrics.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "zipboost/log.h"
#include "zipboost/random.h"
#include "zipboost/zip_distribution.h"

namespace zipboost {

double unit_deviance(int y, double mu, double p) {
  if (y == 0) {
    return -2.0 * std::log(std::max(p + (1.0 - p) * std::exp(-mu), kProbabilityFloor));
  }
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  const double yd = y;
  return 2.0 * (yd * std::log(yd) - yd - std::log1p(-p) - yd * std::log(mu) + mu);
}

double mean_deviance(std::span<const int> y, std::span<const ZipParams> params) {
  if (y.size() != params.size()) throw std::invalid_argument("mean_deviance: length mismatch");
  if (y.empty()) throw std::invalid_argument("mean_deviance: no rows");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total += unit_deviance(y[i], params[i].mu, params[i].p);
  return total / static_cast<double>(y.size());
}

std::vector<ZipParams> null_model(std::span<const int> y, std::span<const double> w,
                                  bool zero_inflated) {
  if (y.size() != w.size()) throw std::invalid_argument("null_model: length mismatch");
  double sy = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sy += y[i];
    sw += w[i];
  }
  const double rate = sy / sw;
  const double p = zero_inflated ? 0.5 : 0.0;
  std::vector<ZipParams> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = {w[i] * rate, p};
  return out;
}

double pseudo_r2(double model_deviance, double null_deviance) {
  if (null_deviance == 0.0) {
    throw std::domain_error("pseudo R2 undefined: null deviance is zero");
  }
  return 1.0 - model_deviance / null_deviance;
}

std::vector<double> log_likelihoods(std::span<const int> y, std::span<const ZipParams> params) {
  if (y.size() != params.size()) throw std::invalid_argument("log_likelihoods: length mismatch");
  const double floor = std::log(kProbabilityFloor);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double ll = zip_log_pmf(y[i], params[i].mu, params[i].p);
    out[i] = std::isnan(ll) ? floor : std::max(ll, floor);
  }
  return out;
}

EvalReport evaluate(std::span<const int> y, std::span<const double> w,
                    std::span<const ZipParams> params, bool zero_inflated) {
  EvalReport report;
  report.n = y.size();
  report.zero_inflated = zero_inflated;
  report.mean_deviance = mean_deviance(y, params);
  report.infinite_deviance = std::isinf(report.mean_deviance);
  const auto null = null_model(y, w, zero_inflated);
  report.null_deviance = mean_deviance(y, null);
  if (report.null_deviance > 0.0) {
    report.pseudo_r2 = pseudo_r2(report.mean_deviance, report.null_deviance);
  } else {
    warn("null deviance is zero; pseudo-R2 is undefined");
    report.pseudo_r2 = std::numeric_limits<double>::quiet_NaN();
  }
  report.loglik = log_likelihoods(y, params);
  return report;
}

std::string_view to_string(VuongPreference preference) {
  switch (preference) {
    case VuongPreference::kFirst: return "first";
    case VuongPreference::kSecond: return "second";
    case VuongPreference::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double normal_cdf(double x) {
  static const boost::math::normal standard;
  return boost::math::cdf(standard, x);
}

double normal_quantile(double probability) {
  static const boost::math::normal standard;
  return boost::math::quantile(standard, probability);
}

VuongResult vuong(std::span<const double> loglik1, std::span<const double> loglik2) {
  if (loglik1.size() != loglik2.size()) throw std::invalid_argument("vuong: length mismatch");
  const std::size_t n = loglik1.size();
  if (n == 0) throw std::invalid_argument("vuong: no rows");
  std::vector<double> m(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = loglik1[i] - loglik2[i];
    mean += m[i];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : m) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (!(var > 0.0)) throw std::domain_error("vuong: models indistinguishable or identical");

  VuongResult out;
  out.statistic = std::sqrt(static_cast<double>(n)) * mean / std::sqrt(var);
  out.p_value = 2.0 * normal_cdf(-std::fabs(out.statistic));
  if (out.statistic > 1.96) {
    out.preferred = VuongPreference::kFirst;
  } else if (out.statistic < -1.96) {
    out.preferred = VuongPreference::kSecond;
  }
  return out;
}

double rqr(int y, double mu, double p, double u) {
  const double below = zip_cdf(y - 1, mu, p);
  const double at = y == 0 ? p + (1.0 - p) * std::exp(-mu) : (1.0 - p) * poisson_pmf(y, mu);
  const double prob = std::clamp(below + u * at, kProbabilityFloor, 1.0 - kProbabilityFloor);
  return normal_quantile(prob);
}

std::vector<double> rqr_sample(std::span<const int> y, std::span<const ZipParams> params,
                               std::uint64_t seed) {
  if (y.size() != params.size()) throw std::invalid_argument("rqr_sample: length mismatch");
  Rng rng(seed);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = rqr(y[i], params[i].mu, params[i].p, rng.uniform_open());
  }
  return out;
}

KsResult ks_test_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks_test_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  // Asymptotic Kolmogorov tail with Stephens' small-sample correction.
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double p = 0.0;
  if (lambda < 0.2) {
    p = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::fabs(term) < 1e-16) break;
      sign = -sign;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
  }
  return {d, p};
}

}  // namespace zipboost
