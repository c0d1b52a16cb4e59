#include "zipboost/zip_distribution.h"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

namespace zipboost {

double poisson_log_pmf(int y, double mu) {
  if (y < 0) return -std::numeric_limits<double>::infinity();
  if (mu <= 0.0) return y == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return y * std::log(mu) - mu - std::lgamma(y + 1.0);
}

double poisson_pmf(int y, double mu) { return std::exp(poisson_log_pmf(y, mu)); }

double poisson_cdf(int k, double mu) {
  if (k < 0) return 0.0;
  if (mu <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(k) + 1.0, mu);
}

double zip_log_pmf(int y, double mu, double p) {
  if (y < 0) return -std::numeric_limits<double>::infinity();
  if (y == 0) return std::log(p + (1.0 - p) * std::exp(-mu));
  return std::log1p(-p) + poisson_log_pmf(y, mu);
}

double zip_pmf(int y, double mu, double p) { return std::exp(zip_log_pmf(y, mu, p)); }

double zip_cdf(int k, double mu, double p) {
  if (k < 0) return 0.0;
  return p + (1.0 - p) * poisson_cdf(k, mu);
}

}  // namespace zipboost
