#ifndef ZIPBOOST_ZIP_DISTRIBUTION_H_
#define ZIPBOOST_ZIP_DISTRIBUTION_H_

namespace zipboost {

// Full, normalized Poisson and zero-inflated Poisson probabilities
// (ln y! included). p = 0 gives the plain Poisson.

double poisson_log_pmf(int y, double mu);
double poisson_pmf(int y, double mu);
// P(Y <= k); 0 for k < 0.
double poisson_cdf(int k, double mu);

double zip_log_pmf(int y, double mu, double p);
double zip_pmf(int y, double mu, double p);
// P(Y <= k) under ZIP(mu, p).
double zip_cdf(int k, double mu, double p);

}  // namespace zipboost

#endif  // ZIPBOOST_ZIP_DISTRIBUTION_H_
