#ifndef ZIPBOOST_GLM_H_
#define ZIPBOOST_GLM_H_

#include <string>
#include <vector>

#include "zipboost/dataset.h"
#include "zipboost/schema.h"

namespace zipboost {

// One column of the GLM design matrix. Numeric features enter as-is;
// categoricals are one-hot coded against their alphabetically first level.
struct GlmTerm {
  std::string name;    // "(Intercept)", "VehAge" or "Area=B"
  std::string source;  // empty for the intercept
  std::string level;   // categorical level, empty otherwise

  bool operator==(const GlmTerm&) const = default;
};

// Poisson regression with log link and ln(w) offset.
struct GlmModel {
  Schema schema;
  std::vector<GlmTerm> terms;
  std::vector<double> coefficients;  // aligned with terms; terms[0] is the intercept
  // Reference (dropped) level of each categorical feature, in schema order.
  std::vector<std::string> reference_levels;
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;  // total Poisson deviance on the training data

  bool operator==(const GlmModel&) const = default;
};

struct GlmOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;  // on the largest absolute coefficient update
};

// Fits by iteratively reweighted least squares with step-halving whenever
// the deviance increases. Throws SchemaError naming the collinear columns if
// the design is rank deficient. Non-convergence is reported through
// `converged`, not an exception.
GlmModel fit_glm(const Dataset& data, const Schema& schema, const GlmOptions& options = {});

// mu_i = w_i exp(x_i·beta). Categorical levels unseen in training fall back to
// the reference level with a warning. Throws ModelError on missing columns.
std::vector<double> predict_glm(const GlmModel& model, const Dataset& data);

// Total Poisson deviance sum_i 2 [y ln(y/mu) - (y - mu)].
double poisson_deviance(std::span<const int> y, std::span<const double> mu);

}  // namespace zipboost

#endif  // ZIPBOOST_GLM_H_
