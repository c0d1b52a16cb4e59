#include "zipboost/glm.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "zipboost/error.h"
#include "zipboost/log.h"

namespace zipboost {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

std::vector<std::string> sorted_levels(const CategoricalColumn& column) {
  std::vector<std::string> levels = column.levels;
  std::sort(levels.begin(), levels.end());
  return levels;
}

// Design matrix for `data` under the model's terms. Unseen categorical levels
// get all-zero indicators, i.e. the reference level.
Matrix design(const GlmModel& model, const Dataset& data) {
  const std::size_t n = data.n_rows();
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model.terms.size()));
  x.col(0).setOnes();

  std::vector<std::string> missing;
  for (const auto& f : model.schema.features) {
    const FeatureData* col = data.find(f.name);
    const bool ok = col && (f.kind == FeatureKind::kNumeric
                                ? std::holds_alternative<NumericColumn>(*col)
                                : std::holds_alternative<CategoricalColumn>(*col));
    if (!ok) missing.push_back(f.name);
  }
  if (!missing.empty()) {
    std::string msg = "data is missing model columns:";
    for (const auto& m : missing) msg += " " + m;
    throw ModelError(msg);
  }

  std::size_t ref = 0;
  for (const auto& f : model.schema.features) {
    if (f.kind != FeatureKind::kCategorical) continue;
    const auto& column = data.categorical(f.name);
    std::set<std::string> known;
    for (const auto& t : model.terms) {
      if (t.source == f.name) known.insert(t.level);
    }
    const std::string& reference = model.reference_levels[ref++];
    std::vector<std::string> unseen;
    for (const auto& level : column.levels) {
      if (level != reference && !known.contains(level)) unseen.push_back(level);
    }
    if (!unseen.empty()) {
      std::string msg = "feature " + f.name + ": unseen levels mapped to reference level '" +
                        reference + "':";
      for (const auto& u : unseen) msg += " " + u;
      warn(msg);
    }
  }

  for (std::size_t j = 1; j < model.terms.size(); ++j) {
    const GlmTerm& term = model.terms[j];
    const auto jj = static_cast<Eigen::Index>(j);
    if (term.level.empty()) {
      const auto& values = data.numeric(term.source).values;
      for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i), jj) = values[i];
    } else {
      const auto& column = data.categorical(term.source);
      const auto it = column.lookup.find(term.level);
      if (it == column.lookup.end()) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (column.codes[i] == it->second) x(static_cast<Eigen::Index>(i), jj) = 1.0;
      }
    }
  }
  return x;
}

void check_rank(const Matrix& x, const std::vector<GlmTerm>& terms) {
  // Scale columns so the rank threshold does not depend on units.
  Matrix scaled = x;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double norm = scaled.col(j).norm();
    if (norm > 0) scaled.col(j) /= norm;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == x.cols()) return;
  std::string msg = "design matrix is rank deficient; collinear columns:";
  std::vector<std::string> dropped;
  for (Eigen::Index k = rank; k < x.cols(); ++k) {
    dropped.push_back(terms[static_cast<std::size_t>(qr.colsPermutation().indices()(k))].name);
  }
  std::sort(dropped.begin(), dropped.end());
  for (const auto& d : dropped) msg += " " + d;
  throw SchemaError(msg);
}

double deviance_of(std::span<const int> y, const Vector& mu) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double m = mu(static_cast<Eigen::Index>(i));
    const double yi = y[i];
    total += 2.0 * ((yi > 0 ? yi * std::log(yi / m) : 0.0) - (yi - m));
  }
  return total;
}

Vector mean_of(const Matrix& x, const Vector& beta, const Vector& offset) {
  Vector eta = x * beta + offset;
  return eta.array().min(700.0).exp().matrix();
}

}  // namespace

double poisson_deviance(std::span<const int> y, std::span<const double> mu) {
  Vector m(static_cast<Eigen::Index>(mu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) m(static_cast<Eigen::Index>(i)) = mu[i];
  return deviance_of(y, m);
}

GlmModel fit_glm(const Dataset& data, const Schema& schema, const GlmOptions& options) {
  schema.validate();
  if (data.n_rows() == 0) throw std::invalid_argument("cannot fit a GLM to an empty dataset");
  if (data.total_claims() == 0.0) {
    warn("all claim counts are zero; the GLM intercept diverges to -infinity");
  }

  GlmModel model;
  model.schema = schema;
  model.terms.push_back({"(Intercept)", "", ""});
  for (const auto& f : schema.features) {
    if (f.kind == FeatureKind::kNumeric) {
      model.terms.push_back({f.name, f.name, ""});
      continue;
    }
    const auto levels = sorted_levels(data.categorical(f.name));
    if (levels.empty()) throw SchemaError("categorical feature " + f.name + " has no levels");
    model.reference_levels.push_back(levels.front());
    for (std::size_t k = 1; k < levels.size(); ++k) {
      model.terms.push_back({f.name + "=" + levels[k], f.name, levels[k]});
    }
  }

  const Matrix x = design(model, data);
  check_rank(x, model.terms);

  const auto y = data.y();
  const auto w = data.w();
  const auto n = static_cast<Eigen::Index>(data.n_rows());
  Vector yv(n), offset(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    yv(i) = y[static_cast<std::size_t>(i)];
    offset(i) = std::log(w[static_cast<std::size_t>(i)]);
  }

  Vector beta = Vector::Zero(x.cols());
  const double rate = data.total_claims() / data.total_exposure();
  beta(0) = std::log(std::max(rate, 1e-10));
  Vector mu = mean_of(x, beta, offset);
  double deviance = deviance_of(y, mu);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    model.iterations = iter;
    // Newton step: (X'WX) delta = X'(y - mu) with W = diag(mu).
    const Matrix xtwx = x.transpose() * mu.asDiagonal() * x;
    const Vector score = x.transpose() * (yv - mu);
    Vector delta = xtwx.ldlt().solve(score);

    double step = 1.0;
    Vector candidate = beta + delta;
    Vector cand_mu = mean_of(x, candidate, offset);
    double cand_dev = deviance_of(y, cand_mu);
    // Increases at rounding level near the optimum do not trigger halving.
    const double allowed = deviance + 1e-10 * (1.0 + std::fabs(deviance));
    for (int halving = 0; halving < 30 && !(cand_dev <= allowed); ++halving) {
      step *= 0.5;
      candidate = beta + step * delta;
      cand_mu = mean_of(x, candidate, offset);
      cand_dev = deviance_of(y, cand_mu);
    }
    const double change = (candidate - beta).cwiseAbs().maxCoeff();
    beta = candidate;
    mu = cand_mu;
    deviance = cand_dev;
    if (change < options.tolerance) {
      model.converged = true;
      break;
    }
  }
  if (!model.converged) {
    warn("IRLS did not converge in " + std::to_string(options.max_iterations) + " iterations");
  }
  model.coefficients.assign(beta.data(), beta.data() + beta.size());
  model.deviance = deviance;
  return model;
}

std::vector<double> predict_glm(const GlmModel& model, const Dataset& data) {
  const Matrix x = design(model, data);
  Vector beta(static_cast<Eigen::Index>(model.coefficients.size()));
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
    beta(static_cast<Eigen::Index>(j)) = model.coefficients[j];
  }
  const Vector eta = x * beta;
  const auto w = data.w();
  std::vector<double> mu(data.n_rows());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = std::exp(std::min(eta(static_cast<Eigen::Index>(i)) + std::log(w[i]), 700.0));
  }
  return mu;
}

}  // namespace zipboost
