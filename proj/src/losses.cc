#include "zipboost/losses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zipboost {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kPoisson: return "poisson";
    case LossKind::kZipb1: return "zipb1";
    case LossKind::kZipb2: return "zipb2";
  }
  return "poisson";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "poisson") return LossKind::kPoisson;
  if (text == "zipb1") return LossKind::kZipb1;
  if (text == "zipb2") return LossKind::kZipb2;
  throw std::invalid_argument("unknown loss '" + std::string(text) + "'");
}

void LossSpec::validate() const {
  if (kind == LossKind::kZipb1 && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw std::invalid_argument("zipb1 requires gamma > 0");
  }
  if (!(hessian_floor > 0.0)) throw std::invalid_argument("hessian_floor must be positive");
}

double clamp_score(double score) { return std::clamp(score, -kScoreClamp, kScoreClamp); }

double mean_from_score(double score, double exposure) {
  return exposure * std::exp(clamp_score(score));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

namespace {

struct MeanTerms {
  double mu;
  double log_mu;
};

MeanTerms mean_terms(double score, double exposure) {
  const double log_mu = std::log(exposure) + clamp_score(score);
  return {std::exp(log_mu), log_mu};
}

GradHess floored(GradHess d, double floor) {
  d.h = std::max(d.h, floor);
  return d;
}

// ln(e^a + e^b)
double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace

double poisson_nll(int y, double score, double exposure) {
  const auto [mu, log_mu] = mean_terms(score, exposure);
  return mu - y * log_mu;
}

GradHess poisson_grad_hess(int y, double score, double exposure, double hessian_floor) {
  const double mu = mean_from_score(score, exposure);
  return floored({mu - y, mu}, hessian_floor);
}

double zipb1_p_of_mu(double mu, double gamma) { return sigmoid(-gamma * std::log(mu)); }

// With s = gamma ln mu and a = s - mu (so mu^gamma = e^s, mu^gamma e^-mu = e^a):
//   y = 0:  L = softplus(s) - softplus(a)
//   y >= 1: L = softplus(-s) + mu - y ln mu
double zipb1_nll(int y, double score, double exposure, double gamma) {
  const auto [mu, log_mu] = mean_terms(score, exposure);
  const double s = gamma * log_mu;
  if (y == 0) return softplus(s) - softplus(s - mu);
  return softplus(-s) + mu - y * log_mu;
}

// The closed forms below are the printed derivatives with every ratio of the
// form x / (1 + x) rewritten as a sigmoid:
//   g0 = sig(a)(mu - gamma) + gamma sig(s)
//   h0 = sig(a)(mu - (gamma - mu)^2) + sig(a)^2 (gamma - mu)^2 + gamma^2 sig(s) sig(-s)
//   g1 = gamma sig(s) + mu - gamma - y
//   h1 = gamma^2 sig(s) sig(-s) + mu
GradHess zipb1_derivatives(int y, double score, double exposure, double gamma) {
  const auto [mu, log_mu] = mean_terms(score, exposure);
  const double s = gamma * log_mu;
  const double sig_s = sigmoid(s);
  const double link_curv = gamma * gamma * sig_s * sigmoid(-s);
  if (y == 0) {
    const double sig_a = sigmoid(s - mu);
    const double d = gamma - mu;
    return {sig_a * (mu - gamma) + gamma * sig_s,
            sig_a * (mu - d * d) + sig_a * sig_a * d * d + link_curv};
  }
  return {gamma * sig_s + mu - gamma - y, link_curv + mu};
}

GradHess zipb1_grad_hess(int y, double score, double exposure, double gamma,
                         double hessian_floor) {
  return floored(zipb1_derivatives(y, score, exposure, gamma), hessian_floor);
}

// p = sig(Fl), so p + (1-p) e^-mu = (e^Fl + e^-mu) / (1 + e^Fl) and 1 - p = 1 / (1 + e^Fl).
double zipb2_nll(int y, double score_po, double score_logit, double exposure) {
  const auto [mu, log_mu] = mean_terms(score_po, exposure);
  const double fl = clamp_score(score_logit);
  if (y == 0) return softplus(fl) - log_add_exp(fl, -mu);
  return softplus(fl) - y * log_mu + mu;
}

// y = 0 branch differentiates the y = 0 loss directly:
//   g = (1-p) mu e^-mu / (p + (1-p) e^-mu) = mu sig(-(mu + Fl))
//   h = g (1 - mu) + g^2
GradHess zipb2_derivatives_po(int y, double score_po, double score_logit, double exposure) {
  const double mu = mean_from_score(score_po, exposure);
  if (y == 0) {
    const double g = mu * sigmoid(-(mu + clamp_score(score_logit)));
    return {g, g * (1.0 - mu) + g * g};
  }
  return {mu - y, mu};
}

GradHess zipb2_grad_hess_po(int y, double score_po, double score_logit, double exposure,
                            double hessian_floor) {
  return floored(zipb2_derivatives_po(y, score_po, score_logit, exposure), hessian_floor);
}

GradHess zipb2_derivatives_logit(int y, double score_po, double score_logit, double exposure) {
  const double fl = clamp_score(score_logit);
  const double p = sigmoid(fl);
  const double curv = p * sigmoid(-fl);
  if (y == 0) {
    const double mu = mean_from_score(score_po, exposure);
    const double q = sigmoid(mu + fl);
    return {p - q, curv - q * sigmoid(-(mu + fl))};
  }
  return {p, curv};
}

GradHess zipb2_grad_hess_logit(int y, double score_po, double score_logit, double exposure,
                               double hessian_floor) {
  return floored(zipb2_derivatives_logit(y, score_po, score_logit, exposure), hessian_floor);
}

double single_score_nll(const LossSpec& loss, int y, double score, double exposure) {
  switch (loss.kind) {
    case LossKind::kPoisson: return poisson_nll(y, score, exposure);
    case LossKind::kZipb1: return zipb1_nll(y, score, exposure, loss.gamma);
    case LossKind::kZipb2: break;
  }
  throw std::invalid_argument("zipb2 has two scores");
}

GradHess single_score_grad_hess(const LossSpec& loss, int y, double score, double exposure) {
  switch (loss.kind) {
    case LossKind::kPoisson: return poisson_grad_hess(y, score, exposure, loss.hessian_floor);
    case LossKind::kZipb1:
      return zipb1_grad_hess(y, score, exposure, loss.gamma, loss.hessian_floor);
    case LossKind::kZipb2: break;
  }
  throw std::invalid_argument("zipb2 has two scores");
}

}  // namespace zipboost
