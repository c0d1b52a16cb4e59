#ifndef ZIPBOOST_LOSSES_H_
#define ZIPBOOST_LOSSES_H_

#include <string_view>

namespace zipboost {

// Objectives, expressed as negative log-likelihoods in the raw score F.
// The Poisson mean is always mu = w * exp(F): exposure enters as an offset
// and never through the score. Constant ln(y!) terms are dropped.
//
//   kPoisson  y ~ Poisson(mu)
//   kZipb1    y ~ ZIP(mu, p) with p = 1 / (1 + mu^gamma), one score
//   kZipb2    y ~ ZIP(mu, p) with logit(p) a second, independent score
enum class LossKind { kPoisson, kZipb1, kZipb2 };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view text);

inline constexpr double kDefaultHessianFloor = 1e-6;

// Scores are clamped to [-kScoreClamp, kScoreClamp] before exponentiation.
inline constexpr double kScoreClamp = 30.0;

struct LossSpec {
  LossKind kind = LossKind::kPoisson;
  double gamma = 1.0;  // ZIPB1 only
  double hessian_floor = kDefaultHessianFloor;

  // Throws std::invalid_argument on gamma <= 0 (ZIPB1) or hessian_floor <= 0.
  void validate() const;

  bool operator==(const LossSpec&) const = default;
};

struct GradHess {
  double g = 0.0;
  double h = 0.0;
};

struct ZipParams {
  double mu = 0.0;
  double p = 0.0;

  double expected_count() const { return (1.0 - p) * mu; }
  double variance() const { return mu * (1.0 - p) * (1.0 + p * mu); }
};

double clamp_score(double score);
// w * exp(clamp(F)).
double mean_from_score(double score, double exposure);
double sigmoid(double x);
// ln(1 + e^x) without overflow.
double softplus(double x);

double poisson_nll(int y, double score, double exposure);
GradHess poisson_grad_hess(int y, double score, double exposure,
                           double hessian_floor = kDefaultHessianFloor);

// 1 / (1 + mu^gamma), evaluated as sigmoid(-gamma ln mu).
double zipb1_p_of_mu(double mu, double gamma);
double zipb1_nll(int y, double score, double exposure, double gamma);
// Unfloored analytic derivatives; the y = 0 curvature can be negative.
GradHess zipb1_derivatives(int y, double score, double exposure, double gamma);
GradHess zipb1_grad_hess(int y, double score, double exposure, double gamma,
                         double hessian_floor = kDefaultHessianFloor);

double zipb2_nll(int y, double score_po, double score_logit, double exposure);
// Derivatives in the mean direction with the logit score held fixed.
GradHess zipb2_derivatives_po(int y, double score_po, double score_logit, double exposure);
GradHess zipb2_grad_hess_po(int y, double score_po, double score_logit, double exposure,
                            double hessian_floor = kDefaultHessianFloor);
// Derivatives in the logit direction with the mean score held fixed.
GradHess zipb2_derivatives_logit(int y, double score_po, double score_logit, double exposure);
GradHess zipb2_grad_hess_logit(int y, double score_po, double score_logit, double exposure,
                               double hessian_floor = kDefaultHessianFloor);

// Loss-level dispatch for single-score objectives (Poisson, ZIPB1).
double single_score_nll(const LossSpec& loss, int y, double score, double exposure);
GradHess single_score_grad_hess(const LossSpec& loss, int y, double score, double exposure);

}  // namespace zipboost

#endif  // ZIPBOOST_LOSSES_H_
