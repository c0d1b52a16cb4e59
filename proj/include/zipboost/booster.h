#ifndef ZIPBOOST_BOOSTER_H_
#define ZIPBOOST_BOOSTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zipboost/dataset.h"
#include "zipboost/features.h"
#include "zipboost/losses.h"
#include "zipboost/metrics.h"
#include "zipboost/schema.h"
#include "zipboost/tree.h"

namespace zipboost {

struct BoostConfig {
  int num_trees = 500;
  double learning_rate = 0.1;
  double lambda = 0.0;
  double gamma = 1.0;  // copied into the ZIPB1 LossSpec by cross_validate
  int max_depth = 8;
  double min_child_hessian = 1e-3;
  std::uint64_t seed = 0;
  // 0 disables. Needs a validation set; the model is cut back to the best
  // iteration.
  int early_stopping_rounds = 0;
  // Start from F0 = ln(sum y / sum w) instead of F0 = 0.
  bool init_from_mean_rate = false;

  // Throws std::invalid_argument on T < 1, alpha outside (0, 1], lambda < 0,
  // gamma <= 0 for ZIPB1, or a negative depth.
  void validate(LossKind kind) const;

  bool operator==(const BoostConfig&) const = default;
};

// A fitted booster. The score of a row is base_score + Σ_t α·f_t(x); ZIPB2
// models carry a second ensemble for logit(p) built in lock-step.
struct Model {
  LossSpec loss;
  BoostConfig config;
  double base_score_po = 0.0;
  double base_score_logit = 0.0;
  FeatureTransform transform;
  std::vector<Tree> trees_po;
  std::vector<Tree> trees_logit;
  // Mean training loss; entry 0 is the initial model, entry t follows tree t.
  std::vector<double> training_loss;

  double learning_rate() const { return config.learning_rate; }
  bool zero_inflated() const { return loss.kind != LossKind::kPoisson; }

  bool operator==(const Model&) const = default;
};

// Algorithm for single-score objectives (Poisson, ZIPB1): start at F = 0, then
// repeatedly fit a tree to the loss derivatives and step F += α·f.
Model fit(const Dataset& data, const Schema& schema, const LossSpec& loss,
          const BoostConfig& config, const Dataset* validation = nullptr);

// ZIPB2 coordinate descent: each iteration fits the mean-direction tree at
// the current scores, applies it, then fits the logit-direction tree with
// the updated mean score.
Model fit_zipb2(const Dataset& data, const Schema& schema, const BoostConfig& config,
                const Dataset* validation = nullptr);

// Dispatches on loss.kind.
Model train(const Dataset& data, const Schema& schema, const LossSpec& loss,
            const BoostConfig& config, const Dataset* validation = nullptr);

struct Scores {
  std::vector<double> po;
  std::vector<double> logit;  // ZIPB2 only
};

// Raw scores over a binned design; `num_trees` < 0 uses every tree.
Scores predict_scores(const Model& model, const BinnedMatrix& binned, int num_trees = -1);

ZipParams params_from_scores(const Model& model, double score_po, double score_logit,
                             double exposure);

// Poisson: (mu, 0); ZIPB1: (mu, 1/(1+mu^gamma)); ZIPB2: (mu, sigmoid(F_logit)).
std::vector<ZipParams> predict(const Model& model, const Dataset& data);

// Seeded holdout split: the test part holds round(fraction * n) rows.
struct HoldoutSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
HoldoutSplit holdout_split(std::size_t n, double test_fraction, std::uint64_t seed);

// Fold index in [0, folds) for every row, balanced to within one row.
std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed);

struct CvCandidate {
  BoostConfig config;
  std::vector<EvalReport> folds;
  double mean_deviance = 0.0;
};

struct CvResult {
  std::size_t best_index = 0;
  BoostConfig best;
  std::vector<CvCandidate> candidates;
};

// K-fold search over `grid`; the winner has the lowest mean validation
// deviance, ties resolved by grid order.
CvResult cross_validate(const Dataset& data, const Schema& schema, const LossSpec& loss,
                        std::span<const BoostConfig> grid, int folds = 3, std::uint64_t seed = 0);

// Cartesian product in (learning_rate, lambda, gamma) order. An empty gamma
// list keeps base.gamma.
std::vector<BoostConfig> make_grid(const BoostConfig& base, std::span<const double> learning_rates,
                                   std::span<const double> lambdas, std::span<const double> gammas);

// α ∈ {0.01, 0.05, 0.1}, λ ∈ {0, 100, ..., 500}, and for ZIPB1
// γ ∈ {1, 5, 10, 50, 100, 500}.
std::vector<BoostConfig> reference_grid(LossKind kind, const BoostConfig& base);

}  // namespace zipboost

#endif  // ZIPBOOST_BOOSTER_H_
