#include "zipboost/booster.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zipboost/log.h"
#include "zipboost/random.h"
#include "zipboost/tree_builder.h"

namespace zipboost {

void BoostConfig::validate(LossKind kind) const {
  if (num_trees < 1) throw std::invalid_argument("num_trees must be at least 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw std::invalid_argument("learning_rate must lie in (0, 1]");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be nonnegative");
  }
  if (kind == LossKind::kZipb1 && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw std::invalid_argument("gamma must be positive for zipb1");
  }
  if (max_depth < 0) throw std::invalid_argument("max_depth must be nonnegative");
  if (!(min_child_hessian >= 0.0)) throw std::invalid_argument("min_child_hessian must be >= 0");
  if (early_stopping_rounds < 0) throw std::invalid_argument("early_stopping_rounds must be >= 0");
}

namespace {

TreeParams tree_params(const BoostConfig& config) {
  return {config.lambda, config.max_depth, config.min_child_hessian};
}

void check_training_data(const Dataset& data) {
  if (data.n_rows() == 0) throw std::invalid_argument("cannot train on an empty dataset");
  if (!data.has_response()) throw std::invalid_argument("training data has no response column");
  if (data.total_claims() == 0.0) {
    warn("all claim counts are zero; fitted means will collapse toward 0 "
         "(and zipb1 inflation toward 1)");
  }
}

double initial_score(const Dataset& data, const BoostConfig& config) {
  if (!config.init_from_mean_rate) return 0.0;
  const double claims = data.total_claims();
  if (claims <= 0.0) return -kScoreClamp;
  return std::log(claims / data.total_exposure());
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Tracks validation loss and decides when to stop.
class EarlyStopper {
 public:
  explicit EarlyStopper(int rounds) : rounds_(rounds) {}

  bool update(int iteration, double loss) {
    if (loss < best_loss_) {
      best_loss_ = loss;
      best_iteration_ = iteration;
    }
    return rounds_ > 0 && iteration - best_iteration_ >= rounds_;
  }
  int best_iteration() const { return best_iteration_; }

 private:
  int rounds_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  int best_iteration_ = 0;
};

void truncate(Model& model, int iterations) {
  model.trees_po.resize(iterations);
  if (!model.trees_logit.empty()) model.trees_logit.resize(iterations);
  model.training_loss.resize(iterations + 1);
}

}  // namespace

Model fit(const Dataset& data, const Schema& schema, const LossSpec& loss,
          const BoostConfig& config, const Dataset* validation) {
  loss.validate();
  if (loss.kind == LossKind::kZipb2) {
    throw std::invalid_argument("fit: zipb2 has two ensembles; use fit_zipb2");
  }
  config.validate(loss.kind);
  check_training_data(data);

  auto fitted = FeatureTransform::fit(data, schema);
  Model model;
  model.loss = loss;
  model.config = config;
  model.base_score_po = initial_score(data, config);
  model.transform = std::move(fitted.transform);
  const BinnedMatrix& binned = fitted.binned;

  const std::size_t n = data.n_rows();
  const auto y = data.y();
  const auto w = data.w();
  std::vector<double> score(n, model.base_score_po), g(n), h(n), row_loss(n);
  std::vector<int> row_leaf;

  auto mean_loss = [&](std::span<const int> yy, std::span<const double> ww,
                       const std::vector<double>& f, std::vector<double>& buf) {
    buf.resize(f.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(f.size()); ++i) {
      buf[i] = single_score_nll(loss, yy[i], f[i], ww[i]);
    }
    return mean_of(buf);
  };
  model.training_loss.push_back(mean_loss(y, w, score, row_loss));

  BinnedMatrix valid_binned;
  std::vector<double> valid_score, valid_buf;
  const bool stopping = validation && config.early_stopping_rounds > 0;
  if (stopping) {
    valid_binned = model.transform.transform(*validation);
    valid_score.assign(validation->n_rows(), model.base_score_po);
  }
  EarlyStopper stopper(config.early_stopping_rounds);

  const TreeParams params = tree_params(config);
  const double alpha = config.learning_rate;
  for (int t = 1; t <= config.num_trees; ++t) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const GradHess d = single_score_grad_hess(loss, y[i], score[i], w[i]);
      g[i] = d.g;
      h[i] = d.h;
    }
    Tree tree = build_tree(binned, g, h, params, &row_leaf);
    for (std::size_t i = 0; i < n; ++i) score[i] += alpha * tree.node(row_leaf[i]).value;
    model.training_loss.push_back(mean_loss(y, w, score, row_loss));

    if (stopping) {
      for (std::size_t i = 0; i < valid_score.size(); ++i) {
        valid_score[i] += alpha * tree.predict(valid_binned, i);
      }
      model.trees_po.push_back(std::move(tree));
      if (stopper.update(t, mean_loss(validation->y(), validation->w(), valid_score, valid_buf))) {
        break;
      }
    } else {
      model.trees_po.push_back(std::move(tree));
    }
  }
  if (stopping) truncate(model, stopper.best_iteration());
  return model;
}

Model fit_zipb2(const Dataset& data, const Schema& schema, const BoostConfig& config,
                const Dataset* validation) {
  config.validate(LossKind::kZipb2);
  check_training_data(data);
  LossSpec loss;
  loss.kind = LossKind::kZipb2;
  loss.validate();

  auto fitted = FeatureTransform::fit(data, schema);
  Model model;
  model.loss = loss;
  model.config = config;
  model.base_score_po = initial_score(data, config);
  model.base_score_logit = 0.0;
  model.transform = std::move(fitted.transform);
  const BinnedMatrix& binned = fitted.binned;

  const std::size_t n = data.n_rows();
  const auto y = data.y();
  const auto w = data.w();
  std::vector<double> fpo(n, model.base_score_po), flogit(n, 0.0), g(n), h(n), row_loss(n);
  std::vector<int> row_leaf;

  auto mean_loss = [](std::span<const int> yy, std::span<const double> ww,
                      const std::vector<double>& po, const std::vector<double>& lg,
                      std::vector<double>& buf) {
    buf.resize(po.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(po.size()); ++i) {
      buf[i] = zipb2_nll(yy[i], po[i], lg[i], ww[i]);
    }
    return mean_of(buf);
  };
  model.training_loss.push_back(mean_loss(y, w, fpo, flogit, row_loss));

  BinnedMatrix valid_binned;
  std::vector<double> valid_po, valid_logit, valid_buf;
  const bool stopping = validation && config.early_stopping_rounds > 0;
  if (stopping) {
    valid_binned = model.transform.transform(*validation);
    valid_po.assign(validation->n_rows(), model.base_score_po);
    valid_logit.assign(validation->n_rows(), 0.0);
  }
  EarlyStopper stopper(config.early_stopping_rounds);

  const TreeParams params = tree_params(config);
  const double alpha = config.learning_rate;
  const double floor = loss.hessian_floor;
  for (int t = 1; t <= config.num_trees; ++t) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const GradHess d = zipb2_grad_hess_po(y[i], fpo[i], flogit[i], w[i], floor);
      g[i] = d.g;
      h[i] = d.h;
    }
    Tree tree_po = build_tree(binned, g, h, params, &row_leaf);
    for (std::size_t i = 0; i < n; ++i) fpo[i] += alpha * tree_po.node(row_leaf[i]).value;

#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const GradHess d = zipb2_grad_hess_logit(y[i], fpo[i], flogit[i], w[i], floor);
      g[i] = d.g;
      h[i] = d.h;
    }
    Tree tree_logit = build_tree(binned, g, h, params, &row_leaf);
    for (std::size_t i = 0; i < n; ++i) flogit[i] += alpha * tree_logit.node(row_leaf[i]).value;
    model.training_loss.push_back(mean_loss(y, w, fpo, flogit, row_loss));

    if (stopping) {
      for (std::size_t i = 0; i < valid_po.size(); ++i) {
        valid_po[i] += alpha * tree_po.predict(valid_binned, i);
        valid_logit[i] += alpha * tree_logit.predict(valid_binned, i);
      }
    }
    model.trees_po.push_back(std::move(tree_po));
    model.trees_logit.push_back(std::move(tree_logit));
    if (stopping && stopper.update(t, mean_loss(validation->y(), validation->w(), valid_po,
                                                valid_logit, valid_buf))) {
      break;
    }
  }
  if (stopping) truncate(model, stopper.best_iteration());
  return model;
}

Model train(const Dataset& data, const Schema& schema, const LossSpec& loss,
            const BoostConfig& config, const Dataset* validation) {
  if (loss.kind == LossKind::kZipb2) return fit_zipb2(data, schema, config, validation);
  return fit(data, schema, loss, config, validation);
}

Scores predict_scores(const Model& model, const BinnedMatrix& binned, int num_trees) {
  const std::size_t n = binned.n_rows();
  const std::size_t limit =
      num_trees < 0 ? model.trees_po.size()
                    : std::min<std::size_t>(static_cast<std::size_t>(num_trees), model.trees_po.size());
  const double alpha = model.learning_rate();
  const bool two = model.loss.kind == LossKind::kZipb2;
  Scores out;
  out.po.assign(n, model.base_score_po);
  if (two) out.logit.assign(n, model.base_score_logit);
  // Rows are processed in blocks, tree by tree, so one tree and the block's
  // bin codes stay in cache.
  constexpr std::size_t kBlock = 512;
  const long blocks = static_cast<long>((n + kBlock - 1) / kBlock);
  auto apply = [&](const std::vector<Tree>& trees, std::vector<double>& score, std::size_t lo, std::size_t hi) {
    for (std::size_t t = 0; t < limit; ++t) {
      const Tree& tree = trees[t];
      for (std::size_t i = lo; i < hi; ++i) score[i] += alpha * tree.predict(binned, i);
    }
  };
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    apply(model.trees_po, out.po, lo, hi);
    if (two) apply(model.trees_logit, out.logit, lo, hi);
  }
  return out;
}

ZipParams params_from_scores(const Model& model, double score_po, double score_logit,
                             double exposure) {
  const double mu = mean_from_score(score_po, exposure);
  switch (model.loss.kind) {
    case LossKind::kPoisson: return {mu, 0.0};
    case LossKind::kZipb1: return {mu, zipb1_p_of_mu(mu, model.loss.gamma)};
    case LossKind::kZipb2: return {mu, sigmoid(clamp_score(score_logit))};
  }
  return {mu, 0.0};
}

std::vector<ZipParams> predict(const Model& model, const Dataset& data) {
  const BinnedMatrix binned = model.transform.transform(data);
  const Scores scores = predict_scores(model, binned);
  const auto w = data.w();
  std::vector<ZipParams> out(data.n_rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = params_from_scores(model, scores.po[i], scores.logit.empty() ? 0.0 : scores.logit[i],
                                w[i]);
  }
  return out;
}

HoldoutSplit holdout_split(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("holdout fraction must lie in [0, 1)");
  }
  const auto perm = random_permutation(n, derive_seed(seed, "split"));
  const std::size_t n_test = static_cast<std::size_t>(std::llround(test_fraction * n));
  HoldoutSplit out;
  out.test.assign(perm.begin(), perm.begin() + n_test);
  out.train.assign(perm.begin() + n_test, perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(folds)) throw std::invalid_argument("fewer rows than folds");
  const auto perm = random_permutation(n, derive_seed(seed, "folds"));
  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) out[perm[k]] = static_cast<int>(k % folds);
  return out;
}

CvResult cross_validate(const Dataset& data, const Schema& schema, const LossSpec& loss,
                        std::span<const BoostConfig> grid, int folds, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("cross_validate: empty grid");
  const auto fold_of = assign_folds(data.n_rows(), folds, seed);

  std::vector<Dataset> train_parts, valid_parts;
  for (int k = 0; k < folds; ++k) {
    std::vector<std::size_t> tr, va;
    for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == k ? va : tr).push_back(i);
    train_parts.push_back(data.subset(tr));
    valid_parts.push_back(data.subset(va));
    if (valid_parts.back().total_claims() == 0.0) {
      warn("fold " + std::to_string(k) + " has no rows with a positive claim count");
    }
  }

  CvResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    CvCandidate cand;
    cand.config = grid[c];
    LossSpec spec = loss;
    if (spec.kind == LossKind::kZipb1) spec.gamma = grid[c].gamma;
    double total = 0.0;
    for (int k = 0; k < folds; ++k) {
      const Model model = train(train_parts[k], schema, spec, grid[c]);
      const auto params = predict(model, valid_parts[k]);
      EvalReport report = evaluate(valid_parts[k].y(), valid_parts[k].w(), params,
                                   model.zero_inflated());
      report.loglik.clear();
      total += report.mean_deviance;
      cand.folds.push_back(std::move(report));
    }
    cand.mean_deviance = total / folds;
    if (cand.mean_deviance < best) {
      best = cand.mean_deviance;
      result.best_index = c;
    }
    result.candidates.push_back(std::move(cand));
  }
  result.best = grid[result.best_index];
  return result;
}

std::vector<BoostConfig> make_grid(const BoostConfig& base, std::span<const double> learning_rates,
                                   std::span<const double> lambdas,
                                   std::span<const double> gammas) {
  std::vector<double> a(learning_rates.begin(), learning_rates.end());
  std::vector<double> l(lambdas.begin(), lambdas.end());
  std::vector<double> g(gammas.begin(), gammas.end());
  if (a.empty()) a.push_back(base.learning_rate);
  if (l.empty()) l.push_back(base.lambda);
  if (g.empty()) g.push_back(base.gamma);
  std::vector<BoostConfig> out;
  for (double alpha : a) {
    for (double lambda : l) {
      for (double gamma : g) {
        BoostConfig c = base;
        c.learning_rate = alpha;
        c.lambda = lambda;
        c.gamma = gamma;
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<BoostConfig> reference_grid(LossKind kind, const BoostConfig& base) {
  static constexpr double kRates[] = {0.01, 0.05, 0.1};
  static constexpr double kLambdas[] = {0, 100, 200, 300, 400, 500};
  static constexpr double kGammas[] = {1, 5, 10, 50, 100, 500};
  if (kind == LossKind::kZipb1) return make_grid(base, kRates, kLambdas, kGammas);
  return make_grid(base, kRates, kLambdas, {});
}

}  // namespace zipboost
