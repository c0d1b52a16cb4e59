#ifndef ZIPBOOST_TARGET_STAT_H_
#define ZIPBOOST_TARGET_STAT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipboost/dataset.h"

namespace zipboost {

struct CategoryStats {
  double response_sum = 0.0;
  double count = 0.0;

  bool operator==(const CategoryStats&) const = default;
};

// Ordered target statistic for a high-cardinality categorical feature:
//
//   x̂ = (Σ_{j in D, cat_j = cat} y_j + a·prior) / (#{j in D, cat_j = cat} + a)
//
// While fitting, D is the set of rows preceding the current row under a
// seeded random permutation, so a row never sees its own response. After
// fitting, D is the whole training set. The prior is total claims divided by
// total exposure.
class TargetStatEncoder {
 public:
  struct Fitted;

  TargetStatEncoder() = default;
  TargetStatEncoder(double prior, double smoothing, std::map<std::string, CategoryStats> stats)
      : prior_(prior), smoothing_(smoothing), stats_(std::move(stats)) {}

  static Fitted fit(const CategoricalColumn& column, std::span<const int> y,
                    std::span<const double> w, double smoothing, std::uint64_t seed);

  // Full-data statistic; categories never seen in training map to the prior.
  double encode(std::string_view category) const;

  double prior() const { return prior_; }
  double smoothing() const { return smoothing_; }
  const std::map<std::string, CategoryStats>& stats() const { return stats_; }

  // The smoothed mean itself. An empty conditioning set with a = 0 yields the prior.
  static double statistic(double response_sum, double count, double smoothing, double prior);

  bool operator==(const TargetStatEncoder&) const = default;

 private:
  double prior_ = 0.0;
  double smoothing_ = 1.0;
  std::map<std::string, CategoryStats> stats_;
};

struct TargetStatEncoder::Fitted {
  std::vector<double> encoded;  // ordered (leak-free) training encoding
  TargetStatEncoder encoder;
};

}  // namespace zipboost

#endif  // ZIPBOOST_TARGET_STAT_H_
