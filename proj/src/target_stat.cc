#include "zipboost/target_stat.h"

#include "zipboost/error.h"
#include "zipboost/random.h"

namespace zipboost {

double TargetStatEncoder::statistic(double response_sum, double count, double smoothing,
                                    double prior) {
  const double denom = count + smoothing;
  if (denom <= 0.0) return prior;
  return (response_sum + smoothing * prior) / denom;
}

TargetStatEncoder::Fitted TargetStatEncoder::fit(const CategoricalColumn& column,
                                                 std::span<const int> y,
                                                 std::span<const double> w, double smoothing,
                                                 std::uint64_t seed) {
  const std::size_t n = column.codes.size();
  if (y.size() != n || w.size() != n) {
    throw SchemaError("target statistic: column and response lengths differ");
  }
  if (!(smoothing >= 0.0)) throw SchemaError("target statistic: smoothing must be nonnegative");

  double total_y = 0.0;
  double total_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total_y += y[i];
    total_w += w[i];
  }
  const double prior = total_w > 0.0 ? total_y / total_w : 0.0;

  Fitted out;
  out.encoded.resize(n);
  std::vector<CategoryStats> running(column.levels.size());
  for (std::size_t row : random_permutation(n, seed)) {
    CategoryStats& s = running[column.codes[row]];
    out.encoded[row] = statistic(s.response_sum, s.count, smoothing, prior);
    s.response_sum += y[row];
    s.count += 1.0;
  }

  std::map<std::string, CategoryStats> stats;
  for (std::size_t c = 0; c < column.levels.size(); ++c) {
    if (running[c].count > 0.0) stats.emplace(column.levels[c], running[c]);
  }
  out.encoder = TargetStatEncoder(prior, smoothing, std::move(stats));
  return out;
}

double TargetStatEncoder::encode(std::string_view category) const {
  auto it = stats_.find(std::string(category));
  if (it == stats_.end()) return prior_;
  return statistic(it->second.response_sum, it->second.count, smoothing_, prior_);
}

}  // namespace zipboost
