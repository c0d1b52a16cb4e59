#ifndef ZIPBOOST_EXPLAIN_H_
#define ZIPBOOST_EXPLAIN_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zipboost/booster.h"
#include "zipboost/tree.h"

namespace zipboost {

struct ImportanceTable {
  std::vector<std::string> features;
  std::vector<double> raw;         // unnormalized split scores
  std::vector<double> importance;  // raw scaled to sum to 100; all zero if nothing split
};

struct InteractionPair {
  std::size_t first = 0;  // first < second
  std::size_t second = 0;
  double strength = 0.0;
};

struct InteractionTable {
  std::vector<std::string> features;
  std::vector<InteractionPair> pairs;  // every unordered pair, (0,1), (0,2), ..., (1,2), ...

  double strength(std::size_t a, std::size_t b) const;
};

// For each split with children (v1, c1), (v2, c2) and m the count-weighted
// mean of v1 and v2, the split feature earns (v1-m)^2 c1 + (v2-m)^2 c2.
ImportanceTable feature_importance(std::span<const Tree> trees,
                                   const std::vector<std::string>& features);

// For every tree that splits on both features of a pair, the leaves whose
// root path uses both features form the combined set and the leaves whose
// path uses exactly one form the separate set; the tree contributes
// |sum(combined) - sum(separate)| over leaf values scaled by `scale`.
InteractionTable interaction_strength(std::span<const Tree> trees,
                                      const std::vector<std::string>& features,
                                      double scale = 1.0);

// Tables for the mean ensemble and, for ZIPB2, the logit ensemble. Leaf
// values enter interaction strengths multiplied by the learning rate.
struct Explanation {
  ImportanceTable importance_po;
  InteractionTable interaction_po;
  std::optional<ImportanceTable> importance_logit;
  std::optional<InteractionTable> interaction_logit;
};
Explanation explain(const Model& model);

// Indices of the k largest entries, descending; equal values keep index order.
std::vector<std::size_t> top_k(const ImportanceTable& table, std::size_t k);
std::vector<std::size_t> top_k(const InteractionTable& table, std::size_t k);

}  // namespace zipboost

#endif  // ZIPBOOST_EXPLAIN_H_
