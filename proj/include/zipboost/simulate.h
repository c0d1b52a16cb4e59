#ifndef ZIPBOOST_SIMULATE_H_
#define ZIPBOOST_SIMULATE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zipboost/dataset.h"
#include "zipboost/losses.h"
#include "zipboost/schema.h"

namespace zipboost {

// Claim rate per unit exposure as a function of the simulated features.
//   const:R          rate R everywhere
//   loglinear:b0,... ln rate = b0 + b1 x1 + b2 x2 + ...
//   tree             fixed depth-2 tree on x1, x2, x3 (rates 0.3, 1, 2, 4)
struct MuSpec {
  enum class Kind { kConstant, kLogLinear, kTree };
  Kind kind = Kind::kTree;
  double rate = 1.0;
  std::vector<double> coefficients;
};

// Structural-zero probability.
//   none             p = 0
//   eq16:G           p = 1 / (1 + mu^G)
//   independent:P    p = P for every row
struct PSpec {
  enum class Kind { kNone, kLinked, kIndependent };
  Kind kind = Kind::kNone;
  double gamma = 1.0;
  double p = 0.0;
};

// Both throw std::invalid_argument on malformed text.
MuSpec parse_mu_spec(std::string_view text);
PSpec parse_p_spec(std::string_view text);
std::string to_string(const MuSpec& spec);
std::string to_string(const PSpec& spec);

struct SimulationConfig {
  std::size_t n = 1000;
  MuSpec mu;
  PSpec p;
  int num_features = 5;        // numeric features x1..xK, uniform on [0, 1)
  bool categorical = false;    // adds a noise categorical "region" with levels A..F
  double exposure_min = 1.0;   // exposure uniform on [min, max]
  double exposure_max = 1.0;
  std::uint64_t seed = 0;
};

struct Simulation {
  Dataset data;
  Schema schema;                // response "claims", exposure "exposure"
  std::vector<ZipParams> truth;  // mu includes exposure
};

// Rows draw a structural zero with probability p and Poisson(mu) otherwise.
// Features, exposures and responses use separate named streams of `seed`.
Simulation simulate(const SimulationConfig& config);

// Tree-spec log rate of a row with features x1..x3.
double reference_tree_score(double x1, double x2, double x3);

}  // namespace zipboost

#endif  // ZIPBOOST_SIMULATE_H_
