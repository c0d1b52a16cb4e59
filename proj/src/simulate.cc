#include "zipboost/simulate.h"

#include <cmath>
#include <stdexcept>

#include "zipboost/csv.h"
#include "zipboost/random.h"

namespace zipboost {

namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view part = text.substr(0, comma);
    double value = 0.0;
    if (!parse_double(part, value)) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(part) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::pair<std::string_view, std::string_view> split_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

MuSpec parse_mu_spec(std::string_view text) {
  const auto [head, arg] = split_spec(text);
  MuSpec spec;
  if (head == "tree" && arg.empty()) {
    spec.kind = MuSpec::Kind::kTree;
  } else if (head == "const") {
    const auto v = parse_numbers(arg, "mu-spec const");
    if (v.size() != 1 || !(v[0] >= 0)) throw std::invalid_argument("mu-spec const needs one rate >= 0");
    spec.kind = MuSpec::Kind::kConstant;
    spec.rate = v[0];
  } else if (head == "loglinear") {
    spec.kind = MuSpec::Kind::kLogLinear;
    spec.coefficients = parse_numbers(arg, "mu-spec loglinear");
  } else {
    throw std::invalid_argument("unknown mu-spec '" + std::string(text) +
                                "' (expected tree, const:R or loglinear:b0,b1,...)");
  }
  return spec;
}

PSpec parse_p_spec(std::string_view text) {
  const auto [head, arg] = split_spec(text);
  PSpec spec;
  if (head == "none" && arg.empty()) {
    spec.kind = PSpec::Kind::kNone;
  } else if (head == "eq16") {
    const auto v = parse_numbers(arg, "p-spec eq16");
    if (v.size() != 1 || !(v[0] > 0)) throw std::invalid_argument("p-spec eq16 needs gamma > 0");
    spec.kind = PSpec::Kind::kLinked;
    spec.gamma = v[0];
  } else if (head == "independent") {
    const auto v = parse_numbers(arg, "p-spec independent");
    if (v.size() != 1 || !(v[0] >= 0 && v[0] <= 1)) {
      throw std::invalid_argument("p-spec independent needs p in [0, 1]");
    }
    spec.kind = PSpec::Kind::kIndependent;
    spec.p = v[0];
  } else {
    throw std::invalid_argument("unknown p-spec '" + std::string(text) +
                                "' (expected none, eq16:G or independent:P)");
  }
  return spec;
}

std::string to_string(const MuSpec& spec) {
  switch (spec.kind) {
    case MuSpec::Kind::kConstant: return "const:" + format_double(spec.rate);
    case MuSpec::Kind::kLogLinear: return "loglinear:" + join(spec.coefficients);
    case MuSpec::Kind::kTree: return "tree";
  }
  return "tree";
}

std::string to_string(const PSpec& spec) {
  switch (spec.kind) {
    case PSpec::Kind::kNone: return "none";
    case PSpec::Kind::kLinked: return "eq16:" + format_double(spec.gamma);
    case PSpec::Kind::kIndependent: return "independent:" + format_double(spec.p);
  }
  return "none";
}

double reference_tree_score(double x1, double x2, double x3) {
  if (x1 <= 0.5) return x2 <= 0.5 ? std::log(0.3) : std::log(1.0);
  return x3 <= 0.5 ? std::log(2.0) : std::log(4.0);
}

Simulation simulate(const SimulationConfig& config) {
  if (config.n < 1) throw std::invalid_argument("simulate: n must be at least 1");
  if (config.num_features < 0) throw std::invalid_argument("simulate: negative feature count");
  if (!(config.exposure_min > 0 && config.exposure_max >= config.exposure_min)) {
    throw std::invalid_argument("simulate: exposure range must satisfy 0 < min <= max");
  }
  const int k = config.num_features;
  if (config.mu.kind == MuSpec::Kind::kTree && k < 3) {
    throw std::invalid_argument("simulate: the tree mu-spec needs at least 3 features");
  }
  if (config.mu.kind == MuSpec::Kind::kLogLinear &&
      config.mu.coefficients.size() > static_cast<std::size_t>(k) + 1) {
    throw std::invalid_argument("simulate: more loglinear coefficients than features");
  }

  const std::size_t n = config.n;
  Rng feature_rng(derive_seed(config.seed, "simulate:features"));
  Rng exposure_rng(derive_seed(config.seed, "simulate:exposure"));
  Rng response_rng(derive_seed(config.seed, "simulate:response"));

  std::vector<std::vector<double>> x(k, std::vector<double>(n));
  std::vector<std::string> region;
  for (std::size_t i = 0; i < n; ++i) {
    for (int f = 0; f < k; ++f) x[f][i] = feature_rng.uniform();
    if (config.categorical) region.push_back(std::string(1, static_cast<char>('A' + feature_rng.below(6))));
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = config.exposure_min + (config.exposure_max - config.exposure_min) * exposure_rng.uniform();
  }

  std::vector<ZipParams> truth(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double rate = config.mu.rate;
    if (config.mu.kind == MuSpec::Kind::kTree) {
      rate = std::exp(reference_tree_score(x[0][i], x[1][i], x[2][i]));
    } else if (config.mu.kind == MuSpec::Kind::kLogLinear) {
      const auto& b = config.mu.coefficients;
      double eta = b.empty() ? 0.0 : b[0];
      for (std::size_t j = 1; j < b.size(); ++j) eta += b[j] * x[j - 1][i];
      rate = std::exp(eta);
    }
    const double mu = w[i] * rate;
    double p = 0.0;
    if (config.p.kind == PSpec::Kind::kLinked) p = zipb1_p_of_mu(mu, config.p.gamma);
    if (config.p.kind == PSpec::Kind::kIndependent) p = config.p.p;
    truth[i] = {mu, p};
    y[i] = response_rng.zip(mu, p);
  }

  Simulation sim{Dataset(std::move(y), std::move(w)), Schema{}, std::move(truth)};
  sim.schema.response_column = "claims";
  sim.schema.exposure_column = "exposure";
  sim.schema.seed = config.seed;
  for (int f = 0; f < k; ++f) {
    const std::string name = "x" + std::to_string(f + 1);
    sim.data.add_numeric(name, std::move(x[f]));
    sim.schema.features.push_back({name, FeatureKind::kNumeric});
  }
  if (config.categorical) {
    sim.data.add_categorical("region", region);
    sim.schema.features.push_back({"region", FeatureKind::kCategorical});
  }
  sim.schema.validate();
  return sim;
}

}  // namespace zipboost
