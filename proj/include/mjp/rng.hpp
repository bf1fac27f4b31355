#ifndef MJP_RNG_HPP
#define MJP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "mjp/errors.hpp"

namespace mjp {

// All randomness flows through an explicit Rng handle; there is no global
// state. Replicate r of an ensemble uses Rng(base_seed + r).
//
// Distribution objects are constructed fresh per call so that the mapping
// from the underlying engine stream to outputs is stateless; two code paths
// issuing the same sequence of calls on equally seeded Rngs produce
// identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }

  // Waiting time with the given rate; rate 0 means the event never happens.
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return std::exponential_distribution<double>(rate)(engine_);
  }

  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<long>(mean)(engine_);
  }

  // Gamma(shape, rate). Shapes below 1 use the boosting identity
  // G(a) = G(a+1) * U^{1/a} so the draw cannot round to zero as easily as
  // the raw rejection sampler's output for tiny shapes.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw model_error("gamma draw requires positive shape and rate");
    if (shape < 1.0) {
      double g = std::gamma_distribution<double>(shape + 1.0, 1.0)(engine_);
      double u = uniform();
      return g * std::pow(u, 1.0 / shape) / rate;
    }
    return std::gamma_distribution<double>(shape, 1.0)(engine_) / rate;
  }

  // Index draw proportional to nonnegative weights. Entries with zero
  // weight are never returned: the first index whose cumulative sum
  // strictly exceeds u*total has positive weight.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0 || !std::isfinite(w))
        throw numeric_error("categorical weight must be finite and >= 0");
      total += w;
    }
    if (total <= 0.0) throw numeric_error("categorical weights sum to zero");
    double x = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (cum > x) return static_cast<int>(i);
    }
    // Rounding pushed x past the final cumulative; return last positive entry.
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return static_cast<int>(i);
    throw numeric_error("categorical draw failed");
  }

  // Dirichlet via normalized gamma draws. A single category is exactly 1.
  std::vector<double> dirichlet(std::span<const double> alphas) {
    if (alphas.empty()) throw model_error("dirichlet needs >= 1 category");
    if (alphas.size() == 1) return {1.0};
    std::vector<double> g(alphas.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      g[i] = gamma(alphas[i], 1.0);
      total += g[i];
    }
    if (total <= 0.0) throw numeric_error("dirichlet draws underflowed");
    for (double& v : g) v /= total;
    return g;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mjp

#endif
