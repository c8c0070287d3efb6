#pragma once

// Seeded random test corpora.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rikit/funcs.hpp"
#include "rikit/lorentz.hpp"

namespace rikit {

namespace detail {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

}  // namespace detail

/// 1..8 pieces, values and lengths log-uniform in [1e-3, 1e3].
inline StepFunction random_step_function(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 8);
  const int n = count(rng);
  std::vector<Piece> pieces;
  for (int i = 0; i < n; ++i) {
    const double v = detail::log_uniform(rng, 1e-3, 1e3);
    const double l = detail::log_uniform(rng, 1e-3, 1e3);
    pieces.push_back({v, l});
  }
  return StepFunction(std::move(pieces));
}

inline std::vector<StepFunction> step_corpus(std::size_t n, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::vector<StepFunction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_step_function(rng));
  return out;
}

inline std::vector<RearrangedFunction> rearranged_corpus(std::size_t n, std::uint64_t seed = 0) {
  std::vector<RearrangedFunction> out;
  for (const auto& f : step_corpus(n, seed)) out.emplace_back(f);
  return out;
}

/// Alternates positional step weights (1..4 pieces, values and lengths
/// log-uniform in [1e-2, 1e2]) with truncated powers t^β χ_(0,T), β in
/// (-1, 1), T log-uniform in [1e-2, 1e2].
inline std::vector<Weight> weight_corpus(std::size_t n, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::vector<Weight> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      std::uniform_int_distribution<int> count(1, 4);
      const int k = count(rng);
      std::vector<Piece> pieces;
      for (int j = 0; j < k; ++j) {
        const double v = detail::log_uniform(rng, 1e-2, 1e2);
        const double l = detail::log_uniform(rng, 1e-2, 1e2);
        pieces.push_back({v, l});
      }
      out.push_back(Weight::step(pieces));
    } else {
      std::uniform_real_distribution<double> beta(-0.9, 0.9);
      const double b = beta(rng);
      out.push_back(Weight::truncated_power(b, detail::log_uniform(rng, 1e-2, 1e2)));
    }
  }
  return out;
}

}  // namespace rikit
