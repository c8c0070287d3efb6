#pragma once

// Shared helpers for the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rikit/corpus.hpp"
#include "rikit/norm.hpp"

namespace rikit::testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double coefficient_of_variation(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size())) / std::abs(mean);
}

struct AxiomTally {
  int pairs = 0;
  int triangle = 0;
  int monotone = 0;
  int invariance = 0;
  double worst_triangle = -1e300;  // max of (N(f+g) - N(f) - N(g)) / (N(f) + N(g))
  bool ok() const { return triangle == 0 && monotone == 0 && invariance == 0; }
  std::string summary() const {
    return "pairs=" + std::to_string(pairs) + " triangle=" + std::to_string(triangle) +
           " monotone=" + std::to_string(monotone) + " invariance=" + std::to_string(invariance);
  }
};

/// Triangle inequality on f+g, lattice monotonicity on f ≤ g' (pieces scaled
/// up by factors in [1, 4]), and exact invariance under reordering pieces.
inline AxiomTally check_axioms(const NormFunctional& n, std::size_t pairs, std::uint64_t seed, double tol) {
  const auto fs = step_corpus(2 * pairs, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> up(1.0, 4.0);
  AxiomTally t;
  for (std::size_t i = 0; i < pairs; ++i) {
    const StepFunction& f = fs[2 * i];
    const StepFunction& g = fs[2 * i + 1];
    const double nf = n(RearrangedFunction(f)).value;
    const double ng = n(RearrangedFunction(g)).value;
    const double nfg = n(RearrangedFunction(f + g)).value;
    const double excess = (nfg - nf - ng) / (nf + ng);
    t.worst_triangle = std::max(t.worst_triangle, excess);
    if (excess > tol) ++t.triangle;

    StepFunction bigger = f;
    for (auto& p : bigger.pieces) p.value *= up(rng);
    if (n(RearrangedFunction(bigger)).value < nf * (1 - tol)) ++t.monotone;

    StepFunction reordered = f;
    std::reverse(reordered.pieces.begin(), reordered.pieces.end());
    if (n(RearrangedFunction(reordered)).value != nf) ++t.invariance;
    ++t.pairs;
  }
  return t;
}

}  // namespace rikit::testing
