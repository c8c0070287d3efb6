#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rikit/corpus.hpp"
#include "rikit/homogeneity.hpp"
#include "rikit/lorentz.hpp"
#include "rikit/repro.hpp"
#include "support.hpp"

using namespace rikit;
using rikit::testing::rel;

namespace {

const std::vector<LorentzParams> kPairs = {{2, 1}, {2, 3}, {3, 2}, {1.5, 4}};

}  // namespace

TEST(LorentzNorm, IndicatorDoublestarClosedForm) {
  const NormValue v = lorentz_norm(indicator(1.0), {2, 2}, Mode::doublestar);
  EXPECT_EQ(v.status, quad::Status::converged);
  EXPECT_NEAR(v.value, std::sqrt(2.0), 1e-12);
}

TEST(LorentzNorm, IndicatorStarIsL2) {
  EXPECT_NEAR(lorentz_norm(indicator(1.0), {2, 2}, Mode::star).value, 1.0, 1e-12);
}

TEST(LorentzNorm, GStarNormMatchesClosedForm) {
  // p^{-1/(Q(Qn+1))} Q^{1/Q} n^{n/(Qn+1)} at p = 2, Q = 3, n = 1.
  const NormValue v = lorentz_norm(RearrangedFunction(g_function(2, 3)), {2, 4}, Mode::star);
  EXPECT_EQ(v.status, quad::Status::converged);
  EXPECT_LE(rel(v.value, std::pow(2.0, -1.0 / 12) * std::cbrt(3.0)), 1e-10);
}

TEST(LorentzNorm, GStarNormAtQDiverges) {
  const NormValue v = lorentz_norm(RearrangedFunction(g_function(2, 3)), {2, 3}, Mode::star);
  EXPECT_EQ(v.status, quad::Status::diverged);
  EXPECT_TRUE(std::isinf(v.value));
}

TEST(LorentzNorm, SupNorms) {
  const RearrangedFunction f(StepFunction({{3, 1}, {1, 2}}));
  // t^{1/2} f*(t) has left limits 3 at t = 1 and √3 at t = 3.
  EXPECT_NEAR(lorentz_norm(f, {2, inf}, Mode::star).value, 3.0, 1e-12);
  // t^{1/2} f** is 3√t up to t = 1, then (t + 2)/√t ≤ 3 until t = 3, then 5/√t.
  EXPECT_NEAR(lorentz_norm(f, {2, inf}, Mode::doublestar).value, 3.0, 1e-12);
  EXPECT_NEAR(lorentz_norm(RearrangedFunction(power_decay(2)), {2, inf}, Mode::doublestar).value, 2.0, 1e-12);
}

TEST(LorentzNorm, ZeroFunction) {
  const RearrangedFunction z{StepFunction{}};
  EXPECT_EQ(lorentz_norm(z, {2, 2}, Mode::star).value, 0);
  EXPECT_EQ(weighted_lorentz_norm(z, 1, Weight::power(0), Mode::doublestar).value, 0);
  EXPECT_EQ(y_space_norm(z, 2).value, 0);
}

TEST(LorentzNorm, RejectsBadParameters) {
  EXPECT_THROW(lorentz_norm(indicator(1), {1, 2}, Mode::star), InvalidArgument);
  EXPECT_THROW(lorentz_norm(indicator(1), {2, 0.5}, Mode::star), InvalidArgument);
  EXPECT_THROW(weighted_lorentz_norm(indicator(1), inf, Weight::power(0), Mode::star), InvalidArgument);
  EXPECT_THROW(Weight::power(-1), InvalidArgument);
}

TEST(FundamentalFunction, ClosedForms) {
  for (const auto& pq : kPairs) {
    const NormFunctional ds = make_lorentz(pq, Mode::doublestar);
    const NormFunctional st = make_lorentz(pq, Mode::star);
    for (double t : {0.01, 1.0, 50.0}) {
      const double tp = std::pow(t, 1 / pq.p);
      EXPECT_LE(rel(fundamental_function(ds, t).value, doublestar_fundamental_coefficient(pq.p, pq.q) * tp), 1e-10);
      EXPECT_LE(rel(fundamental_function(st, t).value, star_fundamental_coefficient(pq.p, pq.q) * tp), 1e-10);
    }
  }
}

TEST(FundamentalFunction, PowerLawOverTwoDecades) {
  for (const auto& pq : kPairs)
    for (Mode m : {Mode::star, Mode::doublestar}) {
      const NormFunctional n = make_lorentz(pq, m);
      std::vector<double> scaled;
      for (double t : log_grid(0.1, 10, 21)) scaled.push_back(fundamental_function(n, t).value / std::pow(t, 1 / pq.p));
      EXPECT_LT(rikit::testing::coefficient_of_variation(scaled), 1e-6) << n.name();
    }
}

TEST(FundamentalFunction, YSpaceAtOne) {
  EXPECT_NEAR(fundamental_function(make_y_space(2), 1.0).value, 3.0, 1e-10);
}

TEST(WeightedLorentz, PowerWeightReproducesLorentz) {
  for (const auto& pq : kPairs) {
    const Weight w = Weight::power(pq.q / pq.p - 1);
    for (const auto& f : rearranged_corpus(30, 21)) {
      const double a = weighted_lorentz_norm(f, pq.q, w, Mode::star).value;
      const double b = lorentz_norm(f, pq, Mode::star).value;
      EXPECT_LE(rel(a, b), 1e-9);
    }
  }
}

TEST(WeightedLorentz, GammaOneEqualsLambdaOne) {
  const auto ws = weight_corpus(50, 4);
  const auto fs = rearranged_corpus(50, 8);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Weight u = gamma1_weight_transform(ws[i]);
    const double g = weighted_lorentz_norm(fs[i], 1, ws[i], Mode::doublestar).value;
    const double l = weighted_lorentz_norm(fs[i], 1, u, Mode::star).value;
    EXPECT_LE(rel(g, l), 1e-6) << ws[i].name;
  }
}

TEST(WeightedLorentz, GammaOneIndicatorExample) {
  const Weight w = Weight::truncated_power(0, 1);
  const Weight u = gamma1_weight_transform(w);
  for (double x : {0.25, 1.0, 3.0}) {
    const double g = weighted_lorentz_norm(indicator(x), 1, w, Mode::doublestar).value;
    const double l = weighted_lorentz_norm(indicator(x), 1, u, Mode::star).value;
    EXPECT_LE(rel(g, l), 1e-9) << x;
  }
}

TEST(Gamma1Transform, IndicatorGivesNegativeLog) {
  const Weight u = gamma1_weight_transform(Weight::truncated_power(0, 1));
  for (double t : {1e-6, 0.1, 0.5}) EXPECT_NEAR(u.value(t), -std::log(t), 1e-10);
  EXPECT_EQ(u.value(2.0), 0);
}

TEST(Gamma1Transform, PowerWeight) {
  // w = t^{1/p - 1}: u(t) = ∫_t^∞ s^{1/p - 2} ds = p' t^{1/p - 1}.
  for (double p : {1.5, 2.0, 3.0}) {
    const Weight u = gamma1_weight_transform(Weight::power(1 / p - 1));
    for (double t : {0.01, 1.0, 40.0}) EXPECT_LE(rel(u.value(t), conjugate(p) * std::pow(t, 1 / p - 1)), 1e-9);
  }
}

TEST(Gamma1Transform, ZeroWeight) {
  const Weight u = gamma1_weight_transform(Weight::step({{0, 1}}));
  for (double t : {0.1, 1.0, 10.0}) EXPECT_EQ(u.value(t), 0);
}

TEST(Gamma1Transform, DivergentTailThrows) {
  EXPECT_THROW(gamma1_weight_transform(Weight::power(0)), Error);
}

TEST(WeightProfile, PowerWeightLambdaIsOne) {
  const auto prof = weight_criterion_profile(Weight::power(2.0 / 3 - 1), 3, 2, log_grid(1e-4, 1e4, 17),
                                             CriterionKind::lambda);
  EXPECT_NEAR(prof.min, 1, 1e-12);
  EXPECT_NEAR(prof.max, 1, 1e-12);
}

TEST(WeightProfile, IndicatorLambdaUnbounded) {
  // r(t) = min(t, 1) / (2√t): peak 1/2 at t = 1, 1/(2√T) at the grid end T.
  const auto to6 =
      weight_criterion_profile(Weight::truncated_power(0, 1), 2, 1, log_grid(1e-2, 1e6, 33), CriterionKind::lambda);
  EXPECT_LE(rel(to6.max / to6.min, 1e3), 1e-9);
  const auto to8 =
      weight_criterion_profile(Weight::truncated_power(0, 1), 2, 1, log_grid(1e-2, 1e8, 41), CriterionKind::lambda);
  EXPECT_LE(rel(to8.max / to8.min, 1e4), 1e-9);
}

TEST(WeightProfile, PowerWeightGammaConstant) {
  for (const auto& pq : kPairs) {
    const auto prof = weight_criterion_profile(Weight::power(pq.q / pq.p - 1), pq.p, pq.q, log_grid(1e-3, 1e3, 13),
                                               CriterionKind::gamma);
    const double want = 1 + 1 / (pq.p - 1);
    EXPECT_LE(rel(prof.min, want), 1e-9);
    EXPECT_LE(rel(prof.max, want), 1e-9);
  }
}

TEST(WeightProfile, DivergentTailFlagged) {
  // w = t^{q-1} makes t^q ∫_t^∞ w(s) s^{-q} ds = ∞.
  const auto prof = weight_criterion_profile(Weight::power(1), 2, 2, {1.0}, CriterionKind::gamma);
  EXPECT_EQ(prof.status[0], quad::Status::diverged);
  EXPECT_TRUE(std::isinf(prof.max));
}

TEST(Properties, Sandwich) {
  const auto fs = rearranged_corpus(200, 1);
  for (const auto& pq : kPairs)
    for (const auto& f : fs) {
      const double s = lorentz_norm(f, pq, Mode::star).value;
      const double d = lorentz_norm(f, pq, Mode::doublestar).value;
      EXPECT_GE(d, s * (1 - 1e-9));
      EXPECT_LE(d, conjugate(pq.p) * s * (1 + 1e-9));
    }
}

TEST(Properties, EmbeddingConstant) {
  const std::vector<std::pair<LorentzParams, double>> cases = {
      {{2, 1}, 3}, {{3, 2}, 4}, {{2, 2}, inf}, {{1.5, 1}, 2.5}};
  for (const auto& f : rearranged_corpus(100, 2))
    for (const auto& [pq, r] : cases) {
      const double c = std::pow(pq.p * pq.p / (pq.q * (pq.p - 1)), 1 / pq.q - 1 / r);
      const double lo = lorentz_norm(f, pq, Mode::doublestar).value;
      const double hi = lorentz_norm(f, {pq.p, r}, Mode::doublestar).value;
      EXPECT_LE(hi, c * lo * (1 + 1e-9));
    }
}

TEST(Properties, ScalarHomogeneity) {
  const std::vector<NormFunctional> ns = {make_lorentz({2, 3}, Mode::star), make_lorentz({3, 2}, Mode::doublestar),
                                          make_lorentz({2, inf}, Mode::doublestar),
                                          make_weighted(2, Weight::truncated_power(-0.5, 3), Mode::doublestar),
                                          make_y_space(2)};
  for (const auto& n : ns)
    for (const auto& f : rearranged_corpus(20, 6))
      for (double a : {1e-3, 0.7, 9.0}) EXPECT_LE(rel(n(f.scaled(a)).value, a * n(f).value), 1e-12) << n.name();
}

TEST(Properties, NormAxioms) {
  const std::vector<NormFunctional> ns = {
      make_lorentz({3, 2}, Mode::star),       make_lorentz({2, 2}, Mode::star),
      make_lorentz({2, inf}, Mode::doublestar), make_lorentz({1.5, 4}, Mode::doublestar),
      make_weighted(1, Weight::truncated_power(-0.5, 2), Mode::star),
      make_weighted(2, Weight::power(0.5), Mode::doublestar), make_y_space(2)};
  for (const auto& n : ns) {
    const auto t = rikit::testing::check_axioms(n, 100, 12, 1e-9);
    EXPECT_TRUE(t.ok()) << n.name() << " " << t.summary();
  }
}

TEST(Properties, LorentzDilationExponent) {
  const auto fs = rearranged_corpus(5, 13);
  for (const auto& pq : kPairs) {
    const NormFunctional n = make_lorentz(pq, Mode::doublestar);
    for (const auto& f : fs)
      for (double r : {1e-3, 0.5, 40.0}) EXPECT_LE(rel(dilation_ratio(n, f, r), std::pow(r, -1 / pq.p)), 1e-9);
  }
}
