#pragma once

// Dilation experiments: h(r) estimates, power-law fits, sup-renorming and the
// Δ extrapolation norm.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rikit/funcs.hpp"
#include "rikit/lorentz.hpp"
#include "rikit/norm.hpp"
#include "rikit/quad.hpp"

namespace rikit {

/// N(D_r f) / N(f). Throws when N(f) is 0 or infinite.
inline double dilation_ratio(const NormFunctional& n, const RearrangedFunction& f, double r) {
  if (!(r > 0) || !std::isfinite(r)) throw InvalidArgument("dilation factor must be positive and finite");
  const NormValue base = n(f);
  if (!(base.value > 0) || !base.finite()) throw Error("dilation ratio undefined: N(f) is 0 or infinite");
  const NormValue d = n(dilate(f, r));
  return d.value / base.value;
}

/// n points log-spaced over [lo, hi], ascending.
inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi >= lo) || n < 1) throw InvalidArgument("log grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> g;
  if (n == 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return g;
}

struct RatioRow {
  double r = 1.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

enum class Verdict { homogeneous, inhomogeneous, undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::homogeneous: return "homogeneous";
    case Verdict::inhomogeneous: return "inhomogeneous";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

struct HomogeneityReport {
  std::string norm;
  std::vector<RatioRow> rows;  // ascending r
  double alpha = 0.0;          // least squares through the origin on log h vs log r
  double residual_max = 0.0;   // max |log h(r) - alpha log r|
  double spread_max = 0.0;     // max over r of (max - min) / median
  double multiplicativity_max = 0.0;
  bool h_nonincreasing = true;
  /// median ratio times r^{1/p_ref}; p_ref is the norm's index or -1/alpha.
  std::vector<double> scaled;
  double p_ref = 0.0;
  double tolerance = 1e-6;
  Verdict verdict = Verdict::undetermined;
  std::optional<double> p;  // -1/alpha when homogeneous
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Longest run from one grid end along which s grows strictly toward that end.
// Returns (decades spanned, growth factor).
inline std::pair<double, double> edge_growth(const std::vector<RatioRow>& rows, const std::vector<double>& s,
                                             bool toward_small) {
  const std::size_t n = rows.size();
  if (n < 2) return {0.0, 1.0};
  auto idx = [&](std::size_t k) { return toward_small ? k : n - 1 - k; };
  std::size_t k = 0;
  while (k + 1 < n && s[idx(k)] > s[idx(k + 1)]) ++k;
  if (k == 0) return {0.0, 1.0};
  const double decades = std::abs(std::log10(rows[idx(k)].r / rows[idx(0)].r));
  return {decades, s[idx(0)] / s[idx(k)]};
}

}  // namespace detail

/// Ratios N(D_r f)/N(f) over a test set and an r grid, a power-law fit and
/// the homogeneous / inhomogeneous verdict.
inline HomogeneityReport homogeneity_report(const NormFunctional& n, const std::vector<RearrangedFunction>& testset,
                                            std::vector<double> r_grid, double tolerance = 1e-6,
                                            std::size_t pair_samples = 6) {
  if (testset.empty()) throw InvalidArgument("homogeneity test set must be nonempty");
  if (r_grid.empty()) throw InvalidArgument("homogeneity r grid must be nonempty");
  std::sort(r_grid.begin(), r_grid.end());
  HomogeneityReport rep;
  rep.norm = n.name();
  rep.tolerance = tolerance;

  std::vector<double> base;
  for (const auto& f : testset) {
    const NormValue v = n(f);
    if (!(v.value > 0) || !v.finite()) throw Error("homogeneity test set needs finite nonzero norms");
    base.push_back(v.value);
  }
  auto h_at = [&](double r) {
    std::vector<double> ratios;
    for (std::size_t i = 0; i < testset.size(); ++i) ratios.push_back(n(dilate(testset[i], r)).value / base[i]);
    RatioRow row{r, *std::min_element(ratios.begin(), ratios.end()), detail::median(ratios),
                 *std::max_element(ratios.begin(), ratios.end())};
    return row;
  };

  double sxy = 0.0, sxx = 0.0;
  for (double r : r_grid) {
    if (!(r > 0)) throw InvalidArgument("r grid must be positive");
    const RatioRow row = h_at(r);
    rep.rows.push_back(row);
    rep.spread_max = std::max(rep.spread_max, (row.max - row.min) / row.median);
    sxy += std::log(r) * std::log(row.median);
    sxx += std::log(r) * std::log(r);
  }
  rep.alpha = sxx > 0 ? sxy / sxx : 0.0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    rep.residual_max = std::max(rep.residual_max, std::abs(std::log(row.median) - rep.alpha * std::log(row.r)));
    if (i > 0 && row.median > rep.rows[i - 1].median * (1.0 + tolerance)) rep.h_nonincreasing = false;
  }

  // h(rs) against h(r) h(s) on pairs mirrored around the grid middle.
  const std::size_t m = rep.rows.size();
  const std::size_t step = std::max<std::size_t>(1, m / std::max<std::size_t>(1, pair_samples));
  for (std::size_t i = 0; i < m; i += step) {
    const std::size_t j = (i + m / 3) % m;
    const double rs = rep.rows[i].r * rep.rows[j].r;
    const double hrs = h_at(rs).median;
    rep.multiplicativity_max =
        std::max(rep.multiplicativity_max, std::abs(hrs - rep.rows[i].median * rep.rows[j].median) / hrs);
  }

  const std::optional<double> idx = n.index();
  rep.p_ref = idx ? *idx : (rep.alpha < 0 ? -1.0 / rep.alpha : 0.0);
  if (rep.p_ref > 0) {
    for (const auto& row : rep.rows) rep.scaled.push_back(row.median * std::pow(row.r, 1.0 / rep.p_ref));
  }

  if (rep.residual_max <= tolerance && rep.spread_max <= tolerance && rep.multiplicativity_max <= tolerance &&
      rep.alpha < 0) {
    rep.verdict = Verdict::homogeneous;
    rep.p = -1.0 / rep.alpha;
  } else if (rep.p_ref > 0) {
    // h(r) is a supremum over f, so growth evidence uses the per-r maximum.
    std::vector<double> scaled_max;
    for (const auto& row : rep.rows) scaled_max.push_back(row.max * std::pow(row.r, 1.0 / rep.p_ref));
    for (bool toward_small : {true, false}) {
      const auto [decades, growth] = detail::edge_growth(rep.rows, scaled_max, toward_small);
      if (decades >= 6.0 - 1e-9 && growth >= 2.0) rep.verdict = Verdict::inhomogeneous;
    }
  }
  return rep;
}

/// One-sided bound implies two-sided: with C = max_r max ratio r^{1/p},
/// checks min_r min ratio r^{1/p} >= 1/C.
struct UpperEnoughCheck {
  double upper = 0.0;  // C
  double lower = 0.0;  // min ratio r^{1/p}
  bool holds = false;
};

inline UpperEnoughCheck upper_enough_check(const HomogeneityReport& rep, double p, double rel = 1e-9) {
  UpperEnoughCheck out;
  out.lower = inf;
  for (const auto& row : rep.rows) {
    const double s = std::pow(row.r, 1.0 / p);
    out.upper = std::max(out.upper, row.max * s);
    out.lower = std::min(out.lower, row.min * s);
  }
  out.holds = out.lower >= (1.0 / out.upper) * (1.0 - rel);
  return out;
}

struct RenormResult {
  double value = 0.0;
  double argmax = 1.0;
  bool boundary_attained = false;  // maximum sits at a grid edge, above every interior value
  bool flat = false;               // s^{1/p} N(D_s f) constant over the grid
  quad::Status status = quad::Status::converged;
};

/// max over the grid of s^{1/p} N(D_s f).
inline RenormResult renorm_sup(const NormFunctional& n, double p, const RearrangedFunction& f,
                               const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw InvalidArgument("renorm grid must be nonempty");
  RenormResult out;
  if (f.is_zero()) {
    out.flat = true;
    return out;
  }
  std::vector<double> vals;
  for (double s : s_grid) {
    const NormValue v = n(dilate(f, s));
    out.status = quad::worst(out.status, v.status);
    vals.push_back(std::pow(s, 1.0 / p) * v.value);
  }
  const auto it = std::max_element(vals.begin(), vals.end());
  const std::size_t k = static_cast<std::size_t>(it - vals.begin());
  out.value = *it;
  out.argmax = s_grid[k];
  const double lo = *std::min_element(vals.begin(), vals.end());
  out.flat = (out.value - lo) <= 1e-9 * out.value;
  if (!out.flat && (k == 0 || k + 1 == vals.size()) && vals.size() > 2) {
    double interior = -inf;
    for (std::size_t i = 1; i + 1 < vals.size(); ++i) interior = std::max(interior, vals[i]);
    out.boundary_attained = out.value > interior * (1.0 + 1e-9);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Δ extrapolation norm

struct DeltaMember {
  NormFunctional norm;
  double coefficient;
};

struct DeltaFamily {
  std::vector<DeltaMember> members;

  void validate() const {
    if (members.empty()) throw InvalidArgument("Δ family needs at least one member");
    for (const auto& m : members)
      if (!(m.coefficient > 0) || !std::isfinite(m.coefficient))
        throw InvalidArgument("Δ family coefficients must be positive and finite");
  }
};

/// sup over members of ϱ(q) ‖f‖_{X_q}.
inline NormValue delta_norm(const DeltaFamily& family, const RearrangedFunction& f) {
  family.validate();
  NormValue out{0.0, quad::Status::converged};
  for (const auto& m : family.members) {
    const NormValue v = m.norm(f);
    out.status = quad::worst(out.status, v.status);
    out.value = std::max(out.value, m.coefficient * v.value);
  }
  return out;
}

/// sup over members of ϱ(q) φ_{X_q}(1).
inline double admissibility(const DeltaFamily& family) {
  family.validate();
  double best = 0.0;
  for (const auto& m : family.members)
    best = std::max(best, m.coefficient * fundamental_function(m.norm, 1.0).value);
  return best;
}

namespace detail {

struct DeltaModel final : NormFunctional::Model {
  DeltaFamily family;
  std::string label;
  NormValue evaluate(const RearrangedFunction& f) const override { return delta_norm(family, f); }
  NormKind kind() const override { return NormKind::delta; }
  std::string name() const override { return label; }
  std::optional<double> index() const override {
    std::optional<double> p = family.members.front().norm.index();
    for (const auto& m : family.members)
      if (m.norm.index() != p) return std::nullopt;
    return p;
  }
};

}  // namespace detail

inline NormFunctional make_delta(DeltaFamily family, std::string label = "delta") {
  family.validate();
  auto m = std::make_shared<detail::DeltaModel>();
  m->family = std::move(family);
  m->label = std::move(label);
  return NormFunctional(std::move(m));
}

// ---------------------------------------------------------------------------
// Endpoint bound sup_t t^{1/p} f*(t) <= C N(f)

struct EndpointEstimate {
  double constant = 0.0;  // max over the corpus of the ratio
  bool finite = true;
};

inline EndpointEstimate endpoint_constant(const NormFunctional& n, double p,
                                          const std::vector<RearrangedFunction>& corpus,
                                          const quad::Spec& spec = {}) {
  EndpointEstimate out;
  for (const auto& f : corpus) {
    if (f.is_zero()) continue;
    const double lhs = std::exp(log_sup_power(f, false, 1.0 / p, spec));
    const double rhs = n(f).value;
    const double c = lhs / rhs;
    if (!std::isfinite(c)) out.finite = false;
    out.constant = std::max(out.constant, c);
  }
  return out;
}

}  // namespace rikit
