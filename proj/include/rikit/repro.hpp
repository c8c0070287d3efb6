#pragma once

// The three explicit constructions: the Y-space counterexample, the g-function
// Δ-space and the oscillating Young function, each with closed forms checked
// against quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rikit/corpus.hpp"
#include "rikit/funcs.hpp"
#include "rikit/homogeneity.hpp"
#include "rikit/lorentz.hpp"
#include "rikit/orlicz.hpp"
#include "rikit/quad.hpp"

namespace rikit {

// ---------------------------------------------------------------------------
// Named functions

struct YConstants {
  double p, a, c;
};

inline YConstants y_constants(double p) {
  if (!(p > 1) || !std::isfinite(p)) throw InvalidArgument("y-counterexample needs p in (1, inf)");
  return {p, std::exp(1.0 - 2.0 * p), std::exp((1.0 - 2.0 * p) / conjugate(p)) / (2.0 * p)};
}

/// f** = t^{-1/p} / (1 - log t) on (0, a), c/t after; f* is its primitive's
/// derivative.
inline AnalyticDecreasing y_counterexample(double p) {
  const YConstants k = y_constants(p);
  const double la = std::log(k.a), pc = conjugate(p), lc = std::log(k.c);
  AnalyticDecreasing f;
  f.log_value = [=](double u) {
    if (u >= la) return LogLinear{};
    return LogLinear{-1.0 / p, std::log((1.0 - u) / pc + 1.0) - 2.0 * std::log1p(-u)};
  };
  f.log_maximal = [=](double u) {
    if (u < la) return LogLinear{-1.0 / p, -std::log1p(-u)};
    return LogLinear{-1.0, lc};
  };
  f.support = k.a;
  f.log_breaks = {la};
  f.name = "y-counterexample";
  f.validate();
  return f;
}

namespace detail {

// log(Γ(a, x) e^x) for x > 0; the asymptotic series takes over where e^{-x}
// would underflow.
inline double log_scaled_upper_gamma(double a, double x) {
  if (x < 600.0) return std::log(boost::math::tgamma(a, x)) + x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= (a - k) / x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return (a - 1.0) * std::log(x) + std::log(sum);
}

}  // namespace detail

/// g(t) = t^{-1/p} (-log t)^{-1/Q} on (0, e^{-p/Q}). With `closed_maximal`,
/// g** comes from ∫_0^t g = β^{1/Q-1} Γ(1-1/Q, -β log t), β = 1 - 1/p;
/// otherwise from quadrature.
inline AnalyticDecreasing g_function(double p, double Q, bool closed_maximal = true) {
  if (!(p > 1) || !std::isfinite(p)) throw InvalidArgument("g needs p in (1, inf)");
  if (!(Q >= 1) || !std::isfinite(Q)) throw InvalidArgument("g needs Q in [1, inf)");
  const double us = -p / Q;
  AnalyticDecreasing g;
  g.log_value = [=](double u) {
    if (u >= us) return LogLinear{};
    return LogLinear{-1.0 / p, -std::log(-u) / Q};
  };
  if (closed_maximal) {
    const double beta = 1.0 - 1.0 / p, a = 1.0 - 1.0 / Q;
    const double lb = (1.0 / Q - 1.0) * std::log(beta);
    auto log_p_scaled = [=](double u) {  // log ∫_0^{e^u} g - β u
      return lb + detail::log_scaled_upper_gamma(a, -beta * u);
    };
    const double lp_sup = log_p_scaled(us) + beta * us;
    g.log_maximal = [=](double u) {
      if (u < us) return LogLinear{-1.0 / p, log_p_scaled(u)};
      return LogLinear{-1.0, lp_sup};
    };
  }
  g.support = std::exp(us);
  g.log_breaks = {us};
  g.name = "g";
  g.validate();
  return g;
}

/// f*(t) = t^{-1/p}.
inline AnalyticDecreasing power_decay(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw InvalidArgument("power-decay needs p > 0");
  AnalyticDecreasing f;
  f.log_value = [p](double) { return LogLinear{-1.0 / p, 0.0}; };
  if (p > 1) f.log_maximal = [p](double) { return LogLinear{-1.0 / p, std::log(conjugate(p))}; };
  f.name = "power-decay";
  f.validate();
  return f;
}

// ---------------------------------------------------------------------------
// Closed forms

/// φ_Y(t) for the y-space norm, both branches.
inline double y_fundamental_closed(double p, double t) {
  if (t <= 1.0) {
    const double first = std::sqrt(p / (2.0 * p - 2.0) * (p - std::pow(t, (2.0 * p - 2.0) / p)));
    return (first + conjugate(p) * std::pow(t, (p - 1.0) / p)) * std::pow(t, 1.0 / p);
  }
  return std::sqrt(p / 2.0) - p + p * p / (p - 1.0) * std::pow(t, 1.0 / p);
}

/// ‖f‖_Y of the counterexample from the antiderivatives 1/(1 - log t) and
/// power laws.
inline double y_norm_closed(double p) {
  const YConstants k = y_constants(p);
  const double e = 2.0 / p - 2.0;
  const double lower = 1.0 / (2.0 * p) + k.c * k.c * (1.0 - std::pow(k.a, e)) / e;
  return std::sqrt(lower) + k.c * conjugate(p);
}

/// r^{1/p} ‖D_r f‖_Y for r < a, from the antiderivative -log(1 - log t).
inline double y_scaled_dilation_closed(double p, double r) {
  const double m = 1.0 - std::log(r);
  return 1.0 / std::sqrt(m) + std::log(m / (2.0 * p)) + conjugate(p) / (2.0 * p);
}

/// ‖g‖_{p, Q+1/n} in star mode.
inline double g_star_norm_closed(double p, double Q, double n) {
  return std::pow(p, -1.0 / (Q * (Q * n + 1.0))) * std::pow(Q, 1.0 / Q) * std::pow(n, n / (Q * n + 1.0));
}

// ---------------------------------------------------------------------------
// Reports

struct ScenarioRow {
  std::string quantity;
  double closed = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ScenarioCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
};

struct ScenarioReport {
  std::string scenario;
  std::map<std::string, double> params;
  std::vector<ScenarioRow> rows;
  std::vector<ScenarioCheck> checks;
  std::vector<std::string> grid_columns;
  std::vector<std::vector<double>> grid;

  void compare(std::string quantity, double closed, double numeric, double tol) {
    const double rel = closed == numeric ? 0.0 : std::abs(numeric - closed) / std::abs(closed);
    rows.push_back({std::move(quantity), closed, numeric, rel, tol, rel <= tol});
  }
  void check(std::string name, bool pass, double value = 0.0) { checks.push_back({std::move(name), pass, value}); }

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; }) &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
  const ScenarioRow* row(const std::string& q) const {
    for (const auto& r : rows)
      if (r.quantity == q) return &r;
    return nullptr;
  }
  const ScenarioCheck* find_check(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return &c;
    return nullptr;
  }
};

inline std::vector<double> default_y_r_grid() {
  std::vector<double> g;
  for (int k = 2; k <= 12; ++k) g.push_back(std::pow(10.0, -k));
  return g;
}

/// Y-space counterexample: fundamental function, ‖f‖_Y and the ratio
/// R(r) = r^{1/p} ‖D_r f‖_Y / ‖f‖_Y along r -> 0.
inline ScenarioReport y_scenario(double p, std::vector<double> r_grid = default_y_r_grid(), double min_growth = 2.0,
                                 const quad::Spec& spec = {}) {
  const YConstants k = y_constants(p);
  for (double r : r_grid)
    if (!(r > 0 && r < k.a)) throw InvalidArgument("y scenario r grid must lie in (0, a)");
  std::sort(r_grid.begin(), r_grid.end());
  ScenarioReport rep;
  rep.scenario = "y";
  rep.params = {{"p", p}, {"a", k.a}, {"c", k.c}};
  const NormFunctional Y = make_y_space(p, spec);
  const RearrangedFunction f(y_counterexample(p));

  for (double t : {0.1, 0.5, 1.0, 2.0, 10.0})
    rep.compare("phi_Y(" + detail::fmt_num(t) + ")", y_fundamental_closed(p, t), fundamental_function(Y, t).value,
                1e-8);

  // c = ∫_0^a f*, by quadrature of the closed-form f*.
  const auto& body = *f.analytic();
  const quad::Result ci = quad::integrate_u(
      [&](double u) { return std::exp(body.log_value(u).with_power(1.0, u)); }, -inf, std::log(k.a), spec);
  rep.compare("c", k.c, ci.value, 1e-9);

  const NormValue fy = Y(f);
  const double fy_closed = y_norm_closed(p);
  rep.compare("norm_Y", fy_closed, fy.value, 1e-8);

  rep.grid_columns = {"r", "R_closed", "R_numeric"};
  std::vector<double> R;
  for (double r : r_grid) {
    const double closed = y_scaled_dilation_closed(p, r) / fy_closed;
    const double numeric = Y(dilate(f, r)).value * std::pow(r, 1.0 / p) / fy.value;
    rep.compare("R(" + detail::fmt_num(r) + ")", closed, numeric, 1e-8);
    rep.grid.push_back({r, closed, numeric});
    R.push_back(numeric);
  }
  bool increasing = R.size() >= 2;
  for (std::size_t i = 1; i < R.size(); ++i) increasing = increasing && R[i - 1] > R[i];
  rep.check("R strictly increasing as r decreases", increasing);
  if (!R.empty()) {
    rep.check("R growth over grid", R.front() / R.back() >= min_growth, R.front() / R.back());
    rep.check("R at smallest r", R.front() > 1.0, R.front());
  }
  if (r_grid.size() >= 2) {
    const HomogeneityReport h = homogeneity_report(Y, {f}, r_grid);
    rep.check("homogeneity verdict inhomogeneous", h.verdict == Verdict::inhomogeneous, h.alpha);
  }
  return rep;
}

/// The Δ family X_n = L^{(p, Q+1/n)}, ϱ(n) = 1/‖g‖_{X_n}, n = 1..N.
inline DeltaFamily g_delta_family(double p, double Q, int N, const quad::Spec& spec = {}) {
  if (N < 1) throw InvalidArgument("g family needs N >= 1");
  const RearrangedFunction g(g_function(p, Q));
  DeltaFamily fam;
  for (int n = 1; n <= N; ++n) {
    const NormFunctional X = make_lorentz({p, Q + 1.0 / n}, Mode::doublestar, spec);
    const NormValue gn = X(g);
    if (!gn.finite() || !(gn.value > 0)) throw Error("g family: ‖g‖_{X_n} not finite");
    fam.members.push_back({X, 1.0 / gn.value});
  }
  return fam;
}

/// ε = min over n <= N of the closed-form star norms (the sequence grows
/// without bound in n).
inline double g_epsilon(double p, double Q, int N) {
  double eps = inf;
  for (int n = 1; n <= N; ++n) eps = std::min(eps, g_star_norm_closed(p, Q, n));
  return eps;
}

inline ScenarioReport g_scenario(double p, double Q, int N, std::size_t corpus_size = 100, std::uint64_t seed = 0,
                                 const quad::Spec& spec = {}) {
  ScenarioReport rep;
  rep.scenario = "g";
  rep.params = {{"p", p}, {"Q", Q}, {"N", static_cast<double>(N)}};
  const AnalyticDecreasing gb = g_function(p, Q);
  const RearrangedFunction g(gb);

  // d log g / d log t = -1/p - 1/(Q log t) < 0 on the support.
  bool decreasing = true;
  const double us = -p / Q;
  for (int i = 0; i < 512; ++i) {
    const double u = us - 1e-6 - std::exp(-10.0 + 20.0 * i / 511.0);
    decreasing = decreasing && (-1.0 / p - 1.0 / (Q * u)) < 0;
  }
  rep.check("g decreasing", decreasing);

  rep.grid_columns = {"n", "star_closed", "star_numeric", "rho"};
  std::vector<double> star_numeric;
  for (int n = 1; n <= N; ++n) {
    const double closed = g_star_norm_closed(p, Q, n);
    const NormValue v = lorentz_norm(g, {p, Q + 1.0 / n}, Mode::star, spec);
    rep.compare("star_norm(n=" + std::to_string(n) + ")", closed, v.value, 1e-8);
    star_numeric.push_back(v.value);
  }
  const NormValue div = lorentz_norm(g, {p, Q}, Mode::star, spec);
  rep.check("star norm at q=Q diverges", div.status == quad::Status::diverged && !div.finite());

  const DeltaFamily fam = g_delta_family(p, Q, N, spec);
  for (int n = 1; n <= N; ++n)
    rep.grid.push_back({static_cast<double>(n), g_star_norm_closed(p, Q, n), star_numeric[n - 1],
                        fam.members[n - 1].coefficient});
  const NormValue dg = delta_norm(fam, g);
  rep.compare("delta_norm(g)", 1.0, dg.value, 1e-8);

  const double eps = g_epsilon(p, Q, N);
  const double bound = p * p / (eps * (p - 1.0));
  rep.params["epsilon"] = eps;
  rep.params["embedding_constant"] = bound;
  const double adm = admissibility(fam);
  rep.check("admissibility finite and within bound", std::isfinite(adm) && adm <= bound * (1 + 1e-9), adm);

  bool embedded = true;
  double worst = 0.0;
  for (const auto& f : rearranged_corpus(corpus_size, seed)) {
    const double lhs = delta_norm(fam, f).value;
    const double rhs = bound * lorentz_norm(f, {p, Q}, Mode::doublestar, spec).value;
    worst = std::max(worst, lhs / rhs);
    embedded = embedded && lhs <= rhs * (1 + 1e-9);
  }
  rep.check("embedding bound on corpus", embedded, worst);
  return rep;
}

inline ScenarioReport oscillating_scenario(const std::vector<double>& q_list, double lmax = 40.0) {
  ScenarioReport rep;
  rep.scenario = "oscillating";
  rep.params = {{"lmax", lmax}};
  const YoungFunction phi = YoungFunction::oscillating();
  const double e1 = std::exp(-1.0);

  // a from the derivative of the power branch at 1/e, b from continuity.
  const double a = std::exp(phi.log_derivative(-1.0));
  const double b = a * e1 - std::exp(phi.log_phi(-1.0));
  rep.compare("a", 5.0 * std::exp(-3.0), a, 1e-12);
  rep.compare("b", 4.0 * std::exp(-4.0), b, 1e-12);
  rep.compare("Phi(1/e)", std::exp(-4.0), phi(e1), 1e-12);
  rep.compare("continuity at 1/e", YoungFunction::oscillating_a() * e1 - YoungFunction::oscillating_b(),
              std::exp(phi.log_phi(-1.0)), 1e-12);
  rep.compare("derivative match at 1/e", YoungFunction::oscillating_a(), a, 1e-12);

  const double defect = convexity_defect(phi, 1.0, 512);
  rep.check("convexity", defect >= -1e-12, defect);

  std::vector<double> lg;
  for (double l : ell_grid(lmax, 4001)) lg.push_back(-std::exp(l));
  for (int i = 0; i <= 400; ++i) lg.push_back(-1.0 + 21.0 * i / 400.0);
  const double el = max_elasticity(phi, lg);
  rep.check("elasticity <= 6", el <= 6.0 + 1e-9, el);
  const double d2 = delta2_estimate(phi);
  rep.check("delta2 <= 64", d2 <= 64.0, d2);

  const std::vector<double> ells = ell_grid(lmax, 4001);
  rep.grid_columns = {"ell"};
  std::vector<std::vector<double>> cols{ells};
  for (double q : q_list) {
    if (!(q > 1)) throw InvalidArgument("oscillating scenario exponents must exceed 1");
    const YoungFunction psi = YoungFunction::power(q);
    const EmbeddingProfile up = embedding_ratio_profile(phi, psi, ells);   // Ψ/Φ
    const EmbeddingProfile down = embedding_ratio_profile(psi, phi, ells); // Φ/Ψ
    const std::string tag = detail::fmt_num(q);
    if (q > 3 && q < 5) {
      rep.check("psi/phi unbounded q=" + tag, up.unbounded, up.running_max.back());
      rep.check("phi/psi unbounded q=" + tag, down.unbounded, down.running_max.back());
    }
    if (q >= 5) rep.check("psi/phi bounded by 1 q=" + tag, up.running_max.back() <= 0.0, up.running_max.back());
    if (q <= 3) rep.check("phi/psi bounded by 1 q=" + tag, down.running_max.back() <= 0.0, down.running_max.back());
    rep.grid_columns.push_back("log_psi_over_phi_q" + tag);
    rep.grid_columns.push_back("log_phi_over_psi_q" + tag);
    cols.push_back(up.log_ratio);
    cols.push_back(down.log_ratio);
  }
  for (std::size_t i = 0; i < ells.size(); ++i) {
    std::vector<double> row;
    for (const auto& c : cols) row.push_back(c[i]);
    rep.grid.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rikit
