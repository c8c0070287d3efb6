#pragma once

// Young functions, the Orlicz–Lorentz modular and Luxemburg norm, and the
// diagnostics comparing Orlicz–Lorentz and Lorentz spaces.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rikit/funcs.hpp"
#include "rikit/lorentz.hpp"
#include "rikit/norm.hpp"
#include "rikit/quad.hpp"

namespace rikit {

/// Convex increasing Φ with Φ(0) = 0, evaluated in log space: log_phi(lx)
/// returns log Φ(e^lx).
struct YoungFunction {
  std::function<double(double)> log_phi;
  /// log Φ'(e^lx), optional.
  std::function<double(double)> log_derivative;
  /// κ(lx) with Φ(e^lx) = e^{κ lx}, optional and only consulted for lx < 0.
  /// Lets ratio profiles subtract exponents instead of huge logarithms.
  std::function<double(double)> index;
  /// x Φ'(x) / Φ(x) as a function of log x, optional.
  std::function<double(double)> elasticity;
  /// log x positions where Φ is not smooth.
  std::vector<double> kinks;
  std::string name = "young";

  double operator()(double x) const {
    if (!(x > 0)) return 0.0;
    return std::exp(log_phi(std::log(x)));
  }

  double derivative(double x) const {
    if (!log_derivative) throw Error(name + ": no derivative available");
    return std::exp(log_derivative(std::log(x)));
  }

  /// Φ(x) = x^q, q >= 1.
  static YoungFunction power(double q) {
    if (!(q >= 1) || !std::isfinite(q)) throw InvalidArgument("power Young function needs q >= 1");
    YoungFunction y;
    y.log_phi = [q](double lx) { return q * lx; };
    y.log_derivative = [q](double lx) { return std::log(q) + (q - 1.0) * lx; };
    y.index = [q](double) { return q; };
    y.elasticity = [q](double) { return q; };
    y.name = "power-" + detail::fmt_num(q);
    y.validate();
    return y;
  }

  /// x^{4 + sin log(-log x)} on (0, 1/e], a x - b after, with a = 5e^{-3} and
  /// b = 4e^{-4} making the join C^1.
  static YoungFunction oscillating() {
    const double a = oscillating_a(), b = oscillating_b();
    YoungFunction y;
    auto kappa = [](double lx) { return 4.0 + std::sin(std::log(-lx)); };
    y.log_phi = [a, b, kappa](double lx) {
      if (lx <= -1.0) return kappa(lx) * lx;
      return std::log(a * std::exp(lx) - b);
    };
    y.log_derivative = [a](double lx) {
      if (lx <= -1.0) {
        const double l = std::log(-lx);
        return (3.0 + std::sin(l)) * lx + std::log(4.0 + std::cos(l) + std::sin(l));
      }
      return std::log(a);
    };
    y.index = [a, b, kappa](double lx) {
      return lx <= -1.0 ? kappa(lx) : std::log(a * std::exp(lx) - b) / lx;
    };
    y.elasticity = [a, b](double lx) {
      if (lx <= -1.0) {
        const double l = std::log(-lx);
        return 4.0 + std::cos(l) + std::sin(l);
      }
      const double x = std::exp(lx);
      return a * x / (a * x - b);
    };
    y.kinks = {-1.0};
    y.name = "oscillating";
    y.validate();
    return y;
  }
  static double oscillating_a() { return 5.0 * std::exp(-3.0); }
  static double oscillating_b() { return 4.0 * std::exp(-4.0); }

  /// Continuous piecewise power: x^{q_0} below x_1, c_i x^{q_i} on
  /// [x_i, x_{i+1}). `pieces` lists (x_i, q_i) with x_0 = 0; exponents must be
  /// nondecreasing and >= 1 for convexity.
  static YoungFunction piecewise_power(std::vector<std::pair<double, double>> pieces) {
    if (pieces.empty() || pieces.front().first != 0.0)
      throw InvalidArgument("piecewise power needs a first piece starting at 0");
    std::vector<double> lbreak{-inf}, expo, logc;
    double c = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto [x, q] = pieces[i];
      if (!(q >= 1)) throw InvalidArgument("piecewise power exponents must be >= 1");
      if (i > 0) {
        if (!(x > pieces[i - 1].first)) throw InvalidArgument("piecewise power breakpoints must increase");
        if (q < expo.back()) throw InvalidArgument("piecewise power exponents must be nondecreasing");
        c += (expo.back() - q) * std::log(x);
        lbreak.push_back(std::log(x));
      }
      expo.push_back(q);
      logc.push_back(c);
    }
    auto find = [lbreak](double lx) {
      return static_cast<std::size_t>(std::upper_bound(lbreak.begin(), lbreak.end(), lx) - lbreak.begin()) - 1;
    };
    YoungFunction y;
    y.log_phi = [=](double lx) {
      const auto i = find(lx);
      return expo[i] * lx + logc[i];
    };
    y.log_derivative = [=](double lx) {
      const auto i = find(lx);
      return std::log(expo[i]) + (expo[i] - 1.0) * lx + logc[i];
    };
    y.index = [=](double lx) {
      const auto i = find(lx);
      return expo[i] + logc[i] / lx;
    };
    y.elasticity = [=](double lx) { return expo[find(lx)]; };
    y.kinks.assign(lbreak.begin() + 1, lbreak.end());
    std::string nm = "piecewise";
    for (const auto& [x, q] : pieces) nm += "(" + detail::fmt_num(x) + "," + detail::fmt_num(q) + ")";
    y.name = nm;
    y.validate();
    return y;
  }

  /// Monotonicity and convexity on a 512-point log grid; throws on failure.
  void validate() const {
    if (!log_phi) throw InvalidArgument("Young function needs a log evaluator");
    std::vector<double> x, v;
    for (int i = 0; i < 512; ++i) {
      const double lx = -30.0 + 38.0 * i / 511.0;
      x.push_back(std::exp(lx));
      v.push_back(std::exp(log_phi(lx)));
      if (std::isnan(v.back())) throw InvalidArgument(name + ": evaluator returned NaN");
    }
    if (!(v.front() < 1e-12)) throw InvalidArgument(name + ": Φ(0+) must vanish");
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(v[i] > v[i - 1])) throw InvalidArgument(name + ": Φ must be strictly increasing");
      const double s = (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
      if (s < prev_slope - 1e-12 * std::max(s, prev_slope)) throw InvalidArgument(name + ": Φ must be convex");
      prev_slope = s;
    }
  }
};

/// Smallest normalized second difference Φ(x_{i-1}) - 2Φ(x_i) + Φ(x_{i+1})
/// over an equispaced grid, divided by max Φ on the grid. Nonnegative for
/// convex Φ.
inline double convexity_defect(const YoungFunction& phi, double x_max, int points = 512) {
  if (points < 3 || !(x_max > 0)) throw InvalidArgument("convexity grid needs >= 3 points and x_max > 0");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = phi(x_max * i / (points - 1));
  const double scale = *std::max_element(v.begin(), v.end());
  double worst = inf;
  for (int i = 1; i + 1 < points; ++i) worst = std::min(worst, (v[i - 1] - 2 * v[i] + v[i + 1]) / scale);
  return worst;
}

/// Largest x Φ'(x) / Φ(x) over a grid of log x values.
inline double max_elasticity(const YoungFunction& phi, const std::vector<double>& log_grid) {
  double best = -inf;
  for (double lx : log_grid) {
    const double e = phi.elasticity ? phi.elasticity(lx) : std::exp(phi.log_derivative(lx) + lx - phi.log_phi(lx));
    best = std::max(best, e);
  }
  return best;
}

struct OrliczLorentzParams {
  double p = 2.0;
  YoungFunction phi;
  Mode mode = Mode::doublestar;

  void validate() const {
    if (!(p > 1) || !std::isfinite(p)) throw InvalidArgument("Orlicz–Lorentz p must lie in (1, inf)");
    if (!phi.log_phi) throw InvalidArgument("Orlicz–Lorentz params need a Young function");
  }
};

/// ∫_0^∞ Φ(t^{1/p} F(t) / λ) dt/t with F = f** (doublestar) or f* (star).
inline quad::Result modular(const RearrangedFunction& f, const OrliczLorentzParams& params, double lambda,
                            const quad::Spec& spec = {}) {
  params.validate();
  if (!(lambda > 0)) throw InvalidArgument("modular needs lambda > 0");
  if (f.is_zero()) return {0.0, 0.0, quad::Status::converged};
  const double gamma = 1.0 / params.p, ll = std::log(lambda);
  auto integrand = [&](double u) {
    const double lx = detail::log_rearrangement(f, params.mode, u, spec).with_power(gamma, u) - ll;
    if (lx == -inf) return 0.0;
    return std::exp(params.phi.log_phi(lx));
  };
  std::vector<double> breaks = f.log_breaks();
  if (!params.phi.kinks.empty()) {
    // Points where the argument of Φ crosses a kink. The argument is affine in
    // u on the outer segments and is bracketed by sampling on inner ones.
    auto arg = [&](double u) { return detail::log_rearrangement(f, params.mode, u, spec).with_power(gamma, u) - ll; };
    std::vector<double> seg = breaks;
    std::sort(seg.begin(), seg.end());
    const std::size_t nseg = seg.size() + 1;
    for (std::size_t i = 0; i < nseg; ++i) {
      const double a = i == 0 ? -inf : seg[i - 1];
      const double b = i + 1 == nseg ? inf : seg[i];
      if (std::isfinite(a) && std::isfinite(b)) {
        constexpr int samples = 8;
        for (int j = 0; j < samples; ++j) {
          double lo = a + (b - a) * j / samples, hi = a + (b - a) * (j + 1) / samples;
          for (double k : params.phi.kinks) {
            double flo = arg(lo) - k, fhi = arg(hi) - k;
            if (!(flo * fhi < 0)) continue;
            double x0 = lo, x1 = hi;
            for (int it = 0; it < 60 && x1 - x0 > 1e-14 * std::max(1.0, std::abs(x0)); ++it) {
              const double mid = 0.5 * (x0 + x1);
              const double fm = arg(mid) - k;
              ((fm < 0) == (flo < 0) ? x0 : x1) = mid;
            }
            breaks.push_back(0.5 * (x0 + x1));
          }
        }
        continue;
      }
      const double probe = std::isfinite(a) ? a + 1.0 : std::isfinite(b) ? b - 1.0 : 0.0;
      const LogLinear l = detail::log_rearrangement(f, params.mode, probe, spec);
      const double s = l.slope + gamma;
      if (l.offset == -inf || s == 0.0) continue;
      for (double k : params.phi.kinks) {
        const double u = (k + ll - l.offset) / s;
        if (u > a && u < b) breaks.push_back(u);
      }
    }
  }
  const quad::Result r = quad::integrate_log_axis(integrand, spec, breaks);
  if (r.status == quad::Status::diverged) return {inf, r.error, r.status};
  return r;
}

/// inf{λ > 0 : modular(f, λ) <= 1}, bisection on log λ.
inline NormValue luxemburg_norm(const RearrangedFunction& f, const OrliczLorentzParams& params,
                                const quad::Spec& spec = {}) {
  params.validate();
  if (f.is_zero()) return {0.0, quad::Status::converged};
  constexpr double cap = 60.0 * std::numbers::ln2;
  quad::Status status = quad::Status::converged;
  auto above = [&](double ll) {
    const quad::Result m = modular(f, params, std::exp(ll), spec);
    if (m.status == quad::Status::diverged) return true;
    status = quad::worst(status, m.status);
    return m.value > 1.0;
  };
  double lo, hi;
  if (above(0.0)) {
    lo = 0.0;
    hi = std::numbers::ln2;
    while (above(hi)) {
      lo = hi;
      if (hi >= cap) return {inf, quad::Status::diverged};
      hi = std::min(cap, hi + std::numbers::ln2);
    }
  } else {
    hi = 0.0;
    lo = -std::numbers::ln2;
    while (!above(lo)) {
      hi = lo;
      if (lo <= -cap) return {std::exp(-cap), quad::Status::inconclusive};
      lo = std::max(-cap, lo - std::numbers::ln2);
    }
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }
  return {std::exp(0.5 * (lo + hi)), status};
}

/// C₀ solving ∫_0^{1/C₀} Φ(s)/s ds = 1/p.
inline double fundamental_constant(const YoungFunction& phi, double p, const quad::Spec& spec = {}) {
  if (!(p > 1)) throw InvalidArgument("fundamental constant needs p > 1");
  quad::Spec tight = spec;
  tight.rel_tol = std::min(spec.rel_tol, 1e-13);
  auto P = [&](double w) {
    const quad::Result r = quad::integrate_u([&](double v) { return std::exp(phi.log_phi(v)); }, -inf, w, tight,
                                             phi.kinks);
    return r.value;
  };
  const double target = 1.0 / p;
  double lo = -1.0, hi = 1.0;
  while (P(lo) > target) lo *= 2.0;
  while (P(hi) < target) hi *= 2.0;
  while (hi - lo > 1e-14 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (P(mid) < target ? lo : hi) = mid;
  }
  return std::exp(-0.5 * (lo + hi));
}

/// Log grid of x values over [1e-20, 1e20], 4001 points.
inline std::vector<double> default_delta2_grid() {
  std::vector<double> g;
  const double span = 20.0 * std::numbers::ln10;
  for (int i = 0; i <= 4000; ++i) g.push_back(-span + 2.0 * span * i / 4000.0);
  return g;
}

/// Estimate of sup Φ(2x)/Φ(x) over a grid of log x spanning >= 12 decades.
inline double delta2_estimate(const YoungFunction& phi, const std::vector<double>& log_grid = default_delta2_grid()) {
  if (log_grid.size() < 2) throw InvalidArgument("delta2 grid needs at least two points");
  const auto [mn, mx] = std::minmax_element(log_grid.begin(), log_grid.end());
  if (*mx - *mn < 12.0 * std::numbers::ln10 * (1.0 - 1e-12))
    throw InvalidArgument("delta2 grid must span at least 12 decades");
  double best = 0.0;
  for (double lx : log_grid) best = std::max(best, std::exp(phi.log_phi(lx + std::numbers::ln2) - phi.log_phi(lx)));
  return best;
}

struct ModularRatio {
  double doublestar = 0.0;
  double star = 0.0;
  double ratio = 1.0;
  double delta2 = 0.0;
  double bound = 0.0;  // C₂^{log₂ p'}
  quad::Status status = quad::Status::converged;

  bool within_bound(double rel = 1e-9) const { return ratio >= 1.0 - rel && ratio <= bound * (1.0 + rel); }
};

/// Doublestar modular over star modular at λ = 1, with the Δ₂-based bound.
inline ModularRatio modular_equivalence_ratio(const RearrangedFunction& f, double p, const YoungFunction& phi,
                                              const quad::Spec& spec = {}) {
  ModularRatio out;
  const quad::Result a = modular(f, {p, phi, Mode::doublestar}, 1.0, spec);
  const quad::Result b = modular(f, {p, phi, Mode::star}, 1.0, spec);
  out.doublestar = a.value;
  out.star = b.value;
  out.status = quad::worst(a.status, b.status);
  out.ratio = f.is_zero() ? 1.0 : a.value / b.value;
  out.delta2 = delta2_estimate(phi);
  out.bound = std::pow(out.delta2, std::log2(conjugate(p)));
  return out;
}

struct EmbeddingProfile {
  std::vector<double> ell;
  std::vector<double> log_ratio;    // log Ψ(x) - log Φ(x), x = exp(-exp(ℓ))
  std::vector<double> running_max;
  int records = 0;                  // number of strict new maxima
  /// Heuristic: running max of the ratio exceeds 1e6.
  bool unbounded = false;
};

/// log Ψ(x) - log Φ(x) along x = exp(-exp(ℓ)), ℓ on the given grid.
inline EmbeddingProfile embedding_ratio_profile(const YoungFunction& phi, const YoungFunction& psi,
                                                const std::vector<double>& ell_grid) {
  EmbeddingProfile out;
  double run = -inf;
  for (double l : ell_grid) {
    const double lx = -std::exp(l);
    double lr;
    if (phi.index && psi.index && lx < 0) lr = (psi.index(lx) - phi.index(lx)) * lx;
    else lr = psi.log_phi(lx) - phi.log_phi(lx);
    if (lr > run) {
      if (run != -inf) ++out.records;
      run = lr;
    }
    out.ell.push_back(l);
    out.log_ratio.push_back(lr);
    out.running_max.push_back(run);
  }
  out.unbounded = run > std::log(1e6);
  return out;
}

/// Grid of ℓ values on [0, lmax].
inline std::vector<double> ell_grid(double lmax = 40.0, int points = 4001) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lmax * i / (points - 1));
  return g;
}

struct MarcinkiewiczCheck {
  bool holds = true;
  double lhs = 0.0;   // C₀ sup_t t^{1/p} f**(t)
  double norm = 0.0;  // Luxemburg norm
  double c0 = 0.0;
  double slack = 0.0; // norm (1 + 1e-8) - lhs
};

inline MarcinkiewiczCheck marcinkiewicz_bound_check(const RearrangedFunction& f, double p, const YoungFunction& phi,
                                                    const quad::Spec& spec = {}) {
  MarcinkiewiczCheck out;
  out.c0 = fundamental_constant(phi, p, spec);
  if (f.is_zero()) return out;
  out.lhs = out.c0 * std::exp(log_sup_power(f, true, 1.0 / p, spec));
  out.norm = luxemburg_norm(f, {p, phi, Mode::doublestar}, spec).value;
  out.slack = out.norm * (1.0 + 1e-8) - out.lhs;
  out.holds = out.slack >= 0;
  return out;
}

namespace detail {

struct OrliczModel final : NormFunctional::Model {
  OrliczLorentzParams params;
  quad::Spec spec;
  NormValue evaluate(const RearrangedFunction& f) const override { return luxemburg_norm(f, params, spec); }
  NormKind kind() const override { return NormKind::orlicz_lorentz; }
  std::string name() const override {
    return std::string("orlicz-lorentz(p=") + fmt_num(params.p) + ",phi=" + params.phi.name +
           (params.mode == Mode::star ? ",star)" : ")");
  }
  std::optional<double> index() const override { return params.p; }
};

}  // namespace detail

inline NormFunctional make_orlicz_lorentz(OrliczLorentzParams params, const quad::Spec& spec = {}) {
  params.validate();
  auto m = std::make_shared<detail::OrliczModel>();
  m->params = std::move(params);
  m->spec = spec;
  return NormFunctional(std::move(m));
}

}  // namespace rikit
