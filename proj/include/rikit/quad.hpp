#pragma once

// Double-exponential quadrature on the log axis.
//
// Every integral in this library is carried out in the variable u = log t,
// where the measure dt/t becomes du. Integrands are therefore supplied as
// callables of u, which keeps them representable far beyond the range where
// t = exp(u) under- or overflows.
//
// Finite segments use tanh-sinh nodes, half-infinite tails use exp-sinh
// nodes. Tails that decay only algebraically in u (the interesting case for
// norms sitting on the edge of divergence) fall back to a sequence of
// geometrically growing windows whose partial sums are either accelerated
// (Wynn epsilon) or declared divergent when they fail to behave like a
// Cauchy sequence.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace rikit::quad {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class Status { converged, inconclusive, diverged };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::inconclusive: return "inconclusive";
    case Status::diverged: return "diverged";
  }
  return "?";
}

/// Worst of two statuses (diverged > inconclusive > converged).
inline Status worst(Status a, Status b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

struct Spec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_level = 12;
  // Initial window on the log axis; the divergence probe grows it
  // geometrically from here.
  double u_min = -60.0;
  double u_max = 60.0;
  int max_windows = 17;

  bool valid() const {
    return rel_tol > 0 && abs_tol > 0 && max_level >= 3 && u_min < u_max &&
           max_windows >= 4;
  }

  /// Defaults, with RIKIT_QUAD_RELTOL overriding the relative tolerance.
  static Spec from_env() {
    Spec s;
    if (const char* env = std::getenv("RIKIT_QUAD_RELTOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && v > 0 && std::isfinite(v)) s.rel_tol = v;
    }
    return s;
  }
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  Status status = Status::converged;

  bool converged() const { return status == Status::converged; }
};

using Integrand = std::function<double(double)>;

namespace detail {

inline double tol_for(const Spec& spec, double value) {
  return std::max(spec.rel_tol * std::abs(value), spec.abs_tol);
}

inline double safe(double v) { return std::isfinite(v) ? v : (std::isnan(v) ? 0.0 : v); }

// tanh-sinh on [a, b], both finite. Nodes never coincide with the endpoints.
inline Result tanh_sinh(const Integrand& g, double a, double b, const Spec& spec) {
  if (!(a < b)) return {};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  constexpr double s_max = 4.5;
  constexpr double pi = std::numbers::pi;

  auto contribution = [&](double s) {
    // q = exp(-pi sinh s); distance to the nearer endpoint is half * 2q/(1+q).
    const double as = std::abs(s);
    const double q = std::exp(-pi * std::sinh(as));
    const double d = half * 2.0 * q / (1.0 + q);
    const double w = half * 2.0 * pi * std::cosh(as) * q / ((1.0 + q) * (1.0 + q));
    if (s == 0.0) return w * safe(g(mid));
    const double x = s > 0 ? b - d : a + d;
    if (d <= 0.0 || x <= a || x >= b || w == 0.0) return 0.0;
    return w * safe(g(x));
  };

  double h = 1.0;
  double sum = contribution(0.0);
  for (int k = 1; k * h <= s_max; ++k) sum += contribution(k * h) + contribution(-k * h);
  double prev = sum * h;
  double prev_diff = inf;
  for (int level = 1; level <= spec.max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double s = h; s <= s_max; s += 2.0 * h) add += contribution(s) + contribution(-s);
    sum += add;
    const double cur = sum * h;
    const double diff = std::abs(cur - prev);
    if (!std::isfinite(cur)) return {cur, inf, Status::inconclusive};
    if (level >= 3 && diff <= tol_for(spec, cur)) {
      // Convergence is quadratic per level; the last difference overstates
      // the remaining error.
      const double est = std::isfinite(prev_diff) && prev_diff > 0
                             ? std::min(diff, diff * diff / prev_diff)
                             : diff;
      return {cur, est, Status::converged};
    }
    prev_diff = diff;
    prev = cur;
  }
  return {prev, prev_diff, Status::inconclusive};
}

// exp-sinh on [b, inf): u = b + exp(pi/2 sinh s). Reports whether the
// truncated node range left a non-negligible contribution at its far end.
struct TailAttempt {
  Result result;
  bool boundary_negligible = true;
};

inline TailAttempt exp_sinh(const Integrand& g, double b, const Spec& spec) {
  constexpr double pi = std::numbers::pi;
  // Far end: offsets up to ~1e7 on the u axis. Beyond that the window
  // sequence takes over.
  constexpr double s_hi = 3.03;
  constexpr double s_lo = -6.5;

  auto term = [&](double s) {
    const double e = std::exp(0.5 * pi * std::sinh(s));
    if (e == 0.0) return 0.0;
    const double u = b + e;
    if (u == b) return 0.0;
    const double w = 0.5 * pi * std::cosh(s) * e;
    return w * safe(g(u));
  };

  double h = 0.5;
  double sum = 0.0;
  for (double s = s_lo; s <= s_hi + 1e-12; s += h) sum += term(s);
  double prev = sum * h;
  double prev_diff = inf;
  TailAttempt out;
  for (int level = 1; level <= spec.max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double s = s_lo + h; s <= s_hi + 1e-12; s += 2.0 * h) add += term(s);
    sum += add;
    const double cur = sum * h;
    const double diff = std::abs(cur - prev);
    if (!std::isfinite(cur)) {
      out.result = {cur, inf, Status::inconclusive};
      out.boundary_negligible = false;
      return out;
    }
    if (level >= 3 && diff <= tol_for(spec, cur)) {
      const double est = std::isfinite(prev_diff) && prev_diff > 0
                             ? std::min(diff, diff * diff / prev_diff)
                             : diff;
      out.result = {cur, est, Status::converged};
      double edge = 0.0;
      for (double s = s_hi - 0.5; s <= s_hi + 1e-12; s += 0.125) edge = std::max(edge, std::abs(term(s)));
      // Relative only: an absolute floor would pass constant tails of tiny size.
      out.boundary_negligible = edge <= spec.rel_tol * std::abs(cur);
      return out;
    }
    prev_diff = diff;
    prev = cur;
  }
  out.result = {prev, prev_diff, Status::inconclusive};
  out.boundary_negligible = false;
  return out;
}

// Wynn epsilon acceleration of a sequence of partial sums. Returns the last
// two even-column estimates of the highest order that was reached.
inline std::pair<double, double> wynn_epsilon(const std::vector<double>& sums) {
  const std::size_t n = sums.size();
  if (n < 3) return {sums.back(), sums.size() > 1 ? sums[n - 2] : sums.back()};
  // Column -1 is zero, column 0 the sums.
  std::vector<double> col_prev(n, 0.0), col(sums);
  std::vector<std::vector<double>> even_cols{sums};
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    bool ok = true;
    for (std::size_t j = 0; j + k < n; ++j) {
      const double d = col[j + 1] - col[j];
      if (d == 0.0 || !std::isfinite(d)) {
        ok = false;
        break;
      }
      next[j] = col_prev[j + 1] + 1.0 / d;
    }
    if (!ok) break;
    col_prev = col;
    col = next;
    if (k % 2 == 0) even_cols.push_back(col);
  }
  // Highest even column with at least two entries.
  for (auto it = even_cols.rbegin(); it != even_cols.rend(); ++it) {
    if (it->size() >= 2) return {it->back(), (*it)[it->size() - 2]};
  }
  return {sums.back(), sums[n - 2]};
}

// Window sequence on [b, inf). Windows end at E_k = E_0 2^k on the absolute
// u axis so that pure power tails |u|^-a produce exactly geometric
// increments.
// `first_end` is E_0 (defaults to the spec window) and `max_end` caps the
// extent, which callers working in t rather than u need to stay below the
// exp() overflow threshold.
inline Result window_tail(const Integrand& g, double b, const Spec& spec, double first_end = 0.0,
                          double max_end = inf) {
  const double e0 = std::max(first_end > 0 ? first_end : std::abs(spec.u_max), 2.0 * std::abs(b) + 1.0);
  double lo = b;
  double hi = std::max(b + 1.0, e0);
  std::vector<double> sums;
  std::vector<double> incs;
  double total = 0.0;
  double err = 0.0;
  Status seg_status = Status::converged;
  for (int k = 0; k <= spec.max_windows && hi <= max_end; ++k) {
    Spec inner = spec;
    inner.rel_tol = std::min(spec.rel_tol, 1e-13);
    const Result r = tanh_sinh(g, lo, hi, inner);
    if (r.status != Status::converged) seg_status = worst(seg_status, Status::inconclusive);
    total += r.value;
    err += r.error;
    sums.push_back(total);
    incs.push_back(r.value);
    lo = hi;
    hi *= 2.0;
  }
  const std::size_t n = incs.size();
  if (n < 4) return {total, inf, Status::inconclusive};
  const double tol = tol_for(spec, total);
  auto ratio = [&](std::size_t i) { return incs[i - 1] > 0 ? incs[i] / incs[i - 1] : 0.0; };
  const double r1 = ratio(n - 1), r2 = ratio(n - 2), r3 = ratio(n - 3);
  // Growth is scale free: a constant tail of size 1e-40 still diverges.
  if (std::min({r1, r2, r3}) >= 0.999) return {inf, inf, Status::diverged};
  // Negligible increments: converged on the nose.
  if (std::abs(incs[n - 1]) <= 0.1 * tol && std::abs(incs[n - 2]) <= tol) {
    return {total, err + std::abs(incs[n - 1]), seg_status};
  }
  if (std::max({r1, r2, r3}) >= 0.999 || std::min({r1, r2, r3}) <= 0.0) {
    return {total, std::abs(incs[n - 1]) * 1e3, Status::inconclusive};
  }
  const auto [est, est_prev] = wynn_epsilon(sums);
  const double west = std::abs(est - est_prev) + err;
  const Status st = west <= tol_for(spec, est) ? seg_status : Status::inconclusive;
  return {est, west, st};
}

// [b, inf) tail: exp-sinh first, windows when the tail is too heavy.
inline Result right_tail(const Integrand& g, double b, const Spec& spec) {
  const TailAttempt t = exp_sinh(g, b, spec);
  if (t.result.converged() && t.boundary_negligible) return t.result;
  return window_tail(g, b, spec);
}

inline Result left_tail(const Integrand& g, double b, const Spec& spec) {
  return right_tail([&](double v) { return g(-v); }, -b, spec);
}

inline void accumulate(Result& acc, const Result& part) {
  acc.status = worst(acc.status, part.status);
  if (part.status == Status::diverged) {
    acc.value = inf;
    acc.error = inf;
    return;
  }
  acc.value += part.value;
  acc.error += part.error;
}

inline Result finish(Result r, const Spec& spec) {
  if (r.status == Status::diverged) return {inf, inf, Status::diverged};
  if (r.status == Status::converged && r.error > tol_for(spec, r.value)) {
    r.status = Status::inconclusive;
  }
  return r;
}

}  // namespace detail

/// ∫_lo^hi G(u) du where lo may be -inf and hi may be +inf. `breaks` are
/// points of non-smoothness of G; the integrand is assumed smooth between
/// them.
inline Result integrate_u(const Integrand& g, double lo, double hi, const Spec& spec = {},
                          std::vector<double> breaks = {}) {
  if (!(lo < hi)) return {};
  std::erase_if(breaks, [&](double x) { return !(x > lo && x < hi) || !std::isfinite(x); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> pts;
  if (std::isfinite(lo)) pts.push_back(lo);
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  if (std::isfinite(hi)) pts.push_back(hi);
  if (pts.empty()) pts.push_back(0.0);

  Result acc;
  if (!std::isfinite(lo)) detail::accumulate(acc, detail::left_tail(g, pts.front(), spec));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] < pts[i + 1]) detail::accumulate(acc, detail::tanh_sinh(g, pts[i], pts[i + 1], spec));
  }
  if (!std::isfinite(hi)) detail::accumulate(acc, detail::right_tail(g, pts.back(), spec));
  return detail::finish(acc, spec);
}

/// ∫_0^∞ F(t) dt/t with the integrand supplied as G(u) = F(e^u).
inline Result integrate_log_axis(const Integrand& g, const Spec& spec = {},
                                 std::vector<double> log_breaks = {}) {
  return integrate_u(g, -inf, inf, spec, std::move(log_breaks));
}

namespace detail {

// ∫_a^b F(t) dt on the log axis. Tails run on windows capped where exp()
// stays normal, so a t-space integrand whose mass sits below ~1e-304 (or
// above ~1e304) comes back extrapolated and flagged inconclusive.
inline Result t_space(const Integrand& f, double a, double b, const Spec& spec, const std::vector<double>& breaks) {
  constexpr double extent = 700.0;
  auto g = [&](double u) {
    const double t = std::exp(u);
    return t < std::numeric_limits<double>::min() || !std::isfinite(t) ? 0.0 : f(t) * t;
  };
  auto mirrored = [&](double v) { return g(-v); };
  const double lo = a == 0.0 ? -inf : std::log(a);
  const double hi = std::isfinite(b) ? std::log(b) : inf;
  const double in_lo = std::isfinite(lo) ? lo : std::min(hi, 0.0);
  const double in_hi = std::isfinite(hi) ? hi : std::max(lo, 0.0);
  std::vector<double> ub;
  for (double x : breaks)
    if (x > 0) ub.push_back(std::log(x));
  Result acc;
  if (!std::isfinite(lo)) accumulate(acc, window_tail(mirrored, -in_lo, spec, 1.0, extent));
  if (in_lo < in_hi) accumulate(acc, integrate_u(g, in_lo, in_hi, spec, ub));
  if (!std::isfinite(hi)) accumulate(acc, window_tail(g, in_hi, spec, 1.0, extent));
  return finish(acc, spec);
}

}  // namespace detail

/// ∫_a^b F(t) dt for 0 <= a < b <= ∞. Intervals touching 0 or ∞ are mapped
/// to the log axis; `breaks` are given in t. Integrands with heavy
/// logarithmic tails should go through integrate_u in log form instead.
inline Result integrate_interval(const Integrand& f, double a, double b, const Spec& spec = {},
                                 std::vector<double> breaks = {}) {
  if (!(a < b)) return {};
  if (a == 0.0 || !std::isfinite(b)) return detail::t_space(f, a, b, spec, breaks);
  return integrate_u(f, a, b, spec, std::move(breaks));
}

/// Classifies ∫_a^b F(t) dt for nonnegative F by the Cauchy behaviour of
/// integrals over geometrically growing windows on the log axis. Returns the
/// limit estimate when converged.
inline Result divergence_probe(const Integrand& f, double a, double b, const Spec& spec = {}) {
  if (!(a < b)) return {};
  return detail::t_space(f, a, b, spec, {});
}

}  // namespace rikit::quad
