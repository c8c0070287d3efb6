#pragma once

// Functions on [0, ∞) represented through their nonincreasing rearrangement.
//
// Values are handled in log coordinates: for u = log t a body reports
// log f*(e^u) as slope * u + offset. Bodies whose rearrangement behaves like
// t^a near 0 report slope = a, so that weights t^b combine with them without
// cancellation even for |u| in the millions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rikit/quad.hpp"

namespace rikit {

using quad::inf;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

/// log-value of the form slope * u + offset.
struct LogLinear {
  double slope = 0.0;
  double offset = -inf;

  double at(double u) const { return offset == -inf ? -inf : slope * u + offset; }
  /// Exponent of t^gamma * value, grouped so that slope == -gamma cancels exactly.
  double with_power(double gamma, double u) const {
    return offset == -inf ? -inf : (slope + gamma) * u + offset;
  }
  LogLinear shifted(double du, double log_scale) const {
    // value at u + du, times exp(log_scale)
    if (offset == -inf) return *this;
    return {slope, slope * du + offset + log_scale};
  }
};

// ---------------------------------------------------------------------------
// Step functions

struct Piece {
  double value = 0.0;
  double length = 0.0;
  bool operator==(const Piece&) const = default;
};

/// A nonnegative simple function laid out on consecutive intervals of
/// [0, ∞) in the order given. Only the multiset of pieces matters for the
/// rearrangement; the layout matters for pointwise sums.
struct StepFunction {
  std::vector<Piece> pieces;

  StepFunction() = default;
  explicit StepFunction(std::vector<Piece> p) : pieces(std::move(p)) { validate(); }

  void validate() const {
    for (const auto& pc : pieces) {
      if (!(pc.length > 0) || !std::isfinite(pc.length))
        throw InvalidArgument("step piece length must be positive and finite");
      if (!(pc.value >= 0) || !std::isfinite(pc.value))
        throw InvalidArgument("step piece value must be nonnegative and finite");
    }
  }

  double value_at(double t) const {
    double start = 0.0;
    for (const auto& pc : pieces) {
      if (t >= start && t < start + pc.length) return pc.value;
      start += pc.length;
    }
    return 0.0;
  }

  std::vector<double> ends() const {
    std::vector<double> out;
    double s = 0.0;
    for (const auto& pc : pieces) out.push_back(s += pc.length);
    return out;
  }

  StepFunction scaled(double a) const {
    StepFunction out = *this;
    for (auto& pc : out.pieces) pc.value *= a;
    return out;
  }

  bool operator==(const StepFunction&) const = default;
};

/// Pointwise sum on the common refinement of both layouts.
inline StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  std::vector<double> cuts = f.ends();
  const auto ge = g.ends();
  cuts.insert(cuts.end(), ge.begin(), ge.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  StepFunction out;
  double prev = 0.0;
  for (double c : cuts) {
    const double mid = 0.5 * (prev + c);
    out.pieces.push_back({f.value_at(mid) + g.value_at(mid), c - prev});
    prev = c;
  }
  return out;
}

/// Nonincreasing step function: value[i] on [end[i-1], end[i]), 0 after.
class StepDecreasing {
 public:
  struct Level {
    double value;
    double end;
    bool operator==(const Level&) const = default;
  };

  StepDecreasing() = default;

  explicit StepDecreasing(std::vector<Level> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (!(levels_[i].value > 0) || !(levels_[i].end > 0))
        throw InvalidArgument("step levels must be positive");
      if (i > 0 && !(levels_[i].value < levels_[i - 1].value && levels_[i].end > levels_[i - 1].end))
        throw InvalidArgument("step levels must be strictly decreasing with increasing ends");
    }
    cumulative_.reserve(levels_.size());
    double acc = 0.0, start = 0.0;
    for (const auto& l : levels_) {
      acc += l.value * (l.end - start);
      cumulative_.push_back(acc);
      start = l.end;
    }
  }

  const std::vector<Level>& levels() const { return levels_; }
  bool empty() const { return levels_.empty(); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double support() const { return levels_.empty() ? 0.0 : levels_.back().end; }

  double value_at(double t) const {
    const auto it = std::upper_bound(levels_.begin(), levels_.end(), t,
                                     [](double x, const Level& l) { return x < l.end; });
    return it == levels_.end() ? 0.0 : it->value;
  }

  /// ∫_0^t f*, exact.
  double primitive(double t) const {
    const auto it = std::upper_bound(levels_.begin(), levels_.end(), t,
                                     [](double x, const Level& l) { return x < l.end; });
    if (it == levels_.end()) return total();
    const auto i = static_cast<std::size_t>(it - levels_.begin());
    const double start = i == 0 ? 0.0 : levels_[i - 1].end;
    const double before = i == 0 ? 0.0 : cumulative_[i - 1];
    return before + it->value * (t - start);
  }

  LogLinear log_value(double u) const {
    if (levels_.empty()) return {};
    const double t = std::exp(u);
    if (t < levels_.front().end) return {0.0, std::log(levels_.front().value)};
    const double v = value_at(t);
    return v > 0 ? LogLinear{0.0, std::log(v)} : LogLinear{};
  }

  LogLinear log_maximal(double u) const {
    if (levels_.empty()) return {};
    const double t = std::exp(u);
    if (t <= levels_.front().end) return {0.0, std::log(levels_.front().value)};
    if (t >= support()) return {-1.0, std::log(total())};
    return {0.0, std::log(primitive(t) / t)};
  }

  std::vector<double> log_breaks() const {
    std::vector<double> out;
    for (const auto& l : levels_) out.push_back(std::log(l.end));
    return out;
  }

  /// log sup_{t>0} t^gamma f*(t) (or f**), gamma > 0, from the finitely many
  /// candidate points where the supremum can sit.
  double log_sup_power(bool doublestar, double gamma) const {
    if (levels_.empty()) return -inf;
    double best = -inf;
    if (!doublestar) {
      for (const auto& l : levels_) best = std::max(best, std::log(l.value) + gamma * std::log(l.end));
      return best;
    }
    // t^gamma f**(t) = t^(gamma-1) (A + v t) on each piece, which has no
    // interior maximum; beyond the support it decays like t^(gamma-1).
    if (gamma >= 1.0) return inf;
    for (const auto& l : levels_)
      best = std::max(best, std::log(primitive(l.end)) + (gamma - 1.0) * std::log(l.end));
    return best;
  }

  bool operator==(const StepDecreasing& o) const { return levels_ == o.levels_; }

 private:
  std::vector<Level> levels_;
  std::vector<double> cumulative_;
};

/// Nonincreasing rearrangement of a step function. Equal values merge.
inline StepDecreasing rearrange_step(const StepFunction& f) {
  f.validate();
  std::vector<Piece> pcs;
  for (const auto& p : f.pieces)
    if (p.value > 0) pcs.push_back(p);
  std::stable_sort(pcs.begin(), pcs.end(), [](const Piece& a, const Piece& b) { return a.value > b.value; });
  std::vector<StepDecreasing::Level> levels;
  double end = 0.0;
  for (const auto& p : pcs) {
    end += p.length;
    if (!levels.empty() && levels.back().value == p.value)
      levels.back().end = end;
    else
      levels.push_back({p.value, end});
  }
  return StepDecreasing(std::move(levels));
}

// ---------------------------------------------------------------------------
// Analytic rearrangements

/// Closed-form nonincreasing function, described on the log axis.
struct AnalyticDecreasing {
  std::function<LogLinear(double)> log_value;
  /// Closed-form log f**(e^u); when empty, f** comes from quadrature of f*.
  std::function<LogLinear(double)> log_maximal;
  /// sup{t : f*(t) > 0}, if finite.
  std::optional<double> support;
  /// Points on the log axis where f* or f** fail to be smooth.
  std::vector<double> log_breaks;
  std::string name = "analytic";

  /// Checks monotonicity on a 256-point log grid; throws on violation.
  void validate() const {
    if (!log_value) throw InvalidArgument("analytic function needs an evaluator");
    const double lo = -30.0;
    const double hi = support ? std::log(*support) : 30.0;
    double prev = inf;
    for (int i = 0; i < 256; ++i) {
      const double u = lo + (hi - lo) * i / 256.0;
      const double v = log_value(u).at(u);
      if (std::isnan(v)) throw InvalidArgument(name + ": evaluator returned NaN");
      if (v > prev + 1e-12 * std::max(1.0, std::abs(prev)))
        throw InvalidArgument(name + ": evaluator is not nonincreasing");
      prev = v;
    }
  }

  /// Builds from ordinary evaluators t -> f*(t) and (optionally) t -> ∫_0^t f*.
  static AnalyticDecreasing from_linear(std::function<double(double)> f,
                                        std::function<double(double)> primitive = {},
                                        std::optional<double> support = std::nullopt,
                                        std::string name = "analytic") {
    AnalyticDecreasing a;
    a.log_value = [f](double u) {
      const double v = f(std::exp(u));
      return v > 0 ? LogLinear{0.0, std::log(v)} : LogLinear{};
    };
    if (primitive) {
      a.log_maximal = [primitive](double u) {
        const double t = std::exp(u);
        const double pv = primitive(t);
        return pv > 0 ? LogLinear{0.0, std::log(pv / t)} : LogLinear{};
      };
    }
    a.support = support;
    if (support) a.log_breaks.push_back(std::log(*support));
    a.name = std::move(name);
    a.validate();
    return a;
  }
};

namespace detail {

// log f**(e^u) for an analytic body without closed form, by quadrature of
// f*(e^v) e^v over (-inf, u], scaled by its value at the upper limit.
inline LogLinear analytic_log_maximal(const AnalyticDecreasing& a, double u, const quad::Spec& spec) {
  const double u_sup = a.support ? std::log(*a.support) : inf;
  const double uc = std::min(u, u_sup);
  const double u_ref = uc < u_sup ? uc : std::nextafter(uc, -inf);
  const LogLinear ref = a.log_value(u_ref);
  if (ref.offset == -inf) return {};
  auto integrand = [&](double v) {
    const LogLinear lv = a.log_value(v);
    if (lv.offset == -inf) return 0.0;
    const double e = lv.slope == ref.slope
                         ? (lv.slope + 1.0) * (v - u_ref) + (lv.offset - ref.offset)
                         : lv.with_power(1.0, v) - ref.with_power(1.0, u_ref);
    return std::exp(e);
  };
  std::vector<double> breaks;
  for (double b : a.log_breaks)
    if (b < uc) breaks.push_back(b);
  const quad::Result r = quad::integrate_u(integrand, -inf, uc, spec, breaks);
  if (r.status == quad::Status::diverged || !std::isfinite(r.value)) return {0.0, inf};
  const double log_i = std::log(r.value);
  // log P = (slope + 1) u + offset + log I, so log f** keeps the body's slope.
  if (u <= uc) return {ref.slope, ref.offset + log_i};
  // Past the support: P is constant, f** = P / t.
  return {-1.0, ref.with_power(1.0, u_ref) + log_i};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// RearrangedFunction: scalar * body(r t)

class RearrangedFunction {
 public:
  using Body = std::variant<StepDecreasing, AnalyticDecreasing>;

  RearrangedFunction() : body_(StepDecreasing{}) {}
  RearrangedFunction(StepDecreasing s) : body_(std::move(s)) {}  // NOLINT(implicit)
  RearrangedFunction(const StepFunction& f) : body_(rearrange_step(f)) {}  // NOLINT(implicit)
  RearrangedFunction(AnalyticDecreasing a) : body_(std::move(a)) {  // NOLINT(implicit)
    std::get<AnalyticDecreasing>(body_).validate();
  }

  const Body& body() const { return body_; }
  double dilation() const { return r_; }
  double scalar() const { return scalar_; }
  bool is_step() const { return std::holds_alternative<StepDecreasing>(body_); }
  const StepDecreasing* step() const { return std::get_if<StepDecreasing>(&body_); }
  const AnalyticDecreasing* analytic() const { return std::get_if<AnalyticDecreasing>(&body_); }

  bool is_zero() const {
    if (scalar_ == 0.0) return true;
    const auto* s = step();
    return s && s->empty();
  }

  /// scalar * body(r t).
  double evaluate(double t) const {
    if (is_zero()) return 0.0;
    if (const auto* s = step()) return scalar_ * s->value_at(r_ * t);
    const double u = std::log(r_ * t);
    return scalar_ * std::exp(analytic()->log_value(u).at(u));
  }

  LogLinear log_value(double u) const {
    if (is_zero()) return {};
    const double ub = u + log_r();
    const LogLinear body = step() ? step()->log_value(ub) : analytic()->log_value(ub);
    return body.shifted(log_r(), std::log(scalar_));
  }

  LogLinear log_maximal(double u, const quad::Spec& spec = {}) const {
    if (is_zero()) return {};
    const double ub = u + log_r();
    LogLinear body;
    if (const auto* s = step()) {
      body = s->log_maximal(ub);
    } else {
      const auto* a = analytic();
      body = a->log_maximal ? a->log_maximal(ub) : detail::analytic_log_maximal(*a, ub, spec);
    }
    return body.shifted(log_r(), std::log(scalar_));
  }

  /// Points on the log axis where f* or f** fail to be smooth.
  std::vector<double> log_breaks() const {
    std::vector<double> b = step() ? step()->log_breaks() : analytic()->log_breaks;
    for (double& x : b) x -= log_r();
    return b;
  }

  std::optional<double> support() const {
    if (is_zero()) return 0.0;
    if (const auto* s = step()) return s->support() / r_;
    const auto& sup = analytic()->support;
    return sup ? std::optional<double>(*sup / r_) : std::nullopt;
  }

  RearrangedFunction dilated(double r) const {
    if (!(r > 0) || !std::isfinite(r)) throw InvalidArgument("dilation factor must be positive");
    RearrangedFunction out = *this;
    out.r_ = r_ * r;
    return out;
  }

  RearrangedFunction scaled(double a) const {
    if (!(a >= 0) || !std::isfinite(a)) throw InvalidArgument("scalar must be nonnegative");
    RearrangedFunction out = *this;
    out.scalar_ = scalar_ * a;
    return out;
  }

  double log_r() const { return std::log(r_); }

 private:
  Body body_;
  double r_ = 1.0;
  double scalar_ = 1.0;
};

// ---------------------------------------------------------------------------
// Operations

inline RearrangedFunction dilate(const RearrangedFunction& f, double r) { return f.dilated(r); }

/// ∫_0^t f*(s) ds; +inf when the integral diverges at 0.
inline double primitive(const RearrangedFunction& f, double t, const quad::Spec& spec = {}) {
  if (!(t > 0)) throw InvalidArgument("primitive needs t > 0");
  if (f.is_zero()) return 0.0;
  if (const auto* s = f.step()) return f.scalar() * s->primitive(f.dilation() * t) / f.dilation();
  const double u = std::log(t);
  return std::exp(f.log_maximal(u, spec).with_power(1.0, u));
}

/// f**(t) = (1/t) ∫_0^t f*.
inline double maximal(const RearrangedFunction& f, double t, const quad::Spec& spec = {}) {
  if (!(t > 0)) throw InvalidArgument("maximal needs t > 0");
  if (f.is_zero()) return 0.0;
  if (const auto* s = f.step()) {
    const double rt = f.dilation() * t;
    return f.scalar() * s->primitive(rt) / rt;
  }
  const double u = std::log(t);
  return std::exp(f.log_maximal(u, spec).at(u));
}

inline double evaluate(const RearrangedFunction& f, double t) { return f.evaluate(t); }

/// χ_[0,t).
inline RearrangedFunction indicator(double t) {
  if (!(t > 0)) throw InvalidArgument("indicator length must be positive");
  return StepDecreasing({{1.0, t}});
}

/// log sup_{t>0} t^gamma F(t) with F = f* or f**. Exact for step bodies,
/// grid search plus golden-section refinement otherwise.
inline double log_sup_power(const RearrangedFunction& f, bool doublestar, double gamma,
                            const quad::Spec& spec = {}) {
  if (f.is_zero()) return -inf;
  const double shift = -gamma * f.log_r() + std::log(f.scalar());
  if (const auto* s = f.step()) return s->log_sup_power(doublestar, gamma) + shift;
  // Analytic: search on the body, then rescale.
  RearrangedFunction body(*f.analytic());
  auto h = [&](double u) {
    const LogLinear l = doublestar ? body.log_maximal(u, spec) : body.log_value(u);
    return l.with_power(gamma, u);
  };
  double lo = spec.u_min, hi = spec.u_max;
  if (auto sup = body.support()) hi = std::min(hi, std::log(*sup) + (doublestar ? 20.0 : 0.0));
  constexpr int n = 512;
  double best = -inf;
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + (hi - lo) * i / n;
    const double v = h(doublestar || i < n ? u : std::nextafter(u, -inf));
    if (v > best) best = v, best_i = i;
  }
  for (double b : body.log_breaks()) {
    const double v = h(std::nextafter(b, -inf));
    if (v > best) best = v;
  }
  const double step = (hi - lo) / n;
  double a = lo + step * std::max(0, best_i - 1), c = lo + step * std::min(n, best_i + 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80 && c - a > 1e-12; ++it) {
    const double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    if (h(x1) > h(x2))
      c = x2;
    else
      a = x1;
  }
  best = std::max(best, h(0.5 * (a + c)));
  return best + shift;
}

}  // namespace rikit
