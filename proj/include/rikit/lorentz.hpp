#pragma once

// Classical and weighted Lorentz norms, the Y-space norm, fundamental
// functions and the weight criteria for p-homogeneity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rikit/funcs.hpp"
#include "rikit/norm.hpp"
#include "rikit/quad.hpp"

namespace rikit {

enum class Mode { star, doublestar };

struct LorentzParams {
  double p = 2.0;
  double q = 2.0;  // may be +inf

  void validate() const {
    if (!(p > 1) || !std::isfinite(p)) throw InvalidArgument("Lorentz p must lie in (1, inf)");
    if (!(q >= 1)) throw InvalidArgument("Lorentz q must lie in [1, inf]");
  }
};

/// Hölder conjugate p' = p / (p - 1).
inline double conjugate(double p) { return p / (p - 1.0); }

namespace detail {

inline LogLinear log_rearrangement(const RearrangedFunction& f, Mode mode, double u, const quad::Spec& spec) {
  return mode == Mode::star ? f.log_value(u) : f.log_maximal(u, spec);
}

inline std::string fmt_num(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace detail

/// ‖f‖_{p,q} (star) or ‖f‖_{(p,q)} (doublestar).
inline NormValue lorentz_norm(const RearrangedFunction& f, LorentzParams params, Mode mode,
                              const quad::Spec& spec = {}) {
  params.validate();
  if (f.is_zero()) return {0.0, quad::Status::converged};
  const double gamma = 1.0 / params.p;
  if (std::isinf(params.q)) {
    const double ls = log_sup_power(f, mode == Mode::doublestar, gamma, spec);
    return {std::exp(ls), std::isfinite(ls) ? quad::Status::converged : quad::Status::diverged};
  }
  const double q = params.q;
  auto integrand = [&](double u) {
    return std::exp(q * detail::log_rearrangement(f, mode, u, spec).with_power(gamma, u));
  };
  const quad::Result r = quad::integrate_log_axis(integrand, spec, f.log_breaks());
  if (r.status == quad::Status::diverged) return {inf, r.status};
  return {std::pow(r.value, 1.0 / q), r.status};
}

// ---------------------------------------------------------------------------
// Weights

/// Nonnegative locally integrable weight, described on the log axis.
struct Weight {
  std::function<LogLinear(double)> log_value;
  /// Closed-form W(t) = ∫_0^t w; quadrature is used when empty.
  std::function<double(double)> primitive;
  std::vector<double> log_breaks;
  std::string name = "weight";

  double value(double t) const {
    const double u = std::log(t);
    return std::exp(log_value(u).at(u));
  }

  /// t^beta, beta > -1.
  static Weight power(double beta) {
    if (!(beta > -1)) throw InvalidArgument("power weight needs beta > -1");
    Weight w;
    w.log_value = [beta](double) { return LogLinear{beta, 0.0}; };
    w.primitive = [beta](double t) { return std::pow(t, beta + 1.0) / (beta + 1.0); };
    w.name = "power(" + detail::fmt_num(beta) + ")";
    return w;
  }

  /// t^beta on (0, support), zero after.
  static Weight truncated_power(double beta, double support) {
    if (!(beta > -1) || !(support > 0)) throw InvalidArgument("truncated power weight needs beta > -1, support > 0");
    Weight w;
    const double ls = std::log(support);
    w.log_value = [beta, ls](double u) { return u < ls ? LogLinear{beta, 0.0} : LogLinear{}; };
    w.primitive = [beta, support](double t) { return std::pow(std::min(t, support), beta + 1.0) / (beta + 1.0); };
    w.log_breaks = {ls};
    w.name = "truncated-power(" + detail::fmt_num(beta) + "," + detail::fmt_num(support) + ")";
    return w;
  }

  /// Σ c_i χ_[s_{i-1}, s_i) laid out in the given order.
  static Weight step(const std::vector<Piece>& pieces) {
    StepFunction layout(pieces);
    Weight w;
    const auto ends = layout.ends();
    w.log_value = [layout](double u) {
      const double v = layout.value_at(std::exp(u));
      return v > 0 ? LogLinear{0.0, std::log(v)} : LogLinear{};
    };
    w.primitive = [layout](double t) {
      double acc = 0.0, start = 0.0;
      for (const auto& pc : layout.pieces) {
        if (t <= start) break;
        acc += pc.value * (std::min(t, start + pc.length) - start);
        start += pc.length;
      }
      return acc;
    };
    for (double e : ends) w.log_breaks.push_back(std::log(e));
    w.name = "step";
    return w;
  }
};

/// W(t) = ∫_0^t w.
inline double weight_primitive(const Weight& w, double t, const quad::Spec& spec = {}) {
  if (w.primitive) return w.primitive(t);
  const double ut = std::log(t);
  const quad::Result r = quad::integrate_u(
      [&](double v) { return std::exp(w.log_value(v).with_power(1.0, v)); }, -inf, ut, spec, w.log_breaks);
  return r.status == quad::Status::diverged ? inf : r.value;
}

/// ‖f‖_{Λ^q(w)} (star) or ‖f‖_{Γ^q(w)} (doublestar), q finite.
inline NormValue weighted_lorentz_norm(const RearrangedFunction& f, double q, const Weight& w, Mode mode,
                                       const quad::Spec& spec = {}) {
  if (!(q >= 1) || !std::isfinite(q)) throw InvalidArgument("weighted Lorentz q must lie in [1, inf)");
  if (f.is_zero()) return {0.0, quad::Status::converged};
  auto integrand = [&](double u) {
    const LogLinear lf = detail::log_rearrangement(f, mode, u, spec);
    const LogLinear lw = w.log_value(u);
    if (lf.offset == -inf || lw.offset == -inf) return 0.0;
    return std::exp((q * lf.slope + lw.slope + 1.0) * u + (q * lf.offset + lw.offset));
  };
  std::vector<double> breaks = f.log_breaks();
  breaks.insert(breaks.end(), w.log_breaks.begin(), w.log_breaks.end());
  const quad::Result r = quad::integrate_log_axis(integrand, spec, breaks);
  if (r.status == quad::Status::diverged) return {inf, r.status};
  return {std::pow(r.value, 1.0 / q), r.status};
}

/// u(t) = ∫_t^∞ w(s)/s ds, quadrature-backed. Throws when the tail integral
/// diverges.
inline Weight gamma1_weight_transform(const Weight& w, const quad::Spec& spec = {}) {
  auto tail = [w, spec](double ut) {
    return quad::integrate_u([&](double v) { return std::exp(w.log_value(v).at(v)); }, ut, inf, spec,
                             w.log_breaks);
  };
  if (tail(0.0).status == quad::Status::diverged)
    throw Error("gamma1 transform: ∫^∞ w(s)/s ds diverges for " + w.name);
  Weight out;
  out.log_value = [tail](double u) {
    const quad::Result r = tail(u);
    return r.value > 0 && std::isfinite(r.value) ? LogLinear{0.0, std::log(r.value)} : LogLinear{};
  };
  out.log_breaks = w.log_breaks;
  out.name = "u[" + w.name + "]";
  return out;
}

// ---------------------------------------------------------------------------
// Y-space norm: (∫_0^1 (f**)^2 t^{2/p-1} dt)^{1/2} + ∫_1^∞ f** t^{1/p-1} dt.

inline NormValue y_space_norm(const RearrangedFunction& f, double p, const quad::Spec& spec = {}) {
  if (!(p > 1)) throw InvalidArgument("y-space p must lie in (1, inf)");
  if (f.is_zero()) return {0.0, quad::Status::converged};
  const double gamma = 1.0 / p;
  auto lower = [&](double u) { return std::exp(2.0 * f.log_maximal(u, spec).with_power(gamma, u)); };
  auto upper = [&](double u) { return std::exp(f.log_maximal(u, spec).with_power(gamma, u)); };
  const auto breaks = f.log_breaks();
  const quad::Result a = quad::integrate_u(lower, -inf, 0.0, spec, breaks);
  const quad::Result b = quad::integrate_u(upper, 0.0, inf, spec, breaks);
  const quad::Status st = quad::worst(a.status, b.status);
  if (st == quad::Status::diverged) return {inf, st};
  return {std::sqrt(a.value) + b.value, st};
}

// ---------------------------------------------------------------------------
// Weight criteria

struct WeightProfile {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<quad::Status> status;
  double min = inf;
  double max = -inf;
};

enum class CriterionKind { lambda, gamma };

/// lambda: W(t)/V(t); gamma: (W(t) + t^q ∫_t^∞ w(s) s^{-q} ds)/V(t), with
/// V(t) = (p/q) t^{q/p} the primitive of the L^{p,q} weight.
inline WeightProfile weight_criterion_profile(const Weight& w, double p, double q, const std::vector<double>& grid,
                                              CriterionKind kind, const quad::Spec& spec = {}) {
  if (grid.empty()) throw InvalidArgument("criterion grid must be nonempty");
  WeightProfile out;
  for (double t : grid) {
    if (!(t > 0)) throw InvalidArgument("criterion grid must be positive");
    const double v = (p / q) * std::pow(t, q / p);
    double num = weight_primitive(w, t, spec);
    quad::Status st = quad::Status::converged;
    if (kind == CriterionKind::gamma) {
      const double ut = std::log(t);
      auto integrand = [&](double s) {
        const LogLinear l = w.log_value(s);
        if (l.offset == -inf) return 0.0;
        // t^q w(s) s^{-q} ds with s = e^v, grouped around ut.
        return std::exp((l.slope + 1.0 - q) * s + l.offset + q * ut);
      };
      const quad::Result r = quad::integrate_u(integrand, ut, inf, spec, w.log_breaks);
      st = r.status;
      num = r.status == quad::Status::diverged ? inf : num + r.value;
    }
    const double ratio = num / v;
    out.t.push_back(t);
    out.value.push_back(ratio);
    out.status.push_back(st);
    out.min = std::min(out.min, ratio);
    out.max = std::max(out.max, ratio);
  }
  return out;
}

// ---------------------------------------------------------------------------
// NormFunctional factories

namespace detail {

struct LorentzModel final : NormFunctional::Model {
  LorentzParams params;
  Mode mode;
  quad::Spec spec;
  NormValue evaluate(const RearrangedFunction& f) const override { return lorentz_norm(f, params, mode, spec); }
  NormKind kind() const override { return mode == Mode::star ? NormKind::lorentz_star : NormKind::lorentz_doublestar; }
  std::string name() const override {
    return std::string(to_string(kind())) + "(p=" + fmt_num(params.p) + ",q=" + fmt_num(params.q) + ")";
  }
  std::optional<double> index() const override { return params.p; }
};

struct WeightedModel final : NormFunctional::Model {
  double q;
  Weight w;
  Mode mode;
  quad::Spec spec;
  std::optional<double> p;
  NormValue evaluate(const RearrangedFunction& f) const override { return weighted_lorentz_norm(f, q, w, mode, spec); }
  NormKind kind() const override { return mode == Mode::star ? NormKind::lambda : NormKind::gamma; }
  std::string name() const override {
    return std::string(to_string(kind())) + "(q=" + fmt_num(q) + ",w=" + w.name + ")";
  }
  std::optional<double> index() const override { return p; }
};

struct YSpaceModel final : NormFunctional::Model {
  double p;
  quad::Spec spec;
  NormValue evaluate(const RearrangedFunction& f) const override { return y_space_norm(f, p, spec); }
  NormKind kind() const override { return NormKind::y_space; }
  std::string name() const override { return "y-space(p=" + fmt_num(p) + ")"; }
  // Fundamental function ≈ t^{1/p}; the norm itself is not p-homogeneous.
  std::optional<double> index() const override { return p; }
};

}  // namespace detail

inline NormFunctional make_lorentz(LorentzParams params, Mode mode, const quad::Spec& spec = {}) {
  params.validate();
  auto m = std::make_shared<detail::LorentzModel>();
  m->params = params;
  m->mode = mode;
  m->spec = spec;
  return NormFunctional(std::move(m));
}

/// Λ^q(w) / Γ^q(w). `p` records a homogeneity index when the weight is a
/// power t^{q/p-1}.
inline NormFunctional make_weighted(double q, Weight w, Mode mode, const quad::Spec& spec = {},
                                    std::optional<double> p = std::nullopt) {
  if (!(q >= 1) || !std::isfinite(q)) throw InvalidArgument("weighted Lorentz q must lie in [1, inf)");
  auto m = std::make_shared<detail::WeightedModel>();
  m->q = q;
  m->w = std::move(w);
  m->mode = mode;
  m->spec = spec;
  m->p = p;
  return NormFunctional(std::move(m));
}

inline NormFunctional make_y_space(double p, const quad::Spec& spec = {}) {
  if (!(p > 1)) throw InvalidArgument("y-space p must lie in (1, inf)");
  auto m = std::make_shared<detail::YSpaceModel>();
  m->p = p;
  m->spec = spec;
  return NormFunctional(std::move(m));
}

/// Closed form φ_{(p,q)}(1) = (p^2 / (q (p-1)))^{1/q}.
inline double doublestar_fundamental_coefficient(double p, double q) {
  return std::isinf(q) ? conjugate(p) : std::pow(p * p / (q * (p - 1.0)), 1.0 / q);
}

/// Closed form φ_{p,q}(1) = (p/q)^{1/q}.
inline double star_fundamental_coefficient(double p, double q) {
  return std::isinf(q) ? 1.0 : std::pow(p / q, 1.0 / q);
}

}  // namespace rikit
