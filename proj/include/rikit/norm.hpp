#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "rikit/funcs.hpp"
#include "rikit/quad.hpp"

namespace rikit {

enum class NormKind { lorentz_star, lorentz_doublestar, lambda, gamma, orlicz_lorentz, delta, y_space };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::lorentz_star: return "lorentz-star";
    case NormKind::lorentz_doublestar: return "lorentz-doublestar";
    case NormKind::lambda: return "lambda";
    case NormKind::gamma: return "gamma";
    case NormKind::orlicz_lorentz: return "orlicz-lorentz";
    case NormKind::delta: return "delta";
    case NormKind::y_space: return "y-space";
  }
  return "?";
}

/// A norm value in [0, ∞] with the status of the computation behind it.
struct NormValue {
  double value = 0.0;
  quad::Status status = quad::Status::converged;

  bool finite() const { return std::isfinite(value); }
};

/// Type-erased rearrangement-invariant functional f -> [0, ∞].
class NormFunctional {
 public:
  struct Model {
    virtual ~Model() = default;
    virtual NormValue evaluate(const RearrangedFunction& f) const = 0;
    virtual NormKind kind() const = 0;
    virtual std::string name() const = 0;
    /// p such that the functional is p-homogeneous (exactly, or up to
    /// equivalence for the y-space norm), if there is one.
    virtual std::optional<double> index() const = 0;
  };

  explicit NormFunctional(std::shared_ptr<const Model> m) : model_(std::move(m)) {}

  NormValue operator()(const RearrangedFunction& f) const { return model_->evaluate(f); }
  NormKind kind() const { return model_->kind(); }
  std::string name() const { return model_->name(); }
  std::optional<double> index() const { return model_->index(); }

 private:
  std::shared_ptr<const Model> model_;
};

/// φ_X(t) = N(χ_[0,t)).
inline NormValue fundamental_function(const NormFunctional& n, double t) {
  return n(indicator(t));
}

}  // namespace rikit
