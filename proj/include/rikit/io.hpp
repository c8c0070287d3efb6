#pragma once

// JSON function / norm specifications and deterministic JSON / CSV emitters.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rikit/funcs.hpp"
#include "rikit/homogeneity.hpp"
#include "rikit/lorentz.hpp"
#include "rikit/orlicz.hpp"
#include "rikit/repro.hpp"

namespace rikit::io {

using json = nlohmann::json;

/// Spec violation; the message starts with the offending field path.
struct SpecError : InvalidArgument {
  SpecError(const std::string& path, const std::string& msg) : InvalidArgument(path + ": " + msg) {}
};

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SpecError(path + "." + key, "missing");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return inf;
  }
  throw SpecError(path, "expected a number");
}

inline double number_field(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

inline std::string string_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw SpecError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& path) {
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw SpecError(path + "." + k, "unknown field");
  }
}

inline std::vector<Piece> pieces(const json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array of [value, length]");
  std::vector<Piece> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string pi = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw SpecError(pi, "expected [value, length]");
    const double v = number(j[i][0], pi + "[0]"), l = number(j[i][1], pi + "[1]");
    if (!(v >= 0) || !std::isfinite(v)) throw SpecError(pi + "[0]", "value must be finite and >= 0");
    if (!(l > 0) || !std::isfinite(l)) throw SpecError(pi + "[1]", "length must be finite and > 0");
    out.push_back({v, l});
  }
  return out;
}

inline json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return json(x);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FunctionSpec

struct FunctionSpec {
  enum class Kind { step, analytic_named, dilated, scaled };
  Kind kind = Kind::step;
  std::vector<Piece> pieces;                // step
  std::string name;                         // analytic-named
  std::map<std::string, double> params;     // analytic-named parameters
  double r = 1.0;                           // dilated, or wrapper on any kind
  double scalar = 1.0;                      // scaled, or wrapper on any kind
  std::shared_ptr<const FunctionSpec> inner;

  bool operator==(const FunctionSpec& o) const {
    return kind == o.kind && pieces == o.pieces && name == o.name && params == o.params && r == o.r &&
           scalar == o.scalar && (inner == o.inner || (inner && o.inner && *inner == *o.inner));
  }
};

inline const std::map<std::string, std::vector<std::string>>& analytic_names() {
  static const std::map<std::string, std::vector<std::string>> names{
      {"y-counterexample", {"p"}}, {"g", {"p", "Q"}}, {"indicator", {"t"}}, {"power-decay", {"p"}}};
  return names;
}

inline FunctionSpec function_spec_from_json(const json& j, const std::string& path = "$") {
  using detail::field;
  FunctionSpec s;
  const std::string kind = detail::string_field(j, "kind", path);
  auto wrappers = [&] {
    if (j.contains("r")) s.r = detail::number_field(j, "r", path);
    if (j.contains("scalar")) s.scalar = detail::number_field(j, "scalar", path);
    if (!(s.r > 0) || !std::isfinite(s.r)) throw SpecError(path + ".r", "must be positive and finite");
    if (!(s.scalar >= 0) || !std::isfinite(s.scalar)) throw SpecError(path + ".scalar", "must be finite and >= 0");
  };
  if (kind == "step") {
    detail::only_keys(j, {"kind", "pieces", "r", "scalar"}, path);
    s.kind = FunctionSpec::Kind::step;
    s.pieces = detail::pieces(field(j, "pieces", path), path + ".pieces");
  } else if (kind == "analytic-named") {
    s.kind = FunctionSpec::Kind::analytic_named;
    s.name = detail::string_field(j, "name", path);
    const auto it = analytic_names().find(s.name);
    if (it == analytic_names().end()) throw SpecError(path + ".name", "unknown analytic function '" + s.name + "'");
    for (const auto& [k, _] : j.items()) {
      if (k == "kind" || k == "name" || k == "r" || k == "scalar") continue;
      if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw SpecError(path + "." + k, "unknown field");
    }
    for (const auto& key : it->second) s.params[key] = detail::number_field(j, key, path);
  } else if (kind == "dilated") {
    detail::only_keys(j, {"kind", "r", "inner", "scalar"}, path);
    s.kind = FunctionSpec::Kind::dilated;
    detail::field(j, "r", path);
    s.inner = std::make_shared<FunctionSpec>(function_spec_from_json(field(j, "inner", path), path + ".inner"));
  } else if (kind == "scaled") {
    detail::only_keys(j, {"kind", "scalar", "inner", "r"}, path);
    s.kind = FunctionSpec::Kind::scaled;
    detail::field(j, "scalar", path);
    s.inner = std::make_shared<FunctionSpec>(function_spec_from_json(field(j, "inner", path), path + ".inner"));
  } else {
    throw SpecError(path + ".kind", "unknown function kind '" + kind + "'");
  }
  wrappers();
  return s;
}

inline json to_json(const FunctionSpec& s) {
  json j;
  switch (s.kind) {
    case FunctionSpec::Kind::step: {
      j["kind"] = "step";
      json arr = json::array();
      for (const auto& p : s.pieces) arr.push_back({p.value, p.length});
      j["pieces"] = arr;
      break;
    }
    case FunctionSpec::Kind::analytic_named:
      j["kind"] = "analytic-named";
      j["name"] = s.name;
      for (const auto& [k, v] : s.params) j[k] = detail::number_json(v);
      break;
    case FunctionSpec::Kind::dilated:
      j["kind"] = "dilated";
      j["inner"] = to_json(*s.inner);
      break;
    case FunctionSpec::Kind::scaled:
      j["kind"] = "scaled";
      j["inner"] = to_json(*s.inner);
      break;
  }
  if (s.r != 1.0 || s.kind == FunctionSpec::Kind::dilated) j["r"] = s.r;
  if (s.scalar != 1.0 || s.kind == FunctionSpec::Kind::scaled) j["scalar"] = s.scalar;
  return j;
}

inline RearrangedFunction build(const FunctionSpec& s) {
  RearrangedFunction f;
  switch (s.kind) {
    case FunctionSpec::Kind::step: f = RearrangedFunction(StepFunction(s.pieces)); break;
    case FunctionSpec::Kind::analytic_named: {
      const auto& P = s.params;
      if (s.name == "y-counterexample") f = y_counterexample(P.at("p"));
      else if (s.name == "g") f = g_function(P.at("p"), P.at("Q"));
      else if (s.name == "indicator") {
        if (!(P.at("t") > 0)) throw SpecError("$.t", "indicator length must be positive");
        f = indicator(P.at("t"));
      } else f = power_decay(P.at("p"));
      break;
    }
    case FunctionSpec::Kind::dilated:
    case FunctionSpec::Kind::scaled: f = build(*s.inner); break;
  }
  return f.dilated(s.r).scaled(s.scalar);
}

inline RearrangedFunction parse_function_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("$", std::string("malformed JSON: ") + e.what());
  }
  return build(function_spec_from_json(j));
}

// ---------------------------------------------------------------------------
// NormSpec

inline YoungFunction young_from_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "oscillating") return YoungFunction::oscillating();
    if (s.rfind("power-", 0) == 0) {
      try {
        std::size_t used = 0;
        const double q = std::stod(s.substr(6), &used);
        if (used == s.size() - 6) return YoungFunction::power(q);
      } catch (const std::logic_error&) {
      }
    }
    throw SpecError(path, "unknown Young function '" + s + "'");
  }
  const std::string kind = detail::string_field(j, "kind", path);
  if (kind != "piecewise-power") throw SpecError(path + ".kind", "unknown Young function kind '" + kind + "'");
  const json& arr = detail::field(j, "pieces", path);
  if (!arr.is_array()) throw SpecError(path + ".pieces", "expected an array of [x, exponent]");
  std::vector<std::pair<double, double>> pcs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string pi = path + ".pieces[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 2) throw SpecError(pi, "expected [x, exponent]");
    pcs.emplace_back(detail::number(arr[i][0], pi + "[0]"), detail::number(arr[i][1], pi + "[1]"));
  }
  try {
    return YoungFunction::piecewise_power(pcs);
  } catch (const SpecError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw SpecError(path, e.what());
  }
}

inline Weight weight_from_json(const json& j, const std::string& path) {
  const std::string kind = detail::string_field(j, "kind", path);
  if (kind == "power") return Weight::power(detail::number_field(j, "beta", path));
  if (kind == "truncated-power")
    return Weight::truncated_power(detail::number_field(j, "beta", path), detail::number_field(j, "support", path));
  if (kind == "step") return Weight::step(detail::pieces(detail::field(j, "pieces", path), path + ".pieces"));
  throw SpecError(path + ".kind", "unknown weight kind '" + kind + "'");
}

inline Mode mode_from_json(const json& j, const std::string& key, Mode dflt, const std::string& path) {
  if (!j.contains(key)) return dflt;
  const std::string m = detail::string_field(j, key, path);
  if (m == "star") return Mode::star;
  if (m == "doublestar") return Mode::doublestar;
  throw SpecError(path + "." + key, "expected 'star' or 'doublestar'");
}

inline NormFunctional norm_from_json(const json& j, const quad::Spec& spec = {}, const std::string& path = "$") {
  const std::string kind = detail::string_field(j, "kind", path);
  auto wrap = [&](auto&& make) -> NormFunctional {
    try {
      return make();
    } catch (const SpecError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw SpecError(path, e.what());
    }
  };
  if (kind == "lorentz-star" || kind == "lorentz-doublestar") {
    const LorentzParams lp{detail::number_field(j, "p", path), detail::number_field(j, "q", path)};
    return wrap([&] { return make_lorentz(lp, kind == "lorentz-star" ? Mode::star : Mode::doublestar, spec); });
  }
  if (kind == "lambda" || kind == "gamma") {
    const double q = detail::number_field(j, "q", path);
    Weight w = weight_from_json(detail::field(j, "weight", path), path + ".weight");
    std::optional<double> p;
    if (j.contains("p")) p = detail::number_field(j, "p", path);
    return wrap([&] { return make_weighted(q, w, kind == "lambda" ? Mode::star : Mode::doublestar, spec, p); });
  }
  if (kind == "orlicz-lorentz") {
    const double p = detail::number_field(j, "p", path);
    YoungFunction phi = young_from_json(detail::field(j, "phi", path), path + ".phi");
    const Mode m = mode_from_json(j, "mode", Mode::doublestar, path);
    return wrap([&] { return make_orlicz_lorentz({p, std::move(phi), m}, spec); });
  }
  if (kind == "y-space") {
    const double p = detail::number_field(j, "p", path);
    return wrap([&] { return make_y_space(p, spec); });
  }
  if (kind == "delta") {
    if (j.contains("family")) {
      const std::string fam = detail::string_field(j, "family", path);
      if (fam != "g") throw SpecError(path + ".family", "unknown Δ family '" + fam + "'");
      const double p = detail::number_field(j, "p", path), Q = detail::number_field(j, "Q", path);
      const double N = detail::number_field(j, "N", path);
      if (!(N >= 1) || N != std::floor(N)) throw SpecError(path + ".N", "must be a positive integer");
      return wrap([&] { return make_delta(g_delta_family(p, Q, static_cast<int>(N), spec), "delta(g)"); });
    }
    const json& members = detail::field(j, "members", path);
    if (!members.is_array() || members.empty()) throw SpecError(path + ".members", "expected a nonempty array");
    DeltaFamily fam;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::string mp = path + ".members[" + std::to_string(i) + "]";
      fam.members.push_back({norm_from_json(detail::field(members[i], "norm", mp), spec, mp + ".norm"),
                             detail::number_field(members[i], "coefficient", mp)});
    }
    return wrap([&] { return make_delta(fam); });
  }
  throw SpecError(path + ".kind", "unknown norm kind '" + kind + "'");
}

inline NormFunctional parse_norm_spec(std::string_view text, const quad::Spec& spec = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("$", std::string("malformed JSON: ") + e.what());
  }
  return norm_from_json(j, spec);
}

// ---------------------------------------------------------------------------
// Emitters: sorted keys, 17 significant digits, non-finite numbers as strings.

inline std::string format_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const json& j, int indent) {
  const std::string pad(indent * 2, ' '), pad_in((indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // std::map order: sorted keys
        if (!first) os << ",\n";
        first = false;
        os << pad_in << json(k).dump() << ": ";
        write_json(os, v, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool nested = std::any_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      if (!nested) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad_in;
        write_json(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: os << format_number(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

}  // namespace detail

inline std::string emit_json(const json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

/// Header plus rows sorted by the first column.
inline std::string emit_csv(const std::vector<std::string>& columns, std::vector<std::vector<double>> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return !a.empty() && !b.empty() && a.front() < b.front();
  });
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      if (std::isfinite(r[i])) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", r[i]);
        os << buf;
      } else {
        os << (std::isnan(r[i]) ? "nan" : (r[i] > 0 ? "inf" : "-inf"));
      }
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Report -> JSON

inline json to_json(const NormValue& v) {
  return json{{"value", detail::number_json(v.value)}, {"status", quad::to_string(v.status)}};
}

inline json to_json(const HomogeneityReport& h) {
  json rows = json::array();
  for (const auto& r : h.rows)
    rows.push_back({{"r", r.r}, {"ratio_min", r.min}, {"ratio_median", r.median}, {"ratio_max", r.max}});
  json j{{"norm", h.norm},
         {"rows", rows},
         {"alpha", h.alpha},
         {"residual_max", h.residual_max},
         {"spread_max", h.spread_max},
         {"multiplicativity_max", h.multiplicativity_max},
         {"h_nonincreasing", h.h_nonincreasing},
         {"tolerance", h.tolerance},
         {"verdict", to_string(h.verdict)}};
  if (h.p) j["p"] = *h.p;
  if (h.p_ref > 0) {
    j["p_ref"] = h.p_ref;
    j["scaled_ratio"] = h.scaled;
  }
  return j;
}

inline std::vector<std::vector<double>> csv_rows(const HomogeneityReport& h) {
  std::vector<std::vector<double>> out;
  for (const auto& r : h.rows) out.push_back({r.r, r.min, r.median, r.max});
  return out;
}
inline const std::vector<std::string> homogeneity_columns{"r", "ratio_min", "ratio_median", "ratio_max"};

inline json to_json(const ScenarioReport& s) {
  json params = json::object();
  for (const auto& [k, v] : s.params) params[k] = detail::number_json(v);
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"quantity", r.quantity},
                    {"closed_form", detail::number_json(r.closed)},
                    {"numeric", detail::number_json(r.numeric)},
                    {"rel_error", detail::number_json(r.rel_error)},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass}});
  json checks = json::array();
  for (const auto& c : s.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", detail::number_json(c.value)}});
  return json{{"scenario", s.scenario}, {"params", params}, {"rows", rows}, {"checks", checks}, {"pass", s.pass()}};
}

}  // namespace rikit::io
