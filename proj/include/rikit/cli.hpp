#pragma once

// Command dispatch for the rikit command-line tool. Kept in a header so tests
// can drive it without spawning processes.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rikit/corpus.hpp"
#include "rikit/homogeneity.hpp"
#include "rikit/io.hpp"
#include "rikit/orlicz.hpp"
#include "rikit/repro.hpp"

namespace rikit::cli {

using io::json;

enum Exit { ok = 0, usage = 1, failed = 2 };

namespace detail {

struct Outputs {
  std::string json_path;
  std::string csv_path;
};

inline void write(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
}

inline YoungFunction young(const std::string& text) {
  if (!text.empty() && text.front() == '{') return io::young_from_json(json::parse(text), "$");
  return io::young_from_json(json(text), "$");
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad number '" + item + "' in list");
    }
  }
  return out;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rikit: rearrangement-invariant norms and dilation experiments"};
  app.require_subcommand(1);
  detail::Outputs o;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--json", o.json_path, "JSON report path (default stdout)");
    sc->add_option("--csv", o.csv_path, "CSV grid path");
    sc->add_option("--seed", seed, "seed for random corpora");
  };

  std::string norm_text, fn_text;
  std::vector<std::string> fn_list;

  auto* norm = app.add_subcommand("norm", "evaluate a norm");
  norm->add_option("--norm", norm_text, "NormSpec JSON")->required();
  norm->add_option("--fn", fn_text, "FunctionSpec JSON")->required();
  common(norm);

  double t = 1.0, tmin = 0, tmax = 0;
  int points = 0;
  auto* fund = app.add_subcommand("fundamental", "fundamental function");
  fund->add_option("--norm", norm_text, "NormSpec JSON")->required();
  fund->add_option("--t", t, "measure of the set");
  fund->add_option("--tmin", tmin, "grid start");
  fund->add_option("--tmax", tmax, "grid end");
  fund->add_option("--points", points, "grid points");
  common(fund);

  double rmin = 1e-3, rmax = 1e3, tol = 1e-6;
  int corpus = 20, rpoints = 13;
  auto* hom = app.add_subcommand("homogeneity", "dilation ratios and power-law fit");
  hom->add_option("--norm", norm_text, "NormSpec JSON")->required();
  hom->add_option("--fn", fn_list, "FunctionSpec JSON (repeatable); default a random corpus");
  hom->add_option("--corpus", corpus, "random corpus size when no --fn is given");
  hom->add_option("--rmin", rmin, "smallest r");
  hom->add_option("--rmax", rmax, "largest r");
  hom->add_option("--points", rpoints, "r grid points");
  hom->add_option("--tol", tol, "homogeneity tolerance");
  common(hom);

  double p = 0, smin = 1e-6, smax = 1e6;
  int spoints = 25;
  auto* ren = app.add_subcommand("renorm", "sup over s of s^{1/p} N(D_s f)");
  ren->add_option("--norm", norm_text, "NormSpec JSON")->required();
  ren->add_option("--fn", fn_text, "FunctionSpec JSON")->required();
  ren->add_option("--p", p, "exponent (default: the norm's index)");
  ren->add_option("--smin", smin, "smallest s");
  ren->add_option("--smax", smax, "largest s");
  ren->add_option("--points", spoints, "s grid points");
  common(ren);

  double Q = 3.0;
  int N = 20;
  double dp = 2.0;
  auto* del = app.add_subcommand("delta", "Δ norm of the g family");
  del->add_option("--p", dp, "p");
  del->add_option("--Q", Q, "Q");
  del->add_option("--N", N, "family size");
  del->add_option("--fn", fn_text, "FunctionSpec JSON (default g itself)");
  common(del);

  std::string phi_text, psi_text;
  double lmax = 40.0;
  int lpoints = 4001;
  auto* emb = app.add_subcommand("embed-check", "log Ψ/Φ profile along x = exp(-exp(ℓ))");
  emb->add_option("--phi", phi_text, "Young function: power-<q>, oscillating or JSON")->required();
  emb->add_option("--psi", psi_text, "Young function: power-<q>, oscillating or JSON")->required();
  emb->add_option("--lmax", lmax, "largest ℓ");
  emb->add_option("--points", lpoints, "ℓ grid points");
  common(emb);

  std::string scenario_name, q_list = "3.5,4,4.5,5";
  double sp = 2.0, yrmin = 1e-12, yrmax = 1e-2;
  int gcorpus = 100;
  auto* sc = app.add_subcommand("scenario", "reproduce a construction: y, g or oscillating");
  sc->add_option("name", scenario_name, "y | g | oscillating")->required()->check(CLI::IsMember({"y", "g", "oscillating"}));
  sc->add_option("--p", sp, "p");
  sc->add_option("--rmin", yrmin, "y: smallest r");
  sc->add_option("--rmax", yrmax, "y: largest r");
  sc->add_option("--Q", Q, "g: Q");
  sc->add_option("--N", N, "g: family size");
  sc->add_option("--corpus", gcorpus, "g: embedding corpus size");
  sc->add_option("--q-list", q_list, "oscillating: comma-separated exponents");
  sc->add_option("--lmax", lmax, "oscillating: largest ℓ");
  common(sc);

  std::vector<std::string> argv_store{"rikit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  const quad::Spec qspec = quad::Spec::from_env();
  try {
    json report;
    std::string csv;
    int status = Exit::ok;

    if (*norm) {
      const NormFunctional n = io::parse_norm_spec(norm_text, qspec);
      const NormValue v = n(io::parse_function_spec(fn_text));
      report = io::to_json(v);
      report["command"] = "norm";
      report["norm"] = n.name();
    } else if (*fund) {
      const NormFunctional n = io::parse_norm_spec(norm_text, qspec);
      report["command"] = "fundamental";
      report["norm"] = n.name();
      report["t"] = t;
      report["phi"] = io::to_json(fundamental_function(n, t));
      if (points > 0) {
        if (!(tmin > 0 && tmax >= tmin)) throw InvalidArgument("fundamental grid needs 0 < tmin <= tmax");
        const auto idx = n.index();
        std::vector<std::vector<double>> rows;
        for (double s : log_grid(tmin, tmax, points)) {
          const double v = fundamental_function(n, s).value;
          rows.push_back({s, v, idx ? v / std::pow(s, 1.0 / *idx) : v});
        }
        csv = io::emit_csv({"t", "phi", "phi_over_t_pow"}, rows);
      }
    } else if (*hom) {
      const NormFunctional n = io::parse_norm_spec(norm_text, qspec);
      std::vector<RearrangedFunction> fs;
      for (const auto& s : fn_list) fs.push_back(io::parse_function_spec(s));
      if (fs.empty()) fs = rearranged_corpus(static_cast<std::size_t>(corpus), seed);
      const HomogeneityReport h = homogeneity_report(n, fs, log_grid(rmin, rmax, rpoints), tol);
      report = io::to_json(h);
      report["command"] = "homogeneity";
      csv = io::emit_csv(io::homogeneity_columns, io::csv_rows(h));
    } else if (*ren) {
      const NormFunctional n = io::parse_norm_spec(norm_text, qspec);
      if (!(p > 0)) {
        if (!n.index()) throw InvalidArgument("--p is required for norms without an index");
        p = *n.index();
      }
      const RearrangedFunction f = io::parse_function_spec(fn_text);
      const auto grid = log_grid(smin, smax, spoints);
      const RenormResult r = renorm_sup(n, p, f, grid);
      report = {{"command", "renorm"},       {"norm", n.name()},        {"p", p},
                {"value", r.value},          {"argmax", r.argmax},      {"boundary_attained", r.boundary_attained},
                {"flat", r.flat},            {"status", quad::to_string(r.status)}};
      std::vector<std::vector<double>> rows;
      for (double s : grid) rows.push_back({s, std::pow(s, 1.0 / p) * n(dilate(f, s)).value});
      csv = io::emit_csv({"s", "scaled_norm"}, rows);
    } else if (*del) {
      const DeltaFamily fam = g_delta_family(dp, Q, N, qspec);
      const RearrangedFunction f =
          fn_text.empty() ? RearrangedFunction(g_function(dp, Q)) : io::parse_function_spec(fn_text);
      const double eps = g_epsilon(dp, Q, N);
      const double bound = dp * dp / (eps * (dp - 1.0));
      report = {{"command", "delta"},
                {"p", dp},
                {"Q", Q},
                {"N", N},
                {"delta_norm", io::to_json(delta_norm(fam, f))},
                {"admissibility", admissibility(fam)},
                {"epsilon", eps},
                {"embedding_constant", bound},
                {"lorentz_pQ", io::to_json(lorentz_norm(f, {dp, Q}, Mode::doublestar, qspec))}};
      std::vector<std::vector<double>> rows;
      for (int k = 0; k < N; ++k) rows.push_back({double(k + 1), fam.members[k].coefficient});
      csv = io::emit_csv({"n", "rho"}, rows);
    } else if (*emb) {
      const YoungFunction phi = detail::young(phi_text), psi = detail::young(psi_text);
      const EmbeddingProfile prof = embedding_ratio_profile(phi, psi, ell_grid(lmax, lpoints));
      report = {{"command", "embed-check"},
                {"phi", phi.name},
                {"psi", psi.name},
                {"lmax", lmax},
                {"running_max", prof.running_max.empty() ? 0.0 : prof.running_max.back()},
                {"records", prof.records},
                {"diagnostic", prof.unbounded ? "unbounded (heuristic: running max > 1e6)" : "bounded on grid"},
                {"unbounded", prof.unbounded}};
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < prof.ell.size(); ++i)
        rows.push_back({prof.ell[i], prof.log_ratio[i], prof.running_max[i]});
      csv = io::emit_csv({"ell", "log_ratio", "running_max"}, rows);
    } else if (*sc) {
      ScenarioReport rep;
      if (scenario_name == "y") {
        std::vector<double> grid;
        const int decades = static_cast<int>(std::lround(std::log10(yrmax / yrmin)));
        grid = log_grid(yrmin, yrmax, std::max(2, decades + 1));
        rep = y_scenario(sp, grid, 2.0, qspec);
      } else if (scenario_name == "g") {
        rep = g_scenario(sp, Q, N, static_cast<std::size_t>(gcorpus), seed, qspec);
      } else {
        rep = oscillating_scenario(detail::parse_list(q_list), lmax);
      }
      report = io::to_json(rep);
      report["command"] = "scenario";
      csv = io::emit_csv(rep.grid_columns, rep.grid);
      if (!rep.pass()) status = Exit::failed;
    }

    detail::write(o.json_path, io::emit_json(report), out);
    if (!o.csv_path.empty()) detail::write(o.csv_path, csv, out);
    return status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  }
}

}  // namespace rikit::cli
