#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rikit/cli.hpp"
#include "rikit/corpus.hpp"
#include "rikit/io.hpp"
#include "support.hpp"

using namespace rikit;
using io::json;
using rikit::testing::rel;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return RunResult{code, out.str(), err.str()};
}

std::string error_path(const std::string& text) {
  try {
    io::function_spec_from_json(json::parse(text));
  } catch (const io::SpecError& e) {
    return e.what();
  }
  return "";
}

std::vector<json> spec_corpus() {
  std::vector<json> out;
  for (const auto& f : step_corpus(20, 21)) {
    json arr = json::array();
    for (const auto& p : f.pieces) arr.push_back({p.value, p.length});
    out.push_back({{"kind", "step"}, {"pieces", arr}});
  }
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10; ++i) {
    const double p = 1.1 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    out.push_back({{"kind", "analytic-named"}, {"name", "y-counterexample"}, {"p", p}});
    out.push_back({{"kind", "analytic-named"}, {"name", "g"}, {"p", p}, {"Q", p + 0.5}});
  }
  for (int i = 0; i < 10; ++i) {
    const double r = detail::log_uniform(rng, 1e-3, 1e3), c = detail::log_uniform(rng, 1e-3, 1e3);
    const json inner = (i % 2) ? json{{"kind", "analytic-named"}, {"name", "indicator"}, {"t", r * 0.5}}
                               : json{{"kind", "analytic-named"}, {"name", "power-decay"}, {"p", 1 + r}};
    if (i < 4) out.push_back({{"kind", "dilated"}, {"r", r}, {"inner", inner}});
    else if (i < 8) out.push_back({{"kind", "scaled"}, {"scalar", c}, {"inner", {{"kind", "dilated"}, {"r", r}, {"inner", inner}}}});
    else out.push_back({{"kind", "step"}, {"pieces", {{c, r}}}, {"r", r}, {"scalar", c}});
  }
  return out;
}

}  // namespace

TEST(ParseFunctionSpec, StepExample) {
  const RearrangedFunction f = io::parse_function_spec(R"({"kind":"step","pieces":[[3,1],[1,2]]})");
  EXPECT_DOUBLE_EQ(f.evaluate(0.5), 3);
  EXPECT_DOUBLE_EQ(f.evaluate(2.0), 1);
  EXPECT_DOUBLE_EQ(f.evaluate(3.5), 0);
}

TEST(ParseFunctionSpec, GExample) {
  const RearrangedFunction f = io::parse_function_spec(R"({"kind":"analytic-named","name":"g","p":2,"Q":3})");
  for (double t : {1e-6, 0.01, 0.3}) EXPECT_LE(rel(f.evaluate(t), std::pow(t, -0.5) * std::cbrt(-1 / std::log(t))), 1e-12);
}

TEST(ParseFunctionSpec, DilatedExample) {
  const RearrangedFunction f =
      io::parse_function_spec(R"({"kind":"dilated","r":2,"inner":{"kind":"step","pieces":[[1,1]]}})");
  EXPECT_DOUBLE_EQ(f.evaluate(0.49), 1);
  EXPECT_DOUBLE_EQ(f.evaluate(0.51), 0);
}

TEST(ParseFunctionSpec, ScaledWrapper) {
  const RearrangedFunction f =
      io::parse_function_spec(R"({"kind":"scaled","scalar":3,"inner":{"kind":"step","pieces":[[2,1]]}})");
  EXPECT_DOUBLE_EQ(f.evaluate(0.5), 6);
}

TEST(ParseFunctionSpec, ErrorsCarryFieldPaths) {
  EXPECT_EQ(error_path(R"({"kind":"analytic-named","name":"nope"})").rfind("$.name:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"step","pieces":[[1,1],[2,-1]]})").rfind("$.pieces[1][1]:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"step","pieces":[[-1,1]]})").rfind("$.pieces[0][0]:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"step"})").rfind("$.pieces:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"step","pieces":[],"extra":1})").rfind("$.extra:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"analytic-named","name":"g","p":2})").rfind("$.Q:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"dilated","r":0,"inner":{"kind":"step","pieces":[]}})").rfind("$.r:", 0), 0u);
  EXPECT_EQ(error_path(R"({"kind":"dilated","r":2,"inner":{"kind":"wat"}})").rfind("$.inner.kind:", 0), 0u);
  EXPECT_EQ(error_path(R"([1,2])").rfind("$:", 0), 0u);
  EXPECT_THROW(io::parse_function_spec("{not json"), io::SpecError);
}

TEST(ParseFunctionSpec, ModulePreconditionsSurface) {
  EXPECT_THROW(io::parse_function_spec(R"({"kind":"analytic-named","name":"g","p":1,"Q":3})"), InvalidArgument);
  EXPECT_THROW(io::parse_function_spec(R"({"kind":"analytic-named","name":"indicator","t":0})"), io::SpecError);
}

TEST(ParseNormSpec, Kinds) {
  const RearrangedFunction one = indicator(1);
  EXPECT_NEAR(io::parse_norm_spec(R"({"kind":"lorentz-doublestar","p":2,"q":2})")(one).value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(io::parse_norm_spec(R"({"kind":"lorentz-star","p":2,"q":"inf"})")(one).value, 1.0, 1e-12);
  EXPECT_NEAR(io::parse_norm_spec(R"({"kind":"y-space","p":2})")(one).value, 3.0, 1e-8);
  EXPECT_NEAR(io::parse_norm_spec(R"({"kind":"orlicz-lorentz","p":2,"phi":"power-2"})")(one).value, std::sqrt(2.0),
              1e-7);
  EXPECT_NEAR(io::parse_norm_spec(R"({"kind":"lambda","q":1,"weight":{"kind":"power","beta":0}})")(one).value, 1.0,
              1e-10);
  EXPECT_NO_THROW(io::parse_norm_spec(
      R"({"kind":"orlicz-lorentz","p":3,"phi":{"kind":"piecewise-power","pieces":[[0,2],[1,3]]},"mode":"star"})"));
  EXPECT_NO_THROW(io::parse_norm_spec(R"({"kind":"delta","family":"g","p":2,"Q":3,"N":5})"));
  EXPECT_NO_THROW(io::parse_norm_spec(
      R"({"kind":"delta","members":[{"norm":{"kind":"lorentz-doublestar","p":2,"q":2},"coefficient":1}]})"));
}

TEST(ParseNormSpec, RejectsBadParameters) {
  auto path_of = [](const std::string& text) -> std::string {
    try {
      io::parse_norm_spec(text);
    } catch (const io::SpecError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_EQ(path_of(R"({"kind":"nope"})").rfind("$.kind:", 0), 0u);
  EXPECT_EQ(path_of(R"({"kind":"lorentz-star","p":0.5,"q":2})").rfind("$:", 0), 0u);
  EXPECT_EQ(path_of(R"({"kind":"orlicz-lorentz","p":2,"phi":"power-x"})").rfind("$.phi:", 0), 0u);
  EXPECT_EQ(path_of(R"({"kind":"delta","family":"g","p":2,"Q":3,"N":1.5})").rfind("$.N:", 0), 0u);
  EXPECT_EQ(path_of(R"({"kind":"lambda","q":1,"weight":{"kind":"cubic"}})").rfind("$.weight.kind:", 0), 0u);
}

TEST(RoundTrip, FiftyCaseCorpus) {
  const auto corpus = spec_corpus();
  ASSERT_EQ(corpus.size(), 50u);
  for (const json& x : corpus) {
    const io::FunctionSpec once = io::function_spec_from_json(x);
    const io::FunctionSpec twice = io::function_spec_from_json(json::parse(io::emit_json(io::to_json(once))));
    EXPECT_TRUE(once == twice) << x.dump();
    const RearrangedFunction a = io::build(once), b = io::build(twice);
    for (double t : {1e-3, 0.7, 5.0}) EXPECT_EQ(a.evaluate(t), b.evaluate(t)) << x.dump();
  }
}

TEST(RoundTrip, WrapperOnStep) {
  const io::FunctionSpec s = io::function_spec_from_json(json::parse(R"({"kind":"step","pieces":[[1,2]],"scalar":2})"));
  const json j = io::to_json(s);
  EXPECT_EQ(j["scalar"], 2.0);
  EXPECT_TRUE(io::function_spec_from_json(j) == s);
}

TEST(Emit, JsonSortedKeysAndFullPrecision) {
  const json j{{"zeta", 0.1}, {"alpha", inf}, {"mid", {{"b", 1}, {"a", std::nan("")}}}};
  const std::string text = io::emit_json(j);
  EXPECT_LT(text.find("\"alpha\""), text.find("\"mid\""));
  EXPECT_LT(text.find("\"mid\""), text.find("\"zeta\""));
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("\"inf\""), std::string::npos);
  EXPECT_NE(text.find("\"nan\""), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text, io::emit_json(j));
}

TEST(Emit, CsvHeaderOnlyForEmptyGrid) {
  EXPECT_EQ(io::emit_csv({"r", "ratio_min"}, {}), "r,ratio_min\n");
}

TEST(Emit, CsvRowsOrderedByGridValue) {
  const std::string csv = io::emit_csv({"x", "y"}, {{3, 1}, {1, 0.5}, {2, inf}});
  EXPECT_EQ(csv, "x,y\n1,0.5\n2,inf\n3,1\n");
}

TEST(Emit, HomogeneityCsvColumns) {
  const HomogeneityReport h = homogeneity_report(make_lorentz({2, 2}, Mode::doublestar), rearranged_corpus(3, 1),
                                                 log_grid(1e-2, 1e2, 5));
  const std::string csv = io::emit_csv(io::homogeneity_columns, io::csv_rows(h));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,ratio_min,ratio_median,ratio_max");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_EQ(io::emit_json(io::to_json(h)), io::emit_json(io::to_json(h)));
}

TEST(Dispatch, NormExample) {
  const RunResult r = run({"norm", "--norm", R"({"kind":"lorentz-doublestar","p":2,"q":2})", "--fn",
                     R"({"kind":"step","pieces":[[1,1]]})"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  EXPECT_NE(r.out.find("\"value\": 1.41421356237309"), std::string::npos) << r.out;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(j["status"], "converged");
}

TEST(Dispatch, ScenarioYExitsZero) {
  const RunResult r = run({"scenario", "y", "--p", "2", "--rmin", "1e-12"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["scenario"], "y");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Dispatch, EmbedCheckUnbounded) {
  const RunResult r = run({"embed-check", "--phi", "oscillating", "--psi", "power-4", "--lmax", "40"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  EXPECT_TRUE(json::parse(r.out)["unbounded"].get<bool>());
}

TEST(Dispatch, FailedScenarioExitsTwo) {
  // Records beyond the grid cannot be reached with lmax this small.
  const RunResult r = run({"scenario", "oscillating", "--q-list", "4", "--lmax", "1"});
  EXPECT_EQ(r.code, cli::Exit::failed) << r.out;
}

TEST(Dispatch, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, cli::Exit::usage);
  EXPECT_EQ(run({"bogus"}).code, cli::Exit::usage);
  EXPECT_EQ(run({"scenario", "z"}).code, cli::Exit::usage);
  const RunResult bad = run({"norm", "--norm", R"({"kind":"nope"})", "--fn", R"({"kind":"step","pieces":[]})"});
  EXPECT_EQ(bad.code, cli::Exit::usage);
  EXPECT_NE(bad.err.find("$.kind"), std::string::npos);
  EXPECT_TRUE(bad.out.empty());
  EXPECT_EQ(run({"norm", "--norm", "{", "--fn", "{}"}).code, cli::Exit::usage);
}

TEST(Dispatch, DeterministicOutput) {
  const std::vector<std::string> hom{"homogeneity", "--norm", R"({"kind":"lorentz-doublestar","p":3,"q":2})",
                                     "--corpus", "5", "--points", "5", "--seed", "7"};
  const RunResult a = run(hom), b = run(hom);
  EXPECT_EQ(a.code, cli::Exit::ok) << a.err;
  EXPECT_EQ(a.out, b.out);
  const RunResult c = run({"homogeneity", "--norm", R"({"kind":"lorentz-doublestar","p":3,"q":2})", "--corpus", "5",
                     "--points", "5"});
  const RunResult d = run({"homogeneity", "--norm", R"({"kind":"lorentz-doublestar","p":3,"q":2})", "--corpus", "5",
                     "--points", "5", "--seed", "0"});
  EXPECT_EQ(c.out, d.out);
  const std::vector<std::string> del{"delta", "--N", "5"};
  EXPECT_EQ(run(del).out, run(del).out);
}

TEST(Dispatch, CsvWrittenForGridCommands) {
  const RunResult r = run({"fundamental", "--norm", R"({"kind":"lorentz-star","p":2,"q":2})", "--tmin", "0.01", "--tmax",
                     "100", "--points", "5", "--csv", "-"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  const std::size_t header = r.out.find("t,phi,phi_over_t_pow\n");
  ASSERT_NE(header, std::string::npos);
  EXPECT_EQ(std::count(r.out.begin() + static_cast<std::ptrdiff_t>(header), r.out.end(), '\n'), 6);
}

TEST(Dispatch, RenormReportsBoundary) {
  const RunResult r = run({"renorm", "--norm", R"({"kind":"y-space","p":2})", "--fn",
                     R"({"kind":"analytic-named","name":"y-counterexample","p":2})", "--smin", "1e-12", "--smax",
                     "1", "--points", "13"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["boundary_attained"].get<bool>());
  EXPECT_FALSE(j["flat"].get<bool>());
}

TEST(Dispatch, QuadratureToleranceFromEnvironment) {
  ::setenv("RIKIT_QUAD_RELTOL", "1e-3", 1);
  EXPECT_DOUBLE_EQ(quad::Spec::from_env().rel_tol, 1e-3);
  const RunResult r = run({"norm", "--norm", R"({"kind":"orlicz-lorentz","p":2,"phi":"oscillating"})", "--fn",
                     R"({"kind":"step","pieces":[[1,1]]})"});
  EXPECT_EQ(r.code, cli::Exit::ok) << r.err;
  ::setenv("RIKIT_QUAD_RELTOL", "garbage", 1);
  EXPECT_DOUBLE_EQ(quad::Spec::from_env().rel_tol, quad::Spec{}.rel_tol);
  ::unsetenv("RIKIT_QUAD_RELTOL");
}
