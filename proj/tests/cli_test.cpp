#include "conefix/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conefix::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(CONEFIX_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(CliSolve, CosHalfConverges) {
  const auto r = call({"solve", "--entry", "interval-cos-half", "--x0", "0.7", "--tol", "1e-10"});
  ASSERT_EQ(r.code, ok) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["status"], "converged");
  EXPECT_LE(std::fabs(j["x_star"][0].get<double>()), 1e-10);
  EXPECT_EQ(j["problem"], "interval-cos-half");
  EXPECT_EQ(j["spec"]["family"], "max");
}

TEST(CliSolve, IterationCapGivesExitTwo) {
  const auto r = call({"solve", "--entry", "l1-tan-quarter", "--max-iters", "3", "--tol", "1e-12"});
  EXPECT_EQ(r.code, not_converged);
  EXPECT_EQ(r.json()["stop_reason"], "max_iters");
}

TEST(CliSolve, ConfigErrors) {
  EXPECT_EQ(call({"solve", "--entry", "no-such-entry"}).code, config_error);
  EXPECT_EQ(call({"solve"}).code, config_error);
  EXPECT_EQ(call({"solve", "--entry", "interval-cos-half", "--inline", "max-metric"}).code, config_error);
  EXPECT_EQ(call({"solve", "--entry", "interval-cos-half", "--x0", "5"}).code, config_error);
  EXPECT_EQ(call({"solve", "--entry", "interval-cos-half", "--alpha", "1.5"}).code, config_error);
  EXPECT_EQ(call({"solve", "--entry", "interval-cos-half", "--format", "xml"}).code, config_error);
  EXPECT_EQ(call({"solve", "--inline", "max-metric,T=bogus"}).code, config_error);
  EXPECT_EQ(call({"frobnicate"}).code, config_error);
  EXPECT_EQ(call({"solve", "--tol", "-1", "--entry", "interval-cos-half"}).code, config_error);
}

TEST(CliSolve, HelpIsSuccess) { EXPECT_EQ(call({"--help"}).code, ok); }

TEST(CliSolve, InlineProblemWithoutSpec) {
  const auto r = call({"solve", "--inline", "l1-max:3,T=scale:0.5,S=scale:0.25", "--x0", "[0.1,0.2,0.3]"});
  ASSERT_EQ(r.code, ok) << r.err;
  const auto j = r.json();
  EXPECT_FALSE(j.contains("K"));
  EXPECT_EQ(j["x_star"].size(), 3u);
}

TEST(CliSolve, AprioriNeedsNoExtraIterations) {
  const auto plain = call({"solve", "--entry", "interval-half-sin", "--x0", "0.7"}).json();
  const auto ap = call({"solve", "--entry", "interval-half-sin", "--x0", "0.7", "--apriori"}).json();
  EXPECT_LE(ap["iterations"].get<long>(), plain["iterations"].get<long>());
  EXPECT_TRUE(ap.contains("apriori_bound"));
}

TEST(CliSolve, JsonlTraceMatchesSchema) {
  const auto path = tmp("trace.jsonl");
  const auto r = call({"solve", "--entry", "interval-half-sin", "--x0", "0.7", "--out", path});
  ASSERT_EQ(r.code, ok) << r.err;
  std::ifstream f(path);
  std::string line;
  long expected_n = 0;
  while (std::getline(f, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["n"].get<long>(), expected_n++);
    EXPECT_GE(j["step_norm"].get<double>(), 0.0);
    EXPECT_GE(j["self_norm"].get<double>(), 0.0);
    ASSERT_TRUE(j.contains("point"));
    EXPECT_EQ(j["point"].size(), 1u);
  }
  EXPECT_EQ(expected_n, r.json()["iterations"].get<long>() + 1);
}

TEST(CliSolve, CsvTraceOmitsPointsAboveDimensionLimit) {
  const auto path = tmp("trace.csv");
  const auto r = call({"solve", "--entry", "l1-tan-quarter", "--dim", "12", "--format", "csv", "--out", path});
  ASSERT_EQ(r.code, ok) << r.err;
  std::istringstream in(slurp(path));
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "n,step_norm,self_norm,iterate_norm");
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 3);
  }
  EXPECT_GT(rows, 1);
  EXPECT_TRUE(r.json().contains("x_star_norm"));
}

TEST(CliSolve, DeterministicOutput) {
  const std::vector<std::string> args{"solve", "--entry", "l1-tan-quarter", "--x0", "rand", "--seed", "9"};
  const auto a = call(args), b = call(args);
  EXPECT_EQ(a.out, b.out);
  const auto c = call({"solve", "--entry", "l1-tan-quarter", "--x0", "rand", "--seed", "10"});
  EXPECT_NE(a.out, c.out);
}

TEST(CliVerify, ContractionOnCatalogEntries) {
  for (const char* id : {"l1-tan-quarter", "interval-half-sin", "interval-cos-half"}) {
    const auto r = call({"verify", "--entry", id, "-n", "2000"});
    ASSERT_EQ(r.code, ok) << id << r.err;
    const auto j = r.json();
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["samples"], 2000);
  }
}

TEST(CliVerify, FamilyOverride) {
  EXPECT_EQ(call({"verify", "--entry", "interval-cos-half", "--family", "max", "--alpha", "0.6667"}).code, ok);
  const auto r = call({"verify", "--entry", "interval-cos-half", "--alpha", "0.25"});
  EXPECT_EQ(r.code, violations_found);
  EXPECT_GT(r.json()["violations_total"].get<long>(), 0);
}

TEST(CliVerify, AxiomsOnCatalogSpace) {
  const auto r = call({"verify", "--entry", "interval-half-sin", "--what", "axioms", "-n", "2000"});
  EXPECT_EQ(r.code, ok) << r.err;
}

TEST(CliVerify, MinMetricReportsPcm1Witness) {
  const auto r = call({"verify", "--inline", "min-metric", "--what", "axioms", "-n", "1000"});
  ASSERT_EQ(r.code, violations_found) << r.err;
  const auto j = r.json();
  bool pcm1 = false;
  for (const auto& v : j["violations"]) {
    if (v["axiom"] != "PCM1") continue;
    pcm1 = true;
    EXPECT_GT(v["points"][0][0].get<double>(), v["points"][1][0].get<double>());
  }
  EXPECT_TRUE(pcm1);
}

TEST(CliVerify, InlineContractionNeedsFamily) {
  EXPECT_EQ(call({"verify", "--inline", "max-metric,T=scale:0.5,S=scale:0.5"}).code, config_error);
  EXPECT_EQ(call({"verify", "--inline", "max-metric,T=scale:0.5,S=scale:0.5", "--family", "max", "--alpha", "0.5"})
                .code,
            ok);
}

TEST(CliVerify, OutFileMirrorsStdout) {
  const auto path = tmp("verify.json");
  const auto r = call({"verify", "--entry", "interval-cos-half", "-n", "100", "--out", path});
  ASSERT_EQ(r.code, ok);
  EXPECT_EQ(slurp(path), r.out);
}

constexpr double h = 1.0 / 256;

TEST(CliFit, KannanSymmetricOnL1) {
  const auto r = call({"fit", "--entry", "l1-tan-quarter", "--family", "kannan-sym", "-n", "2000"});
  ASSERT_EQ(r.code, ok) << r.err;
  const auto spec = r.json()["spec"];
  EXPECT_EQ(spec["family"], "kannan");
  EXPECT_NEAR(spec["alpha"].get<double>(), 1.0 / 3, h);
  EXPECT_EQ(spec["alpha"], spec["beta"]);
}

TEST(CliFit, MaxOnCosHalf) {
  const auto r = call({"fit", "--entry", "interval-cos-half", "--family", "max"});
  ASSERT_EQ(r.code, ok) << r.err;
  EXPECT_LE(r.json()["spec"]["alpha"].get<double>(), 2.0 / 3 + h);
}

TEST(CliFit, IdentityIsInfeasible) {
  const auto r = call({"fit", "--inline", "max-metric,T=identity,S=identity", "--family", "kannan"});
  EXPECT_EQ(r.code, fit_infeasible);
  EXPECT_FALSE(r.json()["feasible"].get<bool>());
}

TEST(CliFit, ImplicitLinearRejected) {
  EXPECT_EQ(call({"fit", "--entry", "interval-cos-half", "--family", "implicit"}).code, config_error);
  EXPECT_EQ(call({"fit", "--entry", "interval-cos-half"}).code, config_error);
}

TEST(CliConfig, FileSuppliesDefaultsAndFlagsWin) {
  const auto path = tmp("solve.toml");
  {
    std::ofstream f(path);
    f << "[solve]\nentry = \"interval-cos-half\"\nx0 = \"0.7\"\nmax-iters = 2\n";
  }
  const auto from_file = call({"solve", "--config", path});
  EXPECT_EQ(from_file.code, not_converged) << from_file.err;
  EXPECT_EQ(from_file.json()["problem"], "interval-cos-half");
  const auto overridden = call({"solve", "--config", path, "--max-iters", "1000"});
  EXPECT_EQ(overridden.code, ok) << overridden.err;
  EXPECT_EQ(call({"--config", path, "solve"}).code, not_converged);
}

TEST(CliConfig, KeysOutsideSubcommandSectionAreIgnored) {
  const auto path = tmp("flat.toml");
  {
    std::ofstream f(path);
    f << "entry = \"interval-cos-half\"\n";
  }
  EXPECT_EQ(call({"solve", "--config", path}).code, config_error);
}

TEST(CliConfig, SeedFromEnvironment) {
  const std::vector<std::string> args{"solve", "--entry", "l1-tan-quarter", "--x0", "rand"};
  ::setenv("CONEFIX_SEED", "9", 1);
  const auto env = call(args);
  ::unsetenv("CONEFIX_SEED");
  auto flagged = args;
  flagged.insert(flagged.end(), {"--seed", "9"});
  EXPECT_EQ(env.out, call(flagged).out);
  EXPECT_NE(env.out, call(args).out);
}

TEST(ParseInline, Forms) {
  const auto p = parse_inline("max-metric:2,T=scale:0.5,box=3");
  EXPECT_EQ(p.space.upper()[0], 3.0);
  EXPECT_EQ(p.maps.t(Point<double>::Constant(1, 2.0))[0], 1.0);
  EXPECT_EQ(p.maps.s(Point<double>::Constant(1, 2.0))[0], 2.0);
  EXPECT_EQ(parse_inline("l1-max:5").space.point_dimension(), 5);
  EXPECT_THROW(parse_inline("l1-max:2.5"), StructuralError);
  EXPECT_THROW(parse_inline("hilbert"), StructuralError);
  EXPECT_THROW(parse_inline("max-metric,T"), StructuralError);
  EXPECT_THROW(parse_inline("max-metric,Q=zero"), StructuralError);
  EXPECT_THROW(parse_inline("max-metric,T=identity:2"), StructuralError);
}

TEST(ParsePoint, Forms) {
  const auto space = parse_inline("l1-max:2").space;
  EXPECT_EQ(parse_point("max", space, 0), space.upper());
  EXPECT_TRUE(parse_point("zero", space, 0).isZero(0.0));
  EXPECT_EQ(parse_point("0.25", space, 0), (Point<double>::Constant(2, 0.25)));
  EXPECT_EQ(parse_point("[0.1, 0.2]", space, 0)[1], 0.2);
  EXPECT_EQ(parse_point("0.1,0.2", space, 0)[0], 0.1);
  EXPECT_EQ(parse_point("rand", space, 4), parse_point("rand", space, 4));
  EXPECT_THROW(parse_point("[0.1,0.2,0.3]", space, 0), StructuralError);
  EXPECT_THROW(parse_point("abc", space, 0), StructuralError);
  EXPECT_THROW(parse_point("2", space, 0), DomainError);
}

}  // namespace
}  // namespace conefix::cli
