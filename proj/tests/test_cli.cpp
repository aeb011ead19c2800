#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "xlp/problems.hpp"
#include "xlp/serialize.hpp"
#include "xlp_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result xlp_run(std::vector<std::string> args) {
  args.insert(args.begin(), "xlp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = xlp::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = XLP_DATA_DIR;

}  // namespace

TEST(Cli, SolveFixture) {
  const Result r = xlp_run({"solve", "--file", kData + "/cases/KS1.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["objective"], 7.0);
  EXPECT_EQ(j["status"], "optimal");
}

TEST(Cli, FixturesMatchCatalog) {
  for (xlp::CaseId id : xlp::all_cases()) {
    const auto path = kData + "/cases/" + xlp::to_string(id) + ".json";
    EXPECT_EQ(xlp::load_problem_file(path), xlp::case_problem(id)) << path;
  }
}

TEST(Cli, MissingFileIsUsageError) {
  const Result r = xlp_run({"solve", "--file", "missing.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(xlp_run({}).code, 2);
  EXPECT_EQ(xlp_run({"frobnicate"}).code, 2);
  EXPECT_EQ(xlp_run({"solve"}).code, 2);
  EXPECT_EQ(xlp_run({"solve", "--case", "RO1", "--file", "x.json"}).code, 2);
  EXPECT_EQ(xlp_run({"solve", "--case", "RO9"}).code, 2);
  EXPECT_EQ(xlp_run({"attribute", "--case", "RO1", "--method", "shap"}).code, 2);
  EXPECT_EQ(xlp_run({"attribute", "--case", "RO1", "--method", "ig", "--baseline", "equal_edges"}).code, 2);
  EXPECT_EQ(xlp_run({"solve", "--case", "RO1", "--format", "xml"}).code, 2);
}

TEST(Cli, SolverFailureExitCode) {
  const auto path = std::filesystem::temp_directory_path() / "xlp_cli_infeasible.json";
  {
    std::ofstream f(path);
    f << R"({"name":"inf","sense":"maximize","A":[[1],[1]],"b":[1,2],"w":[1],"senses":["<=",">="]})";
  }
  EXPECT_EQ(xlp_run({"solve", "--file", path.string()}).code, 1);
  const Result r = xlp_run({"attribute", "--file", path.string(), "--method", "saliency"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotOptimal"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, AttributeJsonRoundTrips) {
  const Result r = xlp_run({"attribute", "--case", "RO1", "--method", "gxi"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = xlp::attribution_from_json(nlohmann::json::parse(r.out));
  EXPECT_NEAR(a.scores_b(0), 16.0, 1e-9);
  EXPECT_EQ(a.method, xlp::Method::kGradientTimesInput);
}

TEST(Cli, AttributeCsvAndTable) {
  const Result csv = xlp_run({"attribute", "--case", "KS3", "--method", "occlusion", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_NE(csv.out.find("objective,occlusion,objective,structure,item2,,8"), std::string::npos) << csv.out;
  const Result table = xlp_run({"occlude", "--case", "KS3", "--format", "table"});
  ASSERT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("item2"), std::string::npos);
}

TEST(Cli, ReproduceCase) {
  const Result r = xlp_run({"reproduce", "RO1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("-16"), std::string::npos);
  EXPECT_NE(r.out.find("paper-exact"), std::string::npos);
  const Result ks = xlp_run({"reproduce", "KS3", "--method", "occlusion"});
  ASSERT_EQ(ks.code, 0);
  EXPECT_NE(ks.out.find("KS3.occlusion   paper    paper-exact"), std::string::npos) << ks.out;
}

TEST(Cli, CheckProperty) {
  const Result r = xlp_run({"check", "--case", "RO4", "--property", "implementation_invariance"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["verdict"], "violated");
  const Result p1 = xlp_run({"check", "--case", "MF1", "--property", "sensitivity_part1", "--method", "saliency",
                             "--subject", "b[3]", "--probe", "edge1"});
  ASSERT_EQ(p1.code, 0) << p1.err;
  EXPECT_EQ(nlohmann::json::parse(p1.out)["verdict"], "violated");
  const Result bad = xlp_run({"check", "--case", "RO1", "--property", "sensitivity_part2", "--subject", "b[0]"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("CertificationFailed"), std::string::npos);
}

TEST(Cli, GradWithFiniteDifferences) {
  const Result r = xlp_run({"grad", "--case", "RO2", "--fd"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("finite_differences"));
  const auto g = xlp::gradient_bundle_from_json(j);
  EXPECT_EQ(g.map_kind, xlp::MapKind::kObjective);
}

TEST(Cli, MapAndEnergy) {
  const Result m = xlp_run({"map", "--format", "table"});
  ASSERT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("E12  (0,-1,-1)"), std::string::npos);
  const Result e = xlp_run({"energy", "--hours", "48", "--format", "csv"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("Jan,1,"), std::string::npos);
}

TEST(Cli, ExportRoundTrips) {
  const Result r = xlp_run({"export", "--case", "SP2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(xlp::parse_problem(r.out), xlp::case_problem(xlp::CaseId::SP2));
}

TEST(Cli, GoldenEntriesAreWellFormed) {
  const auto& g = xlp::cli::golden();
  EXPECT_EQ(g["version"], 1);
  for (const auto& e : g["entries"]) {
    EXPECT_TRUE(e.contains("id") && e.contains("kind") && e.contains("expected") && e.contains("tolerance"));
    EXPECT_TRUE(e["source"] == "paper" || e["source"] == "derived") << e["id"];
  }
}
