#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iccap/cli/commands.hpp"
#include "iccap/oracle/brute_force.hpp"

using namespace iccap;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ic_capacity");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const std::string& name) { return std::string(ICCAP_SPEC_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "iccap_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

}  // namespace

TEST(Classify, ThreeUserExample) {
  const auto r = run({"classify", "--spec", spec("three_user.json")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("ThreeUserSuccessive: certified, C_sum = 1.000000 bits"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("[pass] P1+1>=a12^2(a21^2P1+1)"), std::string::npos);
}

TEST(Classify, TwoUserMixed) {
  const auto r = run({"classify", "--spec", spec("two_user_mixed.json")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("TwoUserMixed: certified, C_sum = 0.792481 bits"), std::string::npos) << r.out;
}

TEST(Classify, NoRegimeStillPrintsHeuristics) {
  const auto json = scratch("classify.json");
  const auto r = run({"classify", "--spec", spec("full_rank.json"), "--json", json.string()});
  EXPECT_EQ(r.code, cli::kExitNoRegime);
  EXPECT_NE(r.out.find("heuristic: inner"), std::string::npos);
  const auto j = Json::parse(read_file(json));
  EXPECT_EQ(j["regime"], "None");
  EXPECT_TRUE(j["capacity"].is_null());
  EXPECT_GT(j["inner"].get<double>(), 0.0);
}

TEST(Classify, InputErrors) {
  EXPECT_EQ(run({"classify", "--spec", spec("one_sided.json")}).code, cli::kExitInputError);
  const auto bad = write_file("bad.json", R"({"kind":"gaussian","gains":[[1,0],[0,1]],"powers":[1]})");
  const auto r = run({"classify", "--spec", bad});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
  EXPECT_NE(r.err.find("gains"), std::string::npos);
  EXPECT_EQ(run({"classify", "--spec", "/nonexistent.json"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"classify"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"classify", "--spec", spec("three_user.json"), "--tol", "0"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Bound, CutStructureOnThreeUserExample) {
  const auto r = run({"bound", "--spec", spec("three_user.json"), "--theorem", "3", "--perm", "2,1,3", "--cuts", "2,3"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("= 1.160964"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("certified: yes"), std::string::npos);
}

TEST(Bound, StructureFlagsAreValidated) {
  const auto s = spec("three_user.json");
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "3", "--perm", "2,1,3", "--cuts", "3,2"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "3", "--perm", "2,2,3", "--cuts", "3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "3", "--perm", "0,1,2", "--cuts", "3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "4", "--groups", "1,2"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "2"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"bound", "--spec", s, "--theorem", "1", "--cuts", "3"}).code, cli::kExitInputError);
}

TEST(Bound, DiscreteChainMatchesBruteForce) {
  const auto json = scratch("bound.json");
  const auto r = run({"bound", "--spec", spec("degraded_chain.json"), "--theorem", "1", "--json", json.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("no counterexample in 10000 samples"), std::string::npos);
  const auto j = Json::parse(read_file(json));
  const auto ch = std::get<DiscreteIC>(load_channel_spec(spec("degraded_chain.json")).channel);
  EXPECT_NEAR(j["value"].get<double>(), brute_force_sum_capacity(ch, expressions::theorem1(2), 16).value, 1e-4);
  EXPECT_TRUE(j["certified"].get<bool>());
}

TEST(Bound, ReceiverGroupsOnManyToOne) {
  const auto r = run({"bound", "--spec", spec("many_to_one.json"), "--theorem", "4", "--groups", "1,2|3", "--samples",
                      "2000", "--restarts", "16"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto ch = std::get<DiscreteIC>(load_channel_spec(spec("many_to_one.json")).channel);
  SearchConfig cfg;
  cfg.restarts = 16;
  const double direct = maximize_expression(ch, expressions::theorem4(3, {{{0, 1}, {2}}}), cfg).value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "= %.9f", direct);
  EXPECT_NE(r.out.find(buf), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("certified: yes"), std::string::npos);
}

TEST(Verify, CkSuite) {
  const auto r = run({"verify", "--suite", "ck", "--n", "4", "--seed", "5"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_NE(r.out.find("PASS ck[n=4]"), std::string::npos);
  EXPECT_NE(r.out.find("summary: 4 passed, 0 failed"), std::string::npos);
}

TEST(Verify, AdversarialRunReportsViolation) {
  const auto json = scratch("verify.json");
  const auto r =
      run({"verify", "--suite", "conditioning", "--adversarial", "--samples", "300", "--json", json.string()});
  EXPECT_EQ(r.code, cli::kExitViolation);
  EXPECT_NE(r.out.find("FAIL adversarial"), std::string::npos);
  const auto j = Json::parse(read_file(json));
  EXPECT_EQ(j["failed"], 1);
  EXPECT_FALSE(j["checks"].back()["counterexample"].is_null());
}

TEST(Verify, BadSuiteOrBlocklength) {
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"verify", "--suite", "ck", "--n", "0"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"verify", "--samples", "0"}).code, cli::kExitInputError);
}

TEST(Sweep, CertifiedExactlyBelowPowerBoundary) {
  const auto r = run({"sweep", "--spec", spec("three_user.json"), "--param", "a21:0:2:41"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 42u);
  const auto& h = rows[0];
  const std::size_t regime = column(h, "regime"), cap = column(h, "capacity");
  ASSERT_LT(cap, h.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a21 = std::stod(rows[i][0]);
    // a12 = 1, P1 = 1: boundary a21^2 <= 1.
    const bool inside = a21 * a21 <= 1.0 + 1e-12;
    EXPECT_EQ(rows[i][regime] == "ThreeUserSuccessive", inside) << a21;
    EXPECT_EQ(rows[i][cap].empty(), !inside) << a21;
  }
}

TEST(Sweep, ParallelChannelsCapacityIsSumOfPsi) {
  const auto r = run({"sweep", "--spec", spec("parallel.json"), "--param", "P1:0:4:5", "--param", "P3:1:2:3"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 16u);
  const std::size_t cap = column(rows[0], "capacity");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p1 = std::stod(rows[i][0]), p3 = std::stod(rows[i][1]);
    EXPECT_NEAR(std::stod(rows[i][cap]), psi(p1) + psi(2.0) + psi(p3), 1e-8);
  }
}

TEST(Sweep, UsageErrors) {
  const auto s = spec("three_user.json");
  EXPECT_EQ(run({"sweep", "--spec", s, "--param", "a21:0:2:0"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", s, "--param", "b21:0:2:3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", s, "--param", "a41:0:2:3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", s, "--param", "a21:0:2"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", s, "--param", "P1:-1:2:3"}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", s}).code, cli::kExitInputError);
  EXPECT_EQ(run({"sweep", "--spec", spec("one_sided.json"), "--param", "P1:0:1:2"}).code, cli::kExitInputError);
}

TEST(Sweep, DegenerateDirectGainGetsAMarkedRow) {
  const auto r = run({"sweep", "--spec", spec("three_user.json"), "--param", "a11:0:1:2"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "Degenerate");
  EXPECT_EQ(rows[1].size(), rows[0].size());
  EXPECT_EQ(rows[2][1], "ThreeUserSuccessive");
}

TEST(Determinism, OutputsIndependentOfThreadCount) {
  const auto csv1 = scratch("a.csv"), csv2 = scratch("b.csv");
  ::setenv("IC_CAPACITY_THREADS", "1", 1);
  run({"sweep", "--spec", spec("three_user.json"), "--param", "a21:0:2:9", "--param", "P1:0.5:3:4", "--csv",
       csv1.string()});
  const auto v1 = run({"verify", "--suite", "falsify", "--samples", "200", "--seed", "3"});
  ::setenv("IC_CAPACITY_THREADS", "4", 1);
  run({"sweep", "--spec", spec("three_user.json"), "--param", "a21:0:2:9", "--param", "P1:0.5:3:4", "--csv",
       csv2.string()});
  const auto v2 = run({"verify", "--suite", "falsify", "--samples", "200", "--seed", "3"});
  ::unsetenv("IC_CAPACITY_THREADS");
  EXPECT_FALSE(read_file(csv1).empty());
  EXPECT_EQ(read_file(csv1), read_file(csv2));
  EXPECT_EQ(v1.out, v2.out);
}
