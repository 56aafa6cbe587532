#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace rnm::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rnm_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rnm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path write_model(const std::string& name, const std::string& body) {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path;
  }

  static std::string model(const std::string& expression, const std::string& weights,
                           const std::string& parents = "3, 3") {
    return "format_version = 1\nchild_states = 3\nparent_states = " + parents +
           "\nexpression = " + expression + "\nweights = " + weights +
           "\nvariance = 0.01\nsample_size = 5\n";
  }

  static std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenCptWritesOneNormalizedRowPerConfiguration) {
  const auto path = write_model("ok.ini", model("WMEAN", "0.4, 0.6"));
  const auto r = invoke({"--output-dir", dir_.string(), "gen-cpt", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(slurp(dir_ / "cpt.csv"));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], "x1,x2,p1,p2,p3");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream row(rows[i]);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    ASSERT_EQ(values.size(), 5u);
    EXPECT_NEAR(values[2] + values[3] + values[4], 1.0, 1e-9) << rows[i];
  }
}

TEST_F(CliTest, GenCptReportsViolatedConstraint) {
  const auto sum = invoke({"gen-cpt", write_model("sum.ini", model("WMEAN", "0.39, 0.6")).string()});
  EXPECT_EQ(sum.code, kExitValidation);
  EXPECT_NE(sum.err.find("WMEAN weights must sum to 1"), std::string::npos) << sum.err;

  const auto arity = invoke({"gen-cpt", write_model("mix.ini", model("MIXMINMAX", "0.2, 0.3, 0.5")).string()});
  EXPECT_EQ(arity.code, kExitValidation);
  EXPECT_NE(arity.err.find("MIXMINMAX"), std::string::npos) << arity.err;

  const auto wmin = invoke({"gen-cpt", write_model("wmin.ini", model("WMIN", "1, 0.5")).string()});
  EXPECT_EQ(wmin.code, kExitValidation);
}

TEST_F(CliTest, GenCptRejectsMalformedDocuments) {
  EXPECT_EQ(invoke({"gen-cpt", (dir_ / "missing.ini").string()}).code, kExitValidation);
  std::string body = model("WMEAN", "0.4, 0.6");
  EXPECT_EQ(invoke({"gen-cpt", write_model("v.ini", "format_version = 2\n" + body.substr(body.find('\n') + 1)).string()}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"gen-cpt", write_model("n.ini", model("WMEAN", "0.4, x")).string()}).code, kExitValidation);
  EXPECT_EQ(invoke({"gen-cpt", write_model("e.ini", model("MEDIAN", "0.4, 0.6")).string()}).code, kExitValidation);
  const auto no_variance = body.substr(0, body.find("variance")) + "sample_size = 5\n";
  const auto r = invoke({"gen-cpt", write_model("k.ini", no_variance).string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("variance"), std::string::npos);
}

TEST_F(CliTest, GenCptCapIsAResourceError) {
  const auto path = write_model("ok.ini", model("WMEAN", "0.4, 0.6"));
  setenv("RNM_MAX_COMBINATIONS", "100", 1);
  const auto r = invoke({"--output-dir", dir_.string(), "gen-cpt", path.string()});
  unsetenv("RNM_MAX_COMBINATIONS");
  EXPECT_EQ(r.code, kExitResource);
}

TEST_F(CliTest, CheckPropsExitCodesAndDeterminism) {
  const auto clean = invoke({"--output-dir", (dir_ / "a").string(), "check-props", "--trials", "40"});
  EXPECT_EQ(clean.code, kExitOk) << clean.out;
  EXPECT_EQ(lines(slurp(dir_ / "a" / "counterexamples.csv")).size(), 1u);

  const auto m1 = invoke({"--seed", "5", "--output-dir", (dir_ / "b").string(), "check-props", "--trials",
                          "20", "--mutate-for-test"});
  const auto m2 = invoke({"--seed", "5", "--output-dir", (dir_ / "c").string(), "check-props", "--trials",
                          "20", "--mutate-for-test"});
  EXPECT_EQ(m1.code, kExitPropertyFailure);
  EXPECT_EQ(m2.code, kExitPropertyFailure);
  EXPECT_GT(lines(slurp(dir_ / "b" / "counterexamples.csv")).size(), 1u);
  EXPECT_EQ(slurp(dir_ / "b" / "counterexamples.csv"), slurp(dir_ / "c" / "counterexamples.csv"));
}

TEST_F(CliTest, Table1ShapeAndByteIdenticalReruns) {
  for (const char* sub : {"a", "b"}) {
    const auto r = invoke({"--seed", "42", "--output-dir", (dir_ / sub).string(), "table1", "--n-reps", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  const auto csv = slurp(dir_ / "a" / "table1.csv");
  EXPECT_EQ(csv, slurp(dir_ / "b" / "table1.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "manifest.json"), slurp(dir_ / "b" / "manifest.json"));
  const auto rows = lines(csv);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[4].rfind("mean,", 0), 0u);
  EXPECT_EQ(rows[5].rfind("max,", 0), 0u);
  EXPECT_NE(slurp(dir_ / "a" / "manifest.json").find("\"seed\": 42"), std::string::npos);
}

TEST_F(CliTest, BudgetExhaustionFlushesPartialResults) {
  const auto r = invoke({"--output-dir", dir_.string(), "--time-budget", "1e-9", "table1", "--n-reps", "50"});
  EXPECT_EQ(r.code, kExitResource);
  const auto rows = lines(slurp(dir_ / "table1.csv"));
  EXPECT_LT(rows.size(), 53u);
  EXPECT_NE(slurp(dir_ / "manifest.json").find("\"complete\": false"), std::string::npos);
}

TEST_F(CliTest, Fig2AndFig3Output) {
  ASSERT_EQ(invoke({"--output-dir", dir_.string(), "fig2", "--m", "3,4", "--points", "4"}).code, kExitOk);
  EXPECT_EQ(lines(slurp(dir_ / "fig2.csv")).size(), 9u);
  ASSERT_EQ(invoke({"--output-dir", dir_.string(), "fig3", "--m", "5", "--s", "3", "--points", "2"}).code, kExitOk);
  const auto roots = lines(slurp(dir_ / "fig3_roots.csv"));
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[1].rfind("5,3,0.01,0.8032", 0), 0u) << roots[1];
  EXPECT_EQ(lines(slurp(dir_ / "fig3.csv")).size(), 3u);
}

TEST_F(CliTest, BisectWmax) {
  const auto ok = invoke({"bisect-wmax", "--n", "4", "--m", "5", "--k", "4", "--variance", "0.01"});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_EQ(lines(ok.out)[0], "w_max,w_min,bracket_lower,bracket_upper");
  const auto none = invoke({"bisect-wmax", "--n", "1", "--m", "3", "--k", "1"});
  EXPECT_EQ(none.code, kExitValidation);
  EXPECT_NE(none.err.find("w_max,signed_difference"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitValidation);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(invoke({"table1", "--variance-ceiling", "half"}).code, kExitValidation);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace rnm::cli
