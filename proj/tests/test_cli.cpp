#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = kmu::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kmu_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  auto r = run({"bogus"});
  EXPECT_EQ(r.code, kmu::cli::kUsageError);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, kmu::cli::kUsageError);
  EXPECT_EQ(run({"fit", "--data", "x.csv", "--k", "2", "--frobnicate"}).code, kmu::cli::kUsageError);
  EXPECT_EQ(run({"--help"}).code, kmu::cli::kSuccess);
}

TEST_F(Cli, SeedIsMandatory) {
  write("pts.csv", "0\n1\n2\n");
  for (const auto& sub : std::vector<std::vector<std::string>>{
           {"fit", "--data", path("pts.csv"), "--k", "2"},
           {"wcss", "--data", path("pts.csv"), "--k", "2"},
           {"test-uniqueness", "--data", path("pts.csv"), "--k", "2"},
           {"oracle", "sample", "--model", "C1k2", "--n", "10"},
           {"oracle", "wcss", "--model", "C1k2"},
           {"limit-sim", "--model", "C2k2-2"},
           {"consistency", "--model", "C1k2"},
           {"r-grid"},
           {"mc-grid"},
           {"experiment", "--config", path("cfg.json")}}) {
    const auto r = run(sub);
    EXPECT_EQ(r.code, kmu::cli::kUsageError) << sub[0];
    EXPECT_NE(r.err.find("--seed"), std::string::npos) << sub[0];
  }
}

TEST_F(Cli, CatalogExample) {
  const auto r = run({"oracle", "catalog", "--model", "UrC3k2", "--r", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("multiplicity"), "DNU");
  EXPECT_EQ(j.at("entries").size(), 2u);
  EXPECT_NEAR(j.at("wcss").get<double>(), 0.17, 1e-12);
  EXPECT_EQ(json::parse(run({"oracle", "catalog", "--model", "U0.1C3k2"}).out), j);
  EXPECT_EQ(run({"oracle", "catalog", "--model", "UrC3k2", "--r", "0.9"}).code, kmu::cli::kUsageError);
  EXPECT_EQ(run({"oracle", "catalog", "--model", "C9k9"}).code, kmu::cli::kUsageError);
}

TEST_F(Cli, FitIsDeterministic) {
  ASSERT_EQ(run({"oracle", "sample", "--model", "TC3k2", "--n", "2e3", "--seed", "4", "--out",
                 path("pts.csv")})
                .code,
            0);
  const std::vector<std::string> args{"fit", "--data", path("pts.csv"), "--k", "2",
                                      "--restarts", "20", "--seed", "7"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(a.out);
  EXPECT_EQ(j.at("n"), 2000);
  EXPECT_EQ(j.at("centers").size(), 2u);
  EXPECT_FALSE(j.contains("assignments"));
  auto with = args;
  with.push_back("--with-assignments");
  EXPECT_EQ(json::parse(run(with).out).at("assignments").size(), 2000u);

  const json w = json::parse(run({"wcss", "--data", path("pts.csv"), "--k", "2", "--seed", "7"}).out);
  EXPECT_EQ(w.at("wcss"), j.at("wcss"));
}

TEST_F(Cli, ExitCodes) {
  write("ragged.csv", "1,2\n3\n");
  EXPECT_EQ(run({"fit", "--data", path("ragged.csv"), "--k", "1", "--seed", "1"}).code,
            kmu::cli::kDataError);
  EXPECT_EQ(run({"fit", "--data", path("missing.csv"), "--k", "1", "--seed", "1"}).code,
            kmu::cli::kDataError);
  write("two.csv", "1\n1\n2\n");
  EXPECT_EQ(run({"fit", "--data", path("two.csv"), "--k", "3", "--seed", "1"}).code,
            kmu::cli::kNumericalError);
  EXPECT_EQ(run({"fit", "--data", path("two.csv"), "--k", "2", "--seed", "1", "--header", "maybe"}).code,
            kmu::cli::kUsageError);
  EXPECT_EQ(run({"oracle", "sample", "--model", "C1k2", "--n", "10.5", "--seed", "1"}).code,
            kmu::cli::kUsageError);
  EXPECT_EQ(run({"test-uniqueness", "--data", path("two.csv"), "--k", "1", "--seed", "1", "--B", "1"}).code,
            kmu::cli::kUsageError);
}

TEST_F(Cli, DataDirPrefixesRelativePaths) {
  write("rel.csv", "x1\n0\n4\n");
  ::setenv("KMU_DATA_DIR", dir_.c_str(), 1);
  const auto r = run({"fit", "--data", "rel.csv", "--k", "1", "--seed", "1"});
  ::unsetenv("KMU_DATA_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("wcss"), 4.0);
}

TEST_F(Cli, OutAndQuiet) {
  write("pts.csv", "0\n1\n5\n6\n");
  const auto loud = run({"fit", "--data", path("pts.csv"), "--k", "2", "--seed", "3", "--out", path("f.json")});
  EXPECT_EQ(loud.code, 0);
  EXPECT_TRUE(loud.out.empty());
  EXPECT_FALSE(loud.err.empty());
  std::ifstream in(path("f.json"));
  EXPECT_EQ(json::parse(in).at("wcss"), 0.25);
  const auto quiet = run({"fit", "--data", path("pts.csv"), "--k", "2", "--seed", "3", "--quiet"});
  EXPECT_EQ(quiet.code, 0);
  EXPECT_TRUE(quiet.err.empty());
}

TEST_F(Cli, TestUniquenessRejectsOrbitModel) {
  ASSERT_EQ(run({"oracle", "sample", "--model", "C1k2", "--n", "10000", "--seed", "7", "--out",
                 path("c1k2_n10000.csv")})
                .code,
            0);
  const auto r = run({"test-uniqueness", "--data", path("c1k2_n10000.csv"), "--k", "2", "--B", "200",
                      "--alpha", "0.05", "--seed", "7", "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("reject").get<bool>());
  EXPECT_EQ(j.size(), 15u);
  EXPECT_EQ(j.at("B"), 200);
}

TEST_F(Cli, DistFromCsvAndJson) {
  write("a.csv", "-1\n0.5\n");
  write("b.json", R"({"centers": [[-0.5], [1.0]]})");
  const auto r = run({"oracle", "dist", "--a", path("a.csv"), "--b", path("b.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("hausdorff"), 0.5);
  EXPECT_EQ(j.at("gromov_hausdorff"), 0.0);
  write("big.csv", "0\n1\n2\n3\n4\n");
  EXPECT_TRUE(json::parse(run({"oracle", "dist", "--a", path("big.csv"), "--b", path("a.csv")}).out)
                  .at("gromov_hausdorff")
                  .is_null());
}

TEST_F(Cli, ExperimentWritesBothFiles) {
  write("cfg.json", R"({"models": [{"family": "C2k2-3"}], "sample_sizes": [300], "replicates": 2,
                       "B": 5, "restarts": 2})");
  const auto a = run({"experiment", "--config", path("cfg.json"), "--seed", "5", "--out-dir",
                      path("grid1"), "--no-timing", "--quiet"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"experiment", "--config", path("cfg.json"), "--seed", "5", "--out-dir",
                      path("grid2"), "--no-timing", "--parallelism", "3", "--quiet"});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"cells.csv", "detail.csv"}) {
    std::ifstream x(path("grid1/") + f), y(path("grid2/") + f);
    std::stringstream sx, sy;
    sx << x.rdbuf();
    sy << y.rdbuf();
    EXPECT_FALSE(sx.str().empty());
    EXPECT_EQ(sx.str(), sy.str()) << f;
  }
  write("broken.json", "{not json");
  EXPECT_EQ(run({"experiment", "--config", path("broken.json"), "--seed", "1"}).code, kmu::cli::kUsageError);
}
