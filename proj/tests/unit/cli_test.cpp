#include "bsp/json_io.hpp"
#include "bsp/matrix_io.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace {

namespace fs = std::filesystem;

std::vector<std::string> ids(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bsp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " '" + std::string(BSP_CLI_PATH) + "' " + args + " >'" + path("stdout.txt") +
                            "' 2>'" + path("stderr.txt") + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const { return bsp::json::read_text(path(name)); }

  // Writes x/y CSVs with one shared column pair and some noise.
  void write_pair(bsp::Index n = 60) const {
    bsp::Rng rng(3);
    Eigen::MatrixXd x = bsp::testing::gaussian(n, 30, rng);
    Eigen::MatrixXd y = bsp::testing::gaussian(n, 20, rng);
    const Eigen::VectorXd z = bsp::testing::gaussian(n, 1, rng).col(0);
    for (bsp::Index j = 0; j < 5; ++j) x.col(j) += 1.5 * z;
    for (bsp::Index j = 0; j < 4; ++j) y.col(j) += 1.5 * z;
    bsp::write_matrix(path("x.csv"), {x, ids("s", 30)}, false);
    bsp::write_matrix(path("y.csv"), {y, ids("t", 20)}, false);
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  write_pair();
  EXPECT_EQ(run("search --x " + path("x.csv") + " --out " + path("o.json")), 2);
  EXPECT_EQ(run("tune --x " + path("x.csv") + " --y " + path("y.csv") + " --half-perms 0"), 2);
  EXPECT_EQ(run("tune --x " + path("x.csv") + " --y " + path("y.csv") + " --grid 0.05,0.01"), 2);
  EXPECT_EQ(run("search --x " + path("missing.csv") + " --y " + path("y.csv") + " --out " + path("o.json")), 2);
  EXPECT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --alpha 1.5 --out " + path("o.json")), 2);
  EXPECT_EQ(run(""), 2);
}

TEST_F(Cli, LibraryErrorsExitOne) {
  write_pair();
  bsp::json::write_text(path("bad.csv"), "a,b\n1,2\n3,oops\n");
  EXPECT_EQ(run("search --x " + path("bad.csv") + " --y " + path("y.csv") + " --out " + path("o.json")), 1);
  EXPECT_NE(read("stderr.txt").find("error:"), std::string::npos);
  EXPECT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --out " + path("o.json"),
                "BSP_WORKERS=abc"),
            1);
}

TEST_F(Cli, SearchWritesBimodulesTracesAndSummary) {
  write_pair();
  ASSERT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --out " + path("o.json") +
                " --seed 4 --workers 1"),
            0);
  const auto found = bsp::json::read_bimodules(path("o.json"));
  ASSERT_FALSE(found.empty());
  EXPECT_TRUE(found[0].pvalue_ab);
  EXPECT_TRUE(found[0].net);
  EXPECT_TRUE(found[0].a.contains(0));
  const auto traces = read("o.json.traces.jsonl");
  EXPECT_EQ(std::count(traces.begin(), traces.end(), '\n'), 50);
  const auto summary = read("o.json.summary.json");
  EXPECT_NE(summary.find("\"n_eff\": 60"), std::string::npos);
  EXPECT_NE(summary.find("\"seed\": 4"), std::string::npos);
  EXPECT_NE(summary.find("\"version\""), std::string::npos);
}

TEST_F(Cli, SearchIsIdenticalAcrossWorkerCounts) {
  write_pair();
  ASSERT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --out " + path("a.json"), "BSP_WORKERS=1"), 0);
  ASSERT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --out " + path("b.json"), "BSP_WORKERS=3"), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_NE(read("b.json.summary.json").find("\"workers\": 3"), std::string::npos);
}

TEST_F(Cli, CovariatesReduceEffectiveSampleSize) {
  write_pair();
  bsp::Rng rng(8);
  bsp::write_matrix(path("cov.csv"), {bsp::testing::gaussian(60, 2, rng), ids("c", 2)}, false);
  ASSERT_EQ(run("search --x " + path("x.csv") + " --y " + path("y.csv") + " --covariates " + path("cov.csv") +
                " --out " + path("o.json")),
            0);
  EXPECT_NE(read("o.json.summary.json").find("\"n_eff\": 58"), std::string::npos);
}

TEST_F(Cli, SimulateSearchEvaluateFilterNetstats) {
  const std::string prefix = path("sim");
  ASSERT_EQ(run("simulate --p 80 --q 40 --n 80 --k 2 --bridge-rate 0 --seed 5 --format bin --out-prefix " + prefix),
            0);
  ASSERT_TRUE(fs::exists(prefix + "_x.bin"));
  ASSERT_TRUE(fs::exists(prefix + "_truth.json"));
  ASSERT_TRUE(fs::exists(prefix + ".summary.json"));
  ASSERT_EQ(run("search --x " + prefix + "_x.bin --y " + prefix + "_y.bin --out " + path("found.json")), 0);
  ASSERT_EQ(run("evaluate --found " + path("found.json") + " --truth " + prefix + "_truth.json --out " +
                path("report.json") + " --csv " + path("report.csv")),
            0);
  EXPECT_NE(read("report.json").find("\"best_recall\""), std::string::npos);
  EXPECT_EQ(read("report.csv").rfind("kind,index,", 0), 0u);

  ASSERT_EQ(run("filter --bimodules " + path("found.json") + " --out " + path("filtered.json")), 0);
  const auto filtered = bsp::json::read_bimodules(path("filtered.json"));
  EXPECT_LE(filtered.size(), bsp::json::read_bimodules(path("found.json")).size());

  ASSERT_EQ(run("netstats --x " + prefix + "_x.bin --y " + prefix + "_y.bin --bimodules " + path("filtered.json") +
                " --out " + path("net.json")),
            0);
  for (const auto& b : bsp::json::read_bimodules(path("net.json"))) EXPECT_TRUE(b.net);
}

TEST_F(Cli, TuneReportsChosenAlpha) {
  write_pair();
  ASSERT_EQ(run("tune --x " + path("x.csv") + " --y " + path("y.csv") +
                " --grid 0.01,0.05 --half-perms 2 --seed 1 --override-alpha 0.02 --out " + path("tune.json")),
            0);
  const auto text = read("tune.json");
  EXPECT_NE(text.find("\"chosen_alpha\""), std::string::npos);
  EXPECT_NE(text.find("\"override_alpha\":0.02"), std::string::npos);
}

}  // namespace
