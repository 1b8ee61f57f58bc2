#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include <cpdetect/io.hpp>

namespace fs = std::filesystem;
using namespace cpdetect;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("cpdetect_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(CPDETECT_BIN) + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }
  std::string read(const std::string& name) const { return read_text_file(dir_ / name); }
  void write(const std::string& name, const std::string& text) const { write_text_file(dir_ / name, text); }

  fs::path dir_;
};

const char* kTrades =
    "timestamp,lender,borrower,amount\n"
    "2000-01-05T09:00:00,a,b,1.5\n"
    "2000-01-05T11:00:00,b,a,2\n"
    "2000-01-06T10:00:00,c,a,3\n";

}  // namespace

TEST_F(CliTest, AggregateWritesWindowsAndManifest) {
  write("trades.csv", kTrades);
  ASSERT_EQ(run("aggregate --input " + path("trades.csv").string() + " --scale day --out " + path("out").string()), 0);
  EXPECT_EQ(read("out/day_2000-01-05.edges"), "a b\n");
  EXPECT_EQ(read("out/day_2000-01-06.edges"), "a c\n");
  EXPECT_EQ(read("out/manifest.csv"),
            "window_label,start,end,n_nodes,n_edges\n"
            "2000-01-05,2000-01-05,2000-01-05,2,1\n"
            "2000-01-06,2000-01-06,2000-01-06,2,1\n");
}

TEST_F(CliTest, AggregateStrictFailureIsParseError) {
  write("trades.csv", std::string(kTrades) + "2000-01-07,a,b,-1\n");
  EXPECT_EQ(run("aggregate --input " + path("trades.csv").string() + " --scale day --out " + path("out").string()), 2);
  EXPECT_NE(read("stderr").find("line 5"), std::string::npos);
  EXPECT_EQ(run("aggregate --lenient --input " + path("trades.csv").string() + " --scale day --out " +
                path("out").string()),
            0);
}

TEST_F(CliTest, UsageAndIoErrors) {
  EXPECT_EQ(run("aggregate --scale day"), 1);
  EXPECT_EQ(run("aggregate --input " + path("none.csv").string() + " --scale day --out " + path("o").string()), 3);
  write("trades.csv", kTrades);
  EXPECT_EQ(run("aggregate --input " + path("trades.csv").string() + " --scale fortnight --out " + path("o").string()),
            1);
}

TEST_F(CliTest, DetectIsDeterministic) {
  write("g.edges", "a b\na c\na d\nb c\nc e\nd e\ne f\nf a\nb f\n");
  for (const char* algo : {"be", "minres", "kmer"}) {
    const std::string base = std::string("detect --algorithm ") + algo + " --seed 3 --in " + path("g.edges").string();
    ASSERT_EQ(run(base + " --out " + path("r1").string()), 0) << algo;
    ASSERT_EQ(run(base + " --out " + path("r2").string()), 0) << algo;
    EXPECT_EQ(read("r1/g.labeling.json"), read("r2/g.labeling.json")) << algo;
  }
}

TEST_F(CliTest, BeSkipsCompleteGraph) {
  write("k4.edges", "a b\na c\na d\nb c\nb d\nc d\n");
  ASSERT_EQ(run("detect --algorithm be --in " + path("k4.edges").string() + " --out " + path("r").string()), 0);
  EXPECT_NE(read("r/detect_log.csv").find("k4,skipped,constant adjacency"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("r/k4.labeling.json")));
}

TEST_F(CliTest, OracleLimitsNetworkSize) {
  std::string big;
  for (int i = 1; i < 10; ++i) big += "n0 n" + std::to_string(i) + "\n";
  write("big.edges", big);
  EXPECT_EQ(run("oracle --in " + path("big.edges").string()), 4);
  write("star.edges", "c a\nc b\nc d\n");
  ASSERT_EQ(run("oracle --in " + path("star.edges").string()), 0);
  const auto doc = parse_json(read("stdout"), "stdout");
  EXPECT_NEAR(doc["q_value"].get<double>(), 1.5, 1e-12);
}

TEST_F(CliTest, GenerateDetectTestMetricsPipeline) {
  write("config.json",
        R"({"kind": "network", "pairs": [{"n_core": 5, "n_periphery": 15, "p_cc": 1, "p_cp": 1, "p_pp": 0}],
            "p_inter": 0})");
  ASSERT_EQ(run("generate --config " + path("config.json").string() + " --seed 1 --out " + path("gen").string()), 0);
  ASSERT_EQ(run("detect --algorithm kmer --in " + path("gen/network.edges").string() + " --out " +
                path("det").string()),
            0);
  ASSERT_EQ(run("test --in " + path("det").string() + " --networks " + path("gen").string() +
                " --samples 100 --out " + path("sig").string()),
            0);
  const auto report = parse_json(read("sig/network.significance.json"), "report");
  EXPECT_EQ(report["pairs"][0]["significant"], true);
  ASSERT_EQ(run("metrics --in " + path("sig").string() + " --networks " + path("gen").string() + " --out " +
                path("met").string()),
            0);
  EXPECT_EQ(read("met/metrics.csv"),
            "window,k,n_core,n_periphery,rho_cc,rho_cp,rho_pp,class,significant\n"
            "network,1,5,15,1.000000,1.000000,0.000000,other,true\n");
}
