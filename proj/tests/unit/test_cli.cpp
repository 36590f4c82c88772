#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("bsmguard_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with stderr captured to a file; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(BSMGUARD_CLI_PATH) + " " + args + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::string config(const std::string& name) const { return std::string(BSMGUARD_CONFIG_DIR) + "/" + name; }

  std::string simulate(const std::string& out, int seed = 1) {
    EXPECT_EQ(run("simulate --config " + config("scenario_default.conf") + " --seed " + std::to_string(seed) +
                  " --out " + path(out)),
              0);
    return read(out);
  }

  fs::path dir_;
};

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_F(Cli, SimulateWritesHeaderAndTwoThousandRows) {
  const auto csv = simulate("a.csv");
  EXPECT_EQ(lines(csv), 2001u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,vehicle_id,speed_mps,accel_mps2,label");
}

TEST_F(Cli, SimulateIsByteIdenticalOnRerun) {
  EXPECT_EQ(simulate("a.csv", 4), simulate("b.csv", 4));
  EXPECT_NE(simulate("a.csv", 4), simulate("c.csv", 5));
}

TEST_F(Cli, DetectWritesOneDecisionPerSample) {
  simulate("a.csv");
  for (const char* det : {"bocpd", "em", "cusum"}) {
    ASSERT_EQ(run(std::string("detect --data ") + path("a.csv") + " --detector " + det + " --out " + path("d.csv")),
              0);
    const auto out = read("d.csv");
    EXPECT_EQ(lines(out), 2001u);
    EXPECT_EQ(out.substr(0, out.find('\n')), "t,vehicle_id,score,attack,warmed_up");
  }
}

TEST_F(Cli, ReportCoversEveryDetector) {
  simulate("a.csv");
  ASSERT_EQ(run("report --data " + path("a.csv") + " --out " + path("r.json") + " --timing --roc " + path("roc.csv")),
            0);
  const auto j = nlohmann::json::parse(read("r.json"));
  ASSERT_EQ(j.at("results").size(), 3u);
  for (const auto& r : j.at("results")) {
    EXPECT_GE(r.at("accuracy").get<double>(), 0.98) << r.at("subject");
    EXPECT_FALSE(r.at("timing_ms").is_null());
    EXPECT_GT(r.at("timing_ms").at("samples").get<int>(), 0);
  }
  EXPECT_EQ(read("roc.csv").substr(0, 30), "subject,threshold,fpr,tpr\nbocp");
}

TEST_F(Cli, TrainThenEvaluateReproducesTheReport) {
  simulate("a.csv");
  write("knn.conf", "seed = 3\nmodel.family = knn\ngrid.k = 3, 19\n");
  ASSERT_EQ(run("train --data " + path("a.csv") + " --config " + path("knn.conf") + " --out " + path("m.json") +
                " --report " + path("train.json")),
            0);
  ASSERT_EQ(run("evaluate --data " + path("a.csv") + " --model " + path("m.json") + " --out " + path("eval.json")), 0);
  EXPECT_EQ(read("train.json"), read("eval.json"));
  const auto m = nlohmann::json::parse(read("m.json"));
  EXPECT_EQ(m.at("format"), "bsmguard-model");
  EXPECT_EQ(m.at("family"), "knn");
  ASSERT_EQ(run("train --data " + path("a.csv") + " --config " + path("knn.conf") + " --out " + path("m2.json")), 0);
  EXPECT_EQ(read("m.json"), read("m2.json"));
}

TEST_F(Cli, MissingRequiredKeyExitsWithConfigStatus) {
  write("bad.conf", "seed = 1\n");
  EXPECT_EQ(run("simulate --config " + path("bad.conf") + " --out " + path("x.csv")), 2);
  EXPECT_NE(read("stderr.txt").find("duration_s"), std::string::npos);
}

TEST_F(Cli, UnknownDetectorExitsWithConfigStatus) {
  simulate("a.csv");
  EXPECT_EQ(run("detect --data " + path("a.csv") + " --detector hmm --out " + path("d.csv")), 2);
  EXPECT_EQ(run("evaluate --data " + path("a.csv") + " --out " + path("d.csv")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, MalformedDataExitsWithDataStatus) {
  write("bad.csv", "t,vehicle_id,speed_mps,accel_mps2,label\n0.1,v,abc,0,0\n");
  EXPECT_EQ(run("report --data " + path("bad.csv") + " --out " + path("r.json")), 3);
  EXPECT_NE(read("stderr.txt").find("line 2"), std::string::npos);
  write("bad.json", "{\"format\":\"nope\"}");
  simulate("a.csv");
  EXPECT_EQ(run("evaluate --data " + path("a.csv") + " --model " + path("bad.json") + " --out " + path("e.json")), 3);
}
