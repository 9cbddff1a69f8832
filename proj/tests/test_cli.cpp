#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "upb_cli_stdout.txt";
  const std::string cmd = std::string(UPBTOOL_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string tmp(const std::string& name) { return (fs::temp_directory_path() / ("upb_cli_" + name)).string(); }

Json load(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

}  // namespace

TEST(Cli, Construct334) {
  const auto path = tmp("334.json");
  const auto r = run("construct --family 334 --out " + path);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("constructed 28 states"), std::string::npos) << r.out;
  EXPECT_EQ(load(path).at("states").size(), 28u);
}

TEST(Cli, ConstructLayered555) {
  const auto r = run("construct --dims 5,5,5 --layer 1");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("constructed 109 states"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(match)"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("construct --dims 3,3,4 --layer 1").code, 2);
  EXPECT_EQ(run("construct --family nope").code, 2);
  EXPECT_EQ(run("verify").code, 2);
  EXPECT_EQ(run("verify --in " + tmp("missing.json")).code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("render-grid --cut 'X|Y'").code, 2);
}

TEST(Cli, VerifyAll334) {
  const auto set = tmp("v334.json"), report = tmp("v334_report.json");
  ASSERT_EQ(run("construct --family 334 --out " + set).code, 0);
  const auto r = run("verify --in " + set + " --checks all --out " + report);
  EXPECT_EQ(r.code, 0) << r.out;
  const Json j = load(report);
  EXPECT_TRUE(j.at("all_passed").get<bool>());
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42u);
  for (const char* check : {"ortho", "complete", "unext", "nonlocal", "ppt"}) {
    EXPECT_TRUE(j.at("checks").at(check).at("passed").get<bool>()) << check;
  }
  EXPECT_EQ(j.at("checks").at("ppt").at("rank").get<int>(), 8);
}

TEST(Cli, ShiftsNonlocalIsInconclusive) {
  const auto set = tmp("shifts.json");
  ASSERT_EQ(run("construct --family shifts --out " + set).code, 0);
  const auto r = run("verify --in " + set + " --checks nonlocal");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("inconclusive"), std::string::npos);
}

TEST(Cli, DuplicateStateFailsOrthogonality) {
  const auto set = tmp("dup.json");
  ASSERT_EQ(run("construct --family 334 --out " + set).code, 0);
  Json j = load(set);
  Json copy = j["states"][3];
  copy["label"]["name"] = "copy";
  j["states"].push_back(copy);
  std::ofstream(set) << j.dump();
  const auto r = run("verify --in " + set + " --checks ortho");
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST(Cli, Discriminate) {
  const auto report = tmp("disc.json");
  const auto r = run("discriminate --out " + report);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("identified 28/28"), std::string::npos) << r.out;
  const Json j = load(report);
  EXPECT_EQ(j.at("mode"), "full");
  EXPECT_EQ(j.at("successes").get<int>(), 28);
}

TEST(Cli, RenderGrid) {
  const auto r = run("render-grid --dims 3,3,4 --cut 'B|AC'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("A1"), std::string::npos) << r.out;
}

TEST(Cli, ReportsAreDeterministicApartFromTimings) {
  const auto set = tmp("det.json"), out = tmp("det_report.json");
  ASSERT_EQ(run("construct --family 334 --out " + set).code, 0);
  const std::string args = "verify --in " + set + " --checks unext,ppt --seed 7 --restarts 20 --out " + out;
  ASSERT_EQ(run(args).code, 0);
  Json ja = load(out);
  ASSERT_EQ(run(args).code, 0);
  Json jb = load(out);
  ja.erase("timings");
  jb.erase("timings");
  EXPECT_EQ(ja, jb);
}

TEST(Cli, SeedFromEnvironment) {
  const auto set = tmp("env.json"), report = tmp("env_report.json");
  ASSERT_EQ(run("construct --family shifts --out " + set).code, 0);
  const auto r = run("verify --in " + set + " --checks unext --restarts 5 --out " + report);
  ASSERT_EQ(r.code, 0) << r.out;
  ASSERT_EQ(setenv("UPB_SEED", "1234", 1), 0);
  const auto r2 = run("verify --in " + set + " --checks unext --restarts 5 --out " + report);
  unsetenv("UPB_SEED");
  EXPECT_EQ(r2.code, 0) << r2.out;
  EXPECT_EQ(load(report).at("seed").get<std::uint64_t>(), 1234u);
}
