#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SSGTOOL_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string tmp(const std::string& name) {
  const auto dir = std::filesystem::path(testing::TempDir()) / "ssgtool_cli";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string gadget_file(const std::string& family, int param) {
  const std::string path = tmp(family + std::to_string(param) + ".json");
  const auto r = run("gadget --family " + family + (family == "M" ? "" : " --param " + std::to_string(param)) +
                     " -o " + path);
  EXPECT_EQ(r.code, 0);
  return path;
}

}  // namespace

TEST(Cli, SolveG5) {
  const auto g5 = gadget_file("G", 5);
  const auto r = run("solve -g " + g5 + " -T 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n2 127/2^7\n"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(run("solve -g " + g5 + " -T 7 --json").out);
  EXPECT_EQ(j["values"]["2"], "127/2^7");
  EXPECT_EQ(j["schema"], "ssgtool.solve/1");
  EXPECT_FALSE(j.contains("approx"));
  const auto d = nlohmann::json::parse(run("solve -g " + g5 + " -T 7 --json --decimal 4").out);
  EXPECT_EQ(d["approx"]["values"]["2"], "0.9922");
}

TEST(Cli, SolveCsv) {
  const auto m = gadget_file("M", 0);
  const auto r = run("solve -g " + m + " -T 2 --csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,start,x,2,1,h,top,bot");
}

TEST(Cli, GadgetToStdoutRoundTrips) {
  const auto r = run("gadget --family H --param 4");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["states"].size(), 12u);
  EXPECT_EQ(j["start"], "4s");
}

TEST(Cli, StrategyAndMinimize) {
  const auto f2 = gadget_file("F", 2);
  const auto s = nlohmann::json::parse(run("strategy -g " + f2 + " -T 22 --json").out);
  EXPECT_EQ(s["choices"].size(), 22u);
  EXPECT_EQ(s["choices"][0]["remaining"], 22u);
  const auto r = run("minimize -g " + f2 + " -T 22 --sets");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p=6"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(run("minimize -g " + f2 + " -T 22 --sets --json").out);
  EXPECT_EQ(j["p"], 6u);
  EXPECT_EQ(j["counter"]["p"], 6u);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify fai --i 12 --amax 4096").code, 0);
  EXPECT_EQ(run("verify gp_values --p 3 --tmax 50 --json").code, 0);
  EXPECT_EQ(run("verify M_memory --c 5").code, 1);
  EXPECT_EQ(run("verify M_memory --c 3").code, 0);
  EXPECT_EQ(run("verify nosuch").code, 2);
  EXPECT_EQ(run("verify pdk --i 12 --d 4/5 --width 1 --json").code, 0);
  const auto j = nlohmann::json::parse(run("verify upper_bound --family M --jmax 2 --json").out);
  EXPECT_EQ(j["report"]["verdict"], "pass");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("solve -T 3").code, 2);
  EXPECT_EQ(run("solve -g /nonexistent/file.json -T 3").code, 2);
  EXPECT_EQ(run("gadget --family G").code, 2);
  EXPECT_EQ(run("gadget --family Q --param 2").code, 2);
  const auto m = gadget_file("M", 0);
  EXPECT_EQ(run("solve -g " + m + " -T 3 --bogus").code, 2);
  const std::string bad = tmp("bad.json");
  std::ofstream(bad) << "{\"start\": \"a\", \"states\": [}";
  EXPECT_EQ(run("solve -g " + bad + " -T 3").code, 2);
  const std::string invalid = tmp("invalid.json");
  std::ofstream(invalid) << R"({"start": "a", "states": [{"id": "a", "kind": "coin", "arcs": ["a"]},
                                                          {"id": "bot", "kind": "terminal"}]})";
  EXPECT_EQ(run("solve -g " + invalid + " -T 3").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, GuardExceeded) {
  const auto f2 = gadget_file("F", 2);
  EXPECT_EQ(run("oracle -g " + f2 + " --maxcontrolled 1").code, 3);
  const auto m = gadget_file("M", 0);
  EXPECT_EQ(run("oracle -g " + m + " -T 7 --maxmem 7 --maxcandidates 3").code, 3);
}

TEST(Cli, Oracle) {
  const auto m = gadget_file("M", 0);
  const auto j = nlohmann::json::parse(run("oracle -g " + m + " -T 5 --eps 1/2^6 --json").out);
  EXPECT_EQ(j["infinite_values"]["start"], "1/1");
  EXPECT_EQ(j["sigma1"]["x"], 0);
  EXPECT_EQ(j["counter_search"]["memory"], 3u);
}

TEST(Cli, SimulateIsDeterministic) {
  const auto m = gadget_file("M", 0);
  const std::string args = "simulate -g " + m + " -T 6 --trials 4000 --seed 12 --json";
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["parameters"]["seed"], 12u);
  EXPECT_EQ(j["parameters"]["rng"], "mt19937_64");
  EXPECT_NE(run("simulate -g " + m + " -T 6 --trials 4000 --seed 13 --json").out, a.out);
}

TEST(Cli, ScanIsDeterministic) {
  const std::string args = "scan -n 4 --samples 50 -T 32 --seed 3 --with-F 2 --json";
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["report"]["evidence"]["extra"][0]["period"], 6u);
  EXPECT_FALSE(j["report"].contains("runtime_seconds"));
}
