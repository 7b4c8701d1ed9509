#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DICKE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "dicke_cli_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, ScalarCritical) {
  const auto r = run("critical --g1 0.6 --g2 0.6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "omega0,Omega,g1,g2,beta,symmetry,has_transition,beta_c,error\n"
            "1,1,0.6,0.6,inf,Z2_ONLY,true,1.712978591374941,\n");
}

TEST(Cli, ScalarGapAcceptsInfiniteBeta) {
  const auto r = run("gap --g1 1.2 --beta inf");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("SUPERRADIANT,1.44,"), std::string::npos) << r.out;
}

TEST(Cli, JsonFormat) {
  const auto r = run("spectrum --g1 1.2 --format json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"case_tag\": \"SR_U1_SUM\""), std::string::npos) << r.out;
}

TEST(Cli, RowErrorExitCode) {
  EXPECT_EQ(run("partition --g1 0.6 --g2 0.6 --beta inf").code, 2);
  EXPECT_EQ(run("gap --g1 -1").code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("gap --bogus 1").code, 1);
  EXPECT_EQ(run("gap --beta 0").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, SweepConfigErrors) {
  const fs::path cfg = scratch() / "bad.json";
  std::ofstream(cfg) << R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 1}]})";
  EXPECT_EQ(run("sweep " + cfg.string()).code, 1);
  EXPECT_EQ(run("sweep " + (scratch() / "absent.json").string()).code, 1);
}

TEST(Cli, SweepWritesFiles) {
  const fs::path cfg = scratch() / "ok.json";
  const fs::path prefix = scratch() / "ok";
  std::ofstream(cfg) << R"({"axes": [{"name": "g1", "start": 0.2, "stop": 1.2, "count": 3}],
                            "tasks": ["gap", "critical"]})";
  const auto r = run("sweep " + cfg.string() + " --output " + prefix.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(prefix.string() + ".gap.csv"));
  EXPECT_TRUE(fs::exists(prefix.string() + ".critical.csv"));
}

TEST(Cli, SweepUnwritableOutput) {
  const fs::path cfg = scratch() / "ok2.json";
  std::ofstream(cfg) << R"({"tasks": ["gap"], "fixed": {"g1": 1}})";
  const auto r = run("sweep " + cfg.string() + " --output " + (scratch() / "no" / "such" / "x").string());
  EXPECT_NE(r.code, 0);
}
