#include "support/support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

using namespace mbp::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun mbp_cli(const std::string& args) {
  std::string cmd = std::string("'") + MBP_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CliRun r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fx(const std::string& name) { return "'" + fixture_path(name) + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("mbp_cli_" + std::to_string(::getpid()) + "_" +
                                      ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string tmp(const std::string& name) const { return "'" + (dir / name).string() + "'"; }
  // kA_2 as a quiver problem, written to the scratch directory.
  std::string a2() {
    std::string path = tmp("a2.json");
    EXPECT_EQ(mbp_cli("build --kind quiver " + fx("a2.quiver") + " -o " + path).code, 0);
    return path;
  }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, DiffsMatchGolden) {
  CliRun r = mbp_cli("diffs " + fx("ex145.quiver"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, read_text(fixture_path("ex145.diffs.txt")));
}

TEST_F(Cli, DiffsAsJson) {
  CliRun r = mbp_cli("--format json diffs " + fx("ex145.quiver"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[2]["delta"], "u2 b - b v2");
}

TEST_F(Cli, BuildThenValidate) {
  std::string p = tmp("ex145.json");
  ASSERT_EQ(mbp_cli("build " + fx("ex145.quiver") + " -o " + p).code, 0);
  CliRun r = mbp_cli("--format json validate " + p);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["valid"], true);
  CliRun q = mbp_cli("validate " + fx("ex145.quiver"));
  EXPECT_EQ(q.code, 0);
  EXPECT_NE(q.out.find("rdcc: true"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(mbp_cli("").code, 64);
  EXPECT_EQ(mbp_cli("frobnicate").code, 64);
  EXPECT_EQ(mbp_cli("tree --problem " + fx("ex145.quiver")).code, 64);
  EXPECT_EQ(mbp_cli("diffs " + tmp("missing.json")).code, 2);
  EXPECT_EQ(mbp_cli("detect-wild " + fx("ex145.quiver")).code, 1);
}

TEST_F(Cli, MalformedJsonIsStructuredError) {
  std::string bad = tmp("bad.json");
  ASSERT_EQ(std::system(("printf '{\"x\":' > " + bad).c_str()), 0);
  EXPECT_EQ(mbp_cli("validate " + bad).code, 2);
}

TEST_F(Cli, IsoAndIndec) {
  std::string p = a2();
  EXPECT_EQ(mbp_cli("iso --problem " + p + " " + fx("a2_rank1.json") + " " + fx("a2_rank1.json")).code, 0);
  EXPECT_EQ(mbp_cli("iso --problem " + p + " " + fx("a2_rank1.json") + " " + fx("a2_rank1_moved.json")).code, 0);
  EXPECT_EQ(mbp_cli("iso --problem " + p + " " + fx("a2_rank1.json") + " " + fx("a2_zero.json")).code, 1);
  EXPECT_EQ(mbp_cli("indec " + p + " " + fx("a2_rank1.json")).code, 1);
}

TEST_F(Cli, CanonJson) {
  std::string p = a2();
  CliRun r = mbp_cli("--format json canon --problem " + p + " --rep " + fx("a2_rank1.json"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["format"], "mbp-canon-1");
  EXPECT_EQ(j["links"], 1);
  EXPECT_EQ(j["dimension"], 3);
  EXPECT_EQ(j["indecomposable"], false);
}

TEST_F(Cli, CanonTraceReplays) {
  std::string p = a2(), trace = tmp("trace.json"), out = tmp("end.json");
  ASSERT_EQ(mbp_cli("canon --problem " + p + " --rep " + fx("a2_rank1.json") + " --trace " + trace).code, 0);
  EXPECT_EQ(mbp_cli("replay --problem " + p + " --trace " + trace + " -o " + out).code, 0);
  EXPECT_EQ(mbp_cli("validate " + out).code, 0);
}

TEST_F(Cli, WeyrOfNilpotent) {
  std::string m = tmp("m.json");
  ASSERT_EQ(std::system(("printf '[[0,1],[0,0]]' > " + m).c_str()), 0);
  CliRun r = mbp_cli("--format json weyr " + m);
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["m_sequences"]["0"], nlohmann::json({1, 1}));
}

TEST_F(Cli, TreeJsonIsDeterministic) {
  std::string p = a2();
  CliRun a = mbp_cli("--format json tree --problem " + p + " --sizes 2,2");
  CliRun b = mbp_cli("--format json tree --problem " + p + " --sizes 2,2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["leaves"], 3);
}
