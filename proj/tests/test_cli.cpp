#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

using json = nlohmann::ordered_json;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(HILOK_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, got);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args) {
  CliRun r = run(args);
  EXPECT_EQ(r.code, 0) << args << "\n" << r.out;
  return json::parse(r.out);
}

std::string tmp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("hilok_cli_" + std::to_string(getpid()) + "_" + name);
  std::ofstream(path) << text;
  return path.string();
}

TEST(Cli, PairOfTheSimplestClass) {
  json j = run_json("pair -F 'F(2)((t))' -w '1/t' -x '1+t'");
  EXPECT_EQ(j["schema"], "hilok/1");
  EXPECT_EQ(j["value"], 1);
  EXPECT_EQ(run_json("pair -F 'F(2)((t))' -w '1/t' -x 't'")["value"], 0);
}

TEST(Cli, GradedPieceOfTheUniformizerSymbol) {
  json j = run_json("k graded -F 'F(2)((t))((u))' -s '{t,u}'");
  EXPECT_EQ(j["graded"]["gr0"]["second"], "{t}");
  EXPECT_EQ(j["graded"]["u_level"], 0);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("pair -F 'F(2)((t))'").code, 2);
  EXPECT_EQ(run("nosuchcommand").code, 2);
  EXPECT_EQ(run("eval -F 'F(2)((t))' -e '1+'").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, DomainAndPrecisionErrors) {
  CliRun r = run("eval -F 'F(6)((t))' -e 1");
  EXPECT_EQ(r.code, 4);
  json e = json::parse(r.out)["error"];
  EXPECT_EQ(e["kind"], "NotPrime");
  EXPECT_EQ(e["argument"], "-F");
  EXPECT_EQ(run("eval -F 'F(2)((t))' -e '1/0'").code, 4);
  r = run("pair -F 'F(2)((t))@prec=1' -w '1/(t^2+t^3)' -x '1+t'");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out)["error"]["argument"], "-w");
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* args : {"character -F 'F(2)((t))((u))' -w '1/u'", "normcheck -F 'F(2)((t))' -a 't^-3' --samples 5",
                           "grmatrix -F 'F(2)((t))((u))' -i 1 -r 1"}) {
    CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, KClassesRoundTripThroughJson) {
  std::string direct = run("k graded -F 'F(3)((t))((u))' -s '{1+t*u, u}'").out;
  std::string path = tmp_file("k.json", run("k symbol -F 'F(3)((t))((u))' -s '{1+t*u, u}'").out);
  EXPECT_EQ(run("k graded --input-json " + path).out, direct);
  EXPECT_EQ(run("k graded -F 'F(3)((t))((u))' --input-json " + path).out, direct);
  std::filesystem::remove(path);
}

TEST(Cli, CohomologyClassesRoundTripThroughJson) {
  CliRun first = run("h reduce -F 'F(2)((t))((u))' -w '1/u + t^-2'");
  std::string path = tmp_file("h.json", first.out);
  EXPECT_EQ(run("h reduce --input-json " + path).out, first.out);
  json j = json::parse(first.out);
  EXPECT_EQ(j["reduced"]["value"], "[(u^(-1) + t^(-1))]");
  EXPECT_EQ(j["as_root"]["value"], "t^(-1)");
  std::filesystem::remove(path);
}

TEST(Cli, MismatchedInputFieldIsADomainError) {
  std::string path = tmp_file("k2.json", run("k symbol -F 'F(3)((t))((u))' -s '{t, u}'").out);
  EXPECT_EQ(run("k zero -F 'F(2)((t))((u))' --input-json " + path).code, 4);
  std::filesystem::remove(path);
}

TEST(Cli, TextFormatFlattensTheJson) {
  CliRun r = run("pair -F 'F(2)((t))' -w '1/t' -x '1+t' --format text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("schema   hilok/1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("value    1\n"), std::string::npos) << r.out;
}

TEST(Cli, SelftestPasses) {
  json j = run_json("selftest");
  EXPECT_EQ(j["ok"], true);
}

TEST(Cli, ExistenceAgreesWithTheNormOracle) {
  json j = run_json("existence -F 'F(2)((t))' -w 't^-3'");
  EXPECT_EQ(j["oracle_equal"], true) << j.dump();
}

}  // namespace
