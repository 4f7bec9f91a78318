#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace starpack {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(STARPACK_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("starpack_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, SolvePath) {
  const auto g = write("p5.txt", to_text(test::path(5)));
  auto r = run("solve --algo kplus --k 2 --in " + g);
  EXPECT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["covered"], 3);
  EXPECT_EQ(j["mode"], "kplus");
  EXPECT_EQ(j["t"], nullptr);
}

TEST_F(CliTest, SolveEveryAlgorithm) {
  const auto g = write("g.txt", to_text(test::with_edges(test::star(4), {{2, 6}, {6, 7}}, 2)));
  for (const std::string args : {"--algo kplus --k 2", "--algo kplus2 --k 2", "--algo kmt --k 3 --t 2",
                                 "--algo kmt --k inf --t 2", "--algo kmt-baseline --k 3 --t 2", "--algo seq --k 2",
                                 "--algo seq --k inf", "--algo oracle --k 3 --t 2 --mode kmt"}) {
    auto r = run("solve " + args + " --in " + g);
    ASSERT_EQ(r.code, 0) << args;
    auto doc = packing_from_json(Json::parse(r.out));
    EXPECT_TRUE(validate(parse_graph(to_text(test::with_edges(test::star(4), {{2, 6}, {6, 7}}, 2))), doc.packing,
                         doc.constraint)
                    .ok())
        << args;
  }
}

TEST_F(CliTest, ExitCodes) {
  const auto g = write("p5.txt", to_text(test::path(5)));
  EXPECT_EQ(run("solve --algo kmt --k 2 --t 2 --in " + g).code, 2);
  EXPECT_EQ(run("solve --algo nope --k 2 --in " + g).code, 2);
  EXPECT_EQ(run("solve --algo kplus --k zero --in " + g).code, 2);
  EXPECT_EQ(run("solve --algo kplus --k 2 --in " + (dir_ / "missing.txt").string()).code, 2);
  EXPECT_EQ(run("solve --algo kplus --bogus").code, 2);
  const auto bad = write("bad.txt", "p 2 1\ne 1 1\n");
  EXPECT_EQ(run("solve --algo kplus --k 2 --in " + bad).code, 2);
  const auto big = write("p20.txt", to_text(test::path(20)));
  EXPECT_EQ(run("solve --algo oracle --k 3 --in " + big).code, 3);
}

TEST_F(CliTest, TraceFile) {
  const auto g = write("p5.txt", to_text(test::path(5)));
  const auto trace = (dir_ / "trace.jsonl").string();
  ASSERT_EQ(run("solve --algo kplus --k 2 --in " + g + " --trace " + trace).code, 0);
  std::ifstream in(trace);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  auto j = Json::parse(line);
  EXPECT_EQ(j["kind"], "Collect");
  EXPECT_EQ(j["before"], 0);
  EXPECT_EQ(j["after"], 3);
}

TEST_F(CliTest, VerifyRoundTrip) {
  const auto g = write("p5.txt", to_text(test::path(5)));
  auto solved = run("solve --algo seq --k 4 --in " + g);
  ASSERT_EQ(solved.code, 0);
  const auto good = write("good.json", solved.out);
  auto ok = run("verify --in " + g + " --packing " + good);
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("ok ", 0), 0U);

  const auto shared = write("shared.json",
                            R"({"mode":"seq","k":2,"t":null,"stars":[{"center":1,"satellites":[2]},)"
                            R"({"center":3,"satellites":[2,4]}],"covered":5})");
  auto bad = run("verify --in " + g + " --packing " + shared);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("disjointness"), std::string::npos);

  const auto lies = write("lies.json",
                          R"({"mode":"seq","k":2,"t":null,"stars":[{"center":1,"satellites":[2]}],"covered":4})");
  EXPECT_EQ(run("verify --in " + g + " --packing " + lies).code, 1);
  const auto junk = write("junk.json", "{not json");
  EXPECT_EQ(run("verify --in " + g + " --packing " + junk).code, 2);
}

TEST_F(CliTest, GenerateIsDeterministicAndParses) {
  auto a = run("generate --family gnp --n 12 --p 0.4 --seed 9");
  auto b = run("generate --family gnp --n 12 --p 0.4 --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  InstanceSpec s;
  s.n = 12;
  s.p = 0.4;
  s.seed = 9;
  EXPECT_EQ(parse_graph(a.out), generate(s));
  auto gadget = run("generate --family pull-gadget --k 4 --which 1 --print-spec");
  ASSERT_EQ(gadget.code, 0);
  EXPECT_EQ(gadget.out.rfind("# {\"family\":\"pull-gadget\"", 0), 0U);
  EXPECT_EQ(parse_graph(gadget.out).order(), 18);
  EXPECT_EQ(run("generate --family regular --n 5 --d 3").code, 2);
}

TEST_F(CliTest, ExperimentCsv) {
  const std::string args = "experiment --algo kplus --k 3 --family gnp --count 30 --seed 4 --with-oracle";
  auto a = run(args);
  auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "instance_id,n,m,seed,algo,k,t,apx,opt,ratio,iters,ms");
  int rows = 0;
  std::string last;
  while (std::getline(lines, line)) {
    if (line.starts_with("#")) {
      last = line;
      continue;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 30);
  EXPECT_EQ(last.rfind("# rows=30 with_opt=30 ", 0), 0U);
  EXPECT_NE(last.find("bound=16/7 over_bound=0 violations=0"), std::string::npos);
}

TEST_F(CliTest, ExperimentSkipsOracleAboveCap) {
  auto r = run("experiment --algo kmt --k 3 --t 2 --family gnp --count 3 --n-min 20 --n-max 20 --with-oracle");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("with_opt=0"), std::string::npos);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_NE(line.find(",kmt,3,2,"), std::string::npos);
  EXPECT_NE(line.find(",,,"), std::string::npos);  // blank opt and ratio
}

}  // namespace
}  // namespace starpack
