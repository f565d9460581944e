#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(ABGAME_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("abgame_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, SolveValues) {
  auto r = run("solve --pegs 2 --colors 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ab(2,5) = 4"), std::string::npos) << r.out;
  r = run("solve -p 3 -c 3 --variant abb --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "p,c,variant,x,value,status\n3,3,abb,0,4,exact\n");
  r = run("solve -p 2 -c 6 --variant ab_fixed --opening 2 --format csv");
  EXPECT_EQ(r.out, "p,c,variant,x,value,status\n2,6,ab_fixed,2,4,exact\n");
}

TEST(Cli, SolveBudgetOutcomes) {
  auto r = run("solve -p 2 -c 2 --budget 1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2,2,ab,0,2,lower-bound-only"), std::string::npos) << r.out;
  const fs::path dir = fresh_dir("exhausted");
  r = run("solve -p 4 -c 7 --max-nodes 5 --out " + dir.string());
  EXPECT_EQ(r.code, 3) << r.out;
  const auto manifest = nlohmann::json::parse(slurp(dir / "solve_ab_p4_c7.manifest.json"));
  EXPECT_EQ(manifest["result"]["status"], "budget-exhausted");
  EXPECT_EQ(manifest["parameters"]["max_nodes"], 5);
  fs::remove_all(dir);
  r = run("solve -p 3 -c 6 --prove-lower 5 --format csv");
  EXPECT_NE(r.out.find("3,6,ab,0,5,lower-bound-only"), std::string::npos) << r.out;
  r = run("solve -p 3 -c 6 --prove-upper 5 --format csv");
  EXPECT_NE(r.out.find("3,6,ab,0,5,upper-bound-only"), std::string::npos) << r.out;
}

TEST(Cli, InvalidParameters) {
  EXPECT_EQ(run("solve -p 3 -c 2").code, 2);
  EXPECT_EQ(run("solve -p 2 -c 4 --variant nope").code, 2);
  EXPECT_EQ(run("solve -p 2 -c 4 --variant ab_fixed").code, 2);
  EXPECT_EQ(run("solve -p 2").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("lower -p 3 -r 2 -q 5").code, 2);
  EXPECT_EQ(run("upper -p 3 -c 8 -q 9 -x 7").code, 2);
  EXPECT_EQ(run("solve --help").code, 0);
}

TEST(Cli, TreeArtifactsAreReproducible) {
  const fs::path a = fresh_dir("tree_a"), b = fresh_dir("tree_b");
  ASSERT_EQ(run("solve -p 3 -c 5 --out " + a.string()).code, 0);
  ASSERT_EQ(run("solve -p 3 -c 5 --workers 2", "ABGAME_OUT_DIR=" + b.string()).code, 0);
  const std::string ta = slurp(a / "solve_ab_p3_c5.tree.json");
  ASSERT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b / "solve_ab_p3_c5.tree.json"));
  const auto manifest = nlohmann::json::parse(slurp(a / "solve_ab_p3_c5.manifest.json"));
  EXPECT_EQ(manifest["command"], "solve");
  EXPECT_EQ(manifest["result"]["value"], 4);
  EXPECT_EQ(manifest["parameters"]["pegs"], 3);
  EXPECT_EQ(manifest["artifacts"].size(), 3u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, TableRows) {
  auto r = run("table --pegs-min 2 --pegs-max 2 --colors-max 13 --format csv");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "p,c,variant,x,value,status");
  const int expected[] = {2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8};
  for (int c = 2; c <= 13; ++c) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "2," + std::to_string(c) + ",ab,0," + std::to_string(expected[c - 2]) + ",exact");
  }
  r = run("table --pegs-min 3 --pegs-max 2");
  EXPECT_EQ(r.code, 0);
  r = run("table --pegs-min 2 --pegs-max 3 --colors-max 4");
  EXPECT_NE(r.out.find("  3     4  4"), std::string::npos) << r.out;
  r = run("table --layout equal --pegs-min 2 --pegs-max 3");
  EXPECT_NE(r.out.find("ab(p,p)  2  4"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("qmin(p)  2  3"), std::string::npos) << r.out;
}

TEST(Cli, TableBudgetCells) {
  const fs::path dir = fresh_dir("table");
  auto r = run("table --pegs-min 4 --pegs-max 4 --colors-min 7 --colors-max 7 --max-nodes 5 --out " + dir.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("\xE2\x80\x94"), std::string::npos) << r.out;
  const auto manifest = nlohmann::json::parse(slurp(dir / "table_ab_grid_p4-4.manifest.json"));
  EXPECT_EQ(manifest["result"]["skipped"].size(), 1u);
  fs::remove_all(dir);
}

TEST(Cli, LowerPipeline) {
  auto r = run("lower -p 3 -r 5 -q 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("3 non-reducible states"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("abb(3,c) >= c+1 for c >= 5"), std::string::npos) << r.out;
  r = run("lower -p 3 -r 5 -q 6");
  EXPECT_EQ(r.code, 4);
  r = run("lower -p 2 -r 2 -q 1 --format csv");
  EXPECT_EQ(r.out, "state,secrets,budget,verdict,nodes\n1,2,1,unsolvable,1\n");
}

TEST(Cli, UpperPipeline) {
  auto r = run("upper -p 2 -c 5 -q 5 -x 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("4 answer sequences"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("abb(2,c) <= c for c >= 5"), std::string::npos) << r.out;
  r = run("upper -p 4 -c 8 -q 9 -x 4 --mode fixed --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 36);
  r = run("upper -p 3 -c 9 -q 9 -x 7");
  EXPECT_EQ(r.code, 4);
}
