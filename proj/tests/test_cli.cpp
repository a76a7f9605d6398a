#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyperdev/bounds.hpp"
#include "hyperdev/families.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hyperdev;

namespace {

std::string cli() { return HYPERDEV_CLI_PATH; }

// fresh working directory per test
fs::path make_dir(const std::string& name) {
  fs::path d = fs::path(::testing::TempDir()) / ("hyperdev_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = cli() + " " + args;
  if (!capture.empty()) cmd += " > " + capture.string() + " 2>&1";
  else cmd += " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << p;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, BuildWritesEdgeListAndManifest) {
  auto d = make_dir("build");
  auto edges = d / "edges.txt";
  ASSERT_EQ(run("build --family kap --n 13 --k 3 --out " + edges.string()), 0);
  std::ifstream in(edges);
  Hypergraph H = read_edge_list(in);
  Hypergraph ref = build_kap(13, 3);
  EXPECT_EQ(H.N, 13);
  EXPECT_EQ(H.k, 3);
  EXPECT_EQ(H.edges, ref.edges);

  auto m = slurp_json(d / "edges.txt.manifest.json");
  EXPECT_EQ(m.at("version"), "hyperdev 1.0.0");
  EXPECT_EQ(m.at("subcommand"), "build");
  EXPECT_EQ(m.at("options").at("fam").at("family"), "kap");
  EXPECT_EQ(m.at("global").at("seed"), 1);
}

TEST(Cli, AnalyzeEmitsExactRegularityReport) {
  auto d = make_dir("analyze");
  auto out = d / "report.json";
  ASSERT_EQ(run("analyze --family kap --n 13 --k 3 --r 1,2 --out " + out.string()), 0);
  auto doc = slurp_json(out);
  EXPECT_EQ(doc.at("N"), 13);
  EXPECT_EQ(doc.at("h"), 78);
  ASSERT_EQ(doc.at("reports").size(), 2u);
  const auto& r1 = doc.at("reports")[0];
  EXPECT_EQ(r1.at("r"), 1);
  EXPECT_EQ(r1.at("max_degree"), 18);
  EXPECT_EQ(r1.at("min_degree"), 18);
  EXPECT_DOUBLE_EQ(r1.at("eta_float").get<double>(), 0.0);
  EXPECT_TRUE(r1.at("exact").get<bool>());
  const auto& r2 = doc.at("reports")[1];
  EXPECT_EQ(r2.at("max_degree"), 3);
  EXPECT_EQ(r2.at("min_degree"), 3);
}

TEST(Cli, VerifyMartingaleIsExactOnEveryTrial) {
  auto d = make_dir("verify");
  auto out = d / "verify.json";
  auto log = d / "stdout.txt";
  ASSERT_EQ(run("verify-martingale --family schur --n 11 --trials 3 --out " + out.string(), log),
            0);
  auto doc = slurp_json(out);
  EXPECT_EQ(doc.at("trials"), 3);
  EXPECT_EQ(doc.at("exact"), 3);
  EXPECT_NE(slurp(log).find("3/3 exact"), std::string::npos);
}

TEST(Cli, BoundsAcceptsBareKeyParamsAndMatchesTheLibrary) {
  auto d = make_dir("bounds");
  auto out = d / "bound.csv";
  ASSERT_EQ(run("bounds --theorem thm5.2 --params '{N:101,m:50,a:4000}' --out " + out.string()),
            0);
  auto rows = read_csv(out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "N");
  ASSERT_EQ(rows[1].size(), 7u);
  auto ref = ap3_explicit_bound(101, 50, 4000);
  EXPECT_NEAR(std::stod(rows[1][3]), ref.value, 1e-12);
  EXPECT_NEAR(std::stod(rows[1][5]), ref.a_star, 1e-9);
  EXPECT_EQ(rows[1][6], "1");  // 4000 > a_star: past the trivial region
}

TEST(Cli, BoundsGridEmitsOneRowPerPoint) {
  auto d = make_dir("grid");
  auto out = d / "grid.csv";
  ASSERT_EQ(run("bounds --theorem thm5.2 --params '{N:101,m:50,a:0}' "
                "--grid a=1000:4000:1000 --out " +
                out.string()),
            0);
  auto rows = read_csv(out);
  ASSERT_EQ(rows.size(), 5u);  // header + 4 grid points
  // the nontrivial flag flips between a = 3000 and a = 4000 (a* ~ 3837)
  EXPECT_EQ(rows[3][6], "0");
  EXPECT_EQ(rows[4][6], "1");
}

TEST(Cli, SimulateOutputDoesNotDependOnThreadCount) {
  auto d = make_dir("threads");
  auto one = d / "one.csv";
  auto four = d / "four.csv";
  std::string base = "simulate --family kap --n 13 --k 3 --model m --param 6 "
                     "--thresholds 0,2 --samples 2000 --seed 9";
  ASSERT_EQ(run(base + " --threads 1 --out " + one.string()), 0);
  ASSERT_EQ(run(base + " --threads 4 --out " + four.string()), 0);
  EXPECT_EQ(slurp(one), slurp(four));
}

TEST(Cli, RerunReplaysAManifestByteForByte) {
  auto d = make_dir("rerun");
  auto out = d / "sim.csv";
  ASSERT_EQ(run("simulate --family schur --n 11 --model p --param 1/2 --thresholds 0,1,3 "
                "--samples 1500 --seed 17 --out " +
                out.string()),
            0);
  std::string first = slurp(out);
  fs::remove(out);
  ASSERT_EQ(run("rerun --manifest " + (d / "sim.csv.manifest.json").string()), 0);
  EXPECT_EQ(slurp(out), first);
}

TEST(Cli, TransferMatchesTheExactLibraryValue) {
  auto d = make_dir("transfer");
  auto out = d / "transfer.json";
  ASSERT_EQ(run("transfer --family schur --n 13 --p 1/2 --a 3 --out " + out.string()), 0);
  auto doc = slurp_json(out);
  EXPECT_EQ(doc.at("probability"), "457/2048");
  EXPECT_DOUBLE_EQ(doc.at("probability_float").get<double>(), 457.0 / 2048.0);
  EXPECT_EQ(doc.at("h"), 60);
}

TEST(Cli, ConstructEmitsEdgesAndNicenessReport) {
  auto d = make_dir("construct");
  auto edges = d / "family.txt";
  auto report = d / "report.json";
  ASSERT_EQ(run("construct --r 2 --l 6 --s 12 --gamma 1/4 --relaxed --out " + edges.string() +
                " --report " + report.string()),
            0);
  std::ifstream in(edges);
  Hypergraph H = read_edge_list(in);
  EXPECT_EQ(H.N, 72);
  EXPECT_EQ(H.h(), 660);
  auto doc = slurp_json(report);
  EXPECT_EQ(doc.at("h"), 660);
  EXPECT_EQ(doc.at("q_coefficients"), (json{"660", "0", "1980", "660"}));
  EXPECT_EQ(doc.at("niceness").at("eta"), "1/55");
  EXPECT_TRUE(doc.at("niceness").at("density_ok").get<bool>());
  bool saw_relaxed = false;
  for (const auto& w : doc.at("warnings"))
    if (w.get<std::string>().find("relaxed") != std::string::npos) saw_relaxed = true;
  EXPECT_TRUE(saw_relaxed);
  // without --relaxed the same shape violates the strict-regime pin (l != 24)
  EXPECT_EQ(run("construct --r 2 --l 6 --s 12 --gamma 1/4 --out " + (d / "x.txt").string()), 2);
}

TEST(Cli, ExitCodesSeparateFailureClasses) {
  auto d = make_dir("exits");
  // configuration errors -> 2
  EXPECT_EQ(run("build --family nosuch --n 5 --k 3 --out " + (d / "a.txt").string()), 2);
  EXPECT_EQ(run("build --no-such-flag"), 2);
  // budget exhaustion -> 2 (the solution-space sweep checks its budget)
  std::ofstream(d / "ap3.txt") << "1 -2 1\n";
  std::string linsys = "build --family linsys --matrix " + (d / "ap3.txt").string() + " --n 13";
  EXPECT_EQ(run(linsys + " --out " + (d / "b.txt").string()), 0);
  {
    std::ifstream in(d / "b.txt");
    EXPECT_EQ(read_edge_list(in).h(), 78);
  }
  EXPECT_EQ(run(linsys + " --budget 5 --out " + (d / "c.txt").string()), 2);
  // missing input file -> 3
  EXPECT_EQ(run("analyze --in " + (d / "missing.txt").string() + " --r 1"), 3);
  EXPECT_EQ(run("bounds --theorem thm5.2 --params " + (d / "missing.json").string()), 3);
}

TEST(Cli, StdoutOnlyRunSkipsTheManifest) {
  auto d = make_dir("stdout");
  std::string cmd = "cd " + d.string() + " && " + cli() +
                    " build --family kap --n 7 --k 3 > edges.txt 2>/dev/null";
  int st = std::system(cmd.c_str());
  ASSERT_EQ(WIFEXITED(st) ? WEXITSTATUS(st) : -1, 0);
  std::ifstream in(d / "edges.txt");
  Hypergraph H = read_edge_list(in);
  EXPECT_EQ(H.h(), 21);
  for (const auto& entry : fs::directory_iterator(d))
    EXPECT_EQ(entry.path().string().find("manifest"), std::string::npos) << entry.path();
  // an explicit --manifest forces one even without file outputs
  auto mpath = d / "forced.manifest.json";
  ASSERT_EQ(run("build --family kap --n 7 --k 3 --manifest " + mpath.string()), 0);
  EXPECT_TRUE(fs::exists(mpath));
  EXPECT_EQ(slurp_json(mpath).at("subcommand"), "build");
}
