#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "deskmd/bench.hpp"
#include "deskmd/cli.hpp"

namespace fs = std::filesystem;
using deskmd::run_cli;

namespace {

const std::string kData = DESKMD_DATA_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("deskmd_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> dock_args(const fs::path& out, const std::string& workers) {
  return {"dock", "--receptor", kData + "/receptor.pdb", "--ligand", kData + "/ligand.pdb",
          "--n", "500", "--seed", "42", "--workers", workers, "--top", "10", "--out", out.string()};
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli(std::vector<std::string>{}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"dock", "--bogus"}) == 1);
  CHECK(run_cli({"minimize"}) == 1);  // required --structure missing
  const auto dir = scratch("usage");
  CHECK(run_cli({"bench", "dock", "--n", "10,x", "--out", dir.string()}) == 1);
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("runtime errors exit with 2") {
  const auto dir = scratch("runtime");
  CHECK(run_cli({"minimize", "--structure", (dir / "missing.xyz").string(), "--out", dir.string()}) == 2);
  CHECK(run_cli({"nvt", "--structure", kData + "/argon64.xyz", "--box", "2.2", "--steps", "10",
                 "--pressure-coupling", "--out", dir.string()}) == 2);
  CHECK_FALSE(fs::exists(dir / "run.log"));
}

TEST_CASE("dock writes results, ranking and log; reruns and worker counts agree") {
  const auto a = scratch("dock_a");
  const auto b = scratch("dock_b");
  const auto c = scratch("dock_c");
  REQUIRE(run_cli(dock_args(a, "8")) == 0);
  REQUIRE(run_cli(dock_args(b, "8")) == 0);
  REQUIRE(run_cli(dock_args(c, "1")) == 0);
  for (const char* f : {"poses.csv", "ranked.csv", "run.log"}) CHECK(fs::exists(a / f));
  CHECK(slurp(a / "poses.csv") == slurp(b / "poses.csv"));
  CHECK(slurp(a / "ranked.csv") == slurp(b / "ranked.csv"));
  CHECK(slurp(a / "poses.csv") == slurp(c / "poses.csv"));
  CHECK(slurp(a / "ranked.csv") == slurp(c / "ranked.csv"));

  const auto ranked = slurp(a / "ranked.csv");
  CHECK(std::count(ranked.begin(), ranked.end(), '\n') == 11);
  const auto log = slurp(a / "run.log");
  CHECK(log.find("seed=42") != std::string::npos);
  CHECK(log.find("clash_count=") != std::string::npos);
  CHECK(log.find("wall_seconds=") != std::string::npos);
}

TEST_CASE("minimize and dynamics are reproducible") {
  const auto a = scratch("md_a");
  const auto b = scratch("md_b");
  for (const auto& dir : {a, b}) {
    const std::string w = dir == a ? "1" : "8";
    REQUIRE(run_cli({"minimize", "--structure", kData + "/argon64.xyz", "--box", "2.2", "--fmax", "0",
                     "--max-steps", "50", "--workers", w, "--out", (dir / "em").string()}) == 0);
    REQUIRE(run_cli({"nvt", "--structure", kData + "/argon64.xyz", "--box", "2.2", "--steps", "200",
                     "--stride", "20", "--workers", w, "--out", (dir / "nvt").string()}) == 0);
    REQUIRE(run_cli({"md", "--structure", (dir / "nvt" / "final.xyz").string(), "--box", "2.2", "--steps",
                     "100", "--nve", "--workers", w, "--out", (dir / "md").string()}) == 0);
  }
  CHECK(slurp(a / "em" / "em.csv") == slurp(b / "em" / "em.csv"));
  CHECK(slurp(a / "em" / "minimized.xyz") == slurp(b / "em" / "minimized.xyz"));
  CHECK(slurp(a / "nvt" / "trajectory.csv") == slurp(b / "nvt" / "trajectory.csv"));
  CHECK(slurp(a / "md" / "trajectory.csv") == slurp(b / "md" / "trajectory.csv"));
  CHECK(slurp(a / "nvt" / "trajectory.csv").rfind("step,time_ps,epot_kjmol,ekin_kjmol,temperature_k\n", 0) == 0);
}

TEST_CASE("worker count: flag beats environment, environment beats default") {
  const auto dir = scratch("env");
  const std::vector<std::string> base{"minimize", "--structure", kData + "/argon64.xyz", "--box", "2.2",
                                      "--out", dir.string()};
  ::setenv(deskmd::kWorkersEnv, "3", 1);
  REQUIRE(run_cli(base) == 0);
  CHECK(slurp(dir / "run.log").find("workers=3\n") != std::string::npos);
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--workers", "2"});
  REQUIRE(run_cli(with_flag) == 0);
  CHECK(slurp(dir / "run.log").find("workers=2\n") != std::string::npos);
  ::unsetenv(deskmd::kWorkersEnv);
  REQUIRE(run_cli(base) == 0);
  CHECK(slurp(dir / "run.log").find("workers=1\n") != std::string::npos);
}

TEST_CASE("bench dock sweep then analyze") {
  const auto dir = scratch("bench");
  REQUIRE(run_cli({"bench", "dock", "--n", "10,100,500", "--workers", "1,2,4,8", "--reps", "5", "--warmup", "0",
                   "--receptor-atoms", "60", "--ligand-atoms", "6", "--out", dir.string()}) == 0);
  const auto recs = deskmd::read_records_csv(slurp(dir / "raw.csv"));
  CHECK(recs.size() == 3 * 4 * 5);

  REQUIRE(run_cli({"analyze", "--csv", (dir / "raw.csv").string(), "--amdahl", "--plots", "--out",
                   dir.string()}) == 0);
  CHECK(fs::exists(dir / "scaling.csv"));
  CHECK(fs::exists(dir / "amdahl.log"));
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(dir)) svgs += e.path().extension() == ".svg";
  CHECK(svgs == 2);
  const auto scaling = deskmd::read_scaling_csv(slurp(dir / "scaling.csv"));
  REQUIRE(scaling.size() == 4);
  CHECK(scaling.front().speedup == 1.0);
  const auto amdahl = slurp(dir / "amdahl.log");
  CHECK(amdahl.find("f=") != std::string::npos);
  CHECK(amdahl.find("clamped=") != std::string::npos);
}

TEST_CASE("bench md sweep produces one record per stage, workload, workers and rep") {
  const auto dir = scratch("bench_md");
  REQUIRE(run_cli({"bench", "md", "--steps", "10,20", "--workers", "1,2", "--reps", "2", "--warmup", "0",
                   "--per-side", "3", "--fluid-box", "2.1", "--out", dir.string()}) == 0);
  const auto recs = deskmd::read_records_csv(slurp(dir / "raw.csv"));
  CHECK(recs.size() == 3 * 2 * 2 * 2);
  REQUIRE(run_cli({"analyze", "--csv", (dir / "raw.csv").string(), "--plots", "--out", dir.string()}) == 0);
  CHECK(fs::exists(dir / "walltime.svg"));
  CHECK(fs::exists(dir / "efficiency.svg"));
}

TEST_CASE("analyze rejects an empty record file") {
  const auto dir = scratch("empty");
  std::ofstream(dir / "raw.csv") << "stage,workload,workers,repetition,wall_seconds\n";
  CHECK(run_cli({"analyze", "--csv", (dir / "raw.csv").string(), "--out", dir.string()}) == 2);
}
