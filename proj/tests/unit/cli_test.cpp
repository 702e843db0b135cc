#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eqplant/xorsat.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result eqplant(const std::string& args) {
  const std::string cmd = std::string(EQPLANT_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eqplant_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, GenerateCompileSolve) {
  ASSERT_EQ(eqplant("generate --n 16 --nullity 0 --plant --seed 7 --out " + path("a.json")).code, 0);
  const auto sys = eqplant::system_from_json(slurp(path("a.json")));
  EXPECT_EQ(sys.n_vars, 16u);
  ASSERT_TRUE(sys.planted.has_value());

  ASSERT_EQ(eqplant("compile --in " + path("a.json") + " --out " + path("a.ising")).code, 0);
  EXPECT_EQ(slurp(path("a.ising")).rfind("p ising 32 -64\n", 0), 0u);

  ASSERT_EQ(eqplant("solve --in " + path("a.ising") + " --seed 1 --target auto --out " + path("r.json")).code, 0);
  const auto r = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_TRUE(r["found"].get<bool>());
  EXPECT_EQ(r["best_energy"].get<long>(), -64);

  // The JSON instance solves the same way.
  ASSERT_EQ(eqplant("solve --in " + path("a.json") + " --seed 1 --out " + path("r2.json")).code, 0);
  EXPECT_EQ(slurp(path("r2.json")), slurp(path("r.json")));
}

TEST_F(Cli, OutputsAreByteIdenticalOnRerun) {
  for (const char* name : {"x", "y"}) {
    const std::string n(name);
    ASSERT_EQ(eqplant("generate --n 12 --nullity 1 --plant --seed 3 --out " + path(n + ".json")).code, 0);
    ASSERT_EQ(eqplant("solve --in " + path("x.json") + " --solver pth --seed 5 --sweeps-max 200 --target none --out " +
                      path(n + "_r.json") + " --minima " + path(n + "_m.csv"))
                  .code,
              0);
    ASSERT_EQ(eqplant("bench --sizes 8,10,12 --instances 3 --seed 2 --sweeps-max 5000 --threads 2 --out-dir " +
                      path(n + "_bench"))
                  .code,
              0);
  }
  EXPECT_EQ(slurp(path("x.json")), slurp(path("y.json")));
  EXPECT_EQ(slurp(path("x_r.json")), slurp(path("y_r.json")));
  EXPECT_EQ(slurp(path("x_m.csv")), slurp(path("y_m.csv")));
  for (const char* f : {"runs.csv", "scaling.csv", "fit.json"})
    EXPECT_EQ(slurp(dir_ / "x_bench" / f), slurp(dir_ / "y_bench" / f)) << f;
  EXPECT_FALSE(fs::exists(dir_ / "x_bench" / "timing.csv"));
  const auto scaling = slurp(dir_ / "x_bench" / "scaling.csv");
  EXPECT_EQ(std::count(scaling.begin(), scaling.end(), '\n'), 4);
  EXPECT_FALSE(nlohmann::json::parse(slurp(dir_ / "x_bench" / "fit.json"))["alpha"].is_null());
}

TEST_F(Cli, MinimaCsvCarriesDistance) {
  ASSERT_EQ(eqplant("generate --n 16 --nullity 0 --plant --seed 4 --out " + path("a.json")).code, 0);
  ASSERT_EQ(eqplant("solve --in " + path("a.json") + " --target none --sweeps-max 30 --snapshot-interval 10 --minima " +
                    path("m.csv") + " --out " + path("r.json"))
                .code,
            0);
  const auto csv = slurp(path("m.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sweep,energy,hamming_to_solution");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n10,"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  // Unsatisfiable and unplanted: no ground energy for --target auto.
  const std::string unsat = path("unsat.json");
  std::ofstream(unsat) << R"({"format":"xorsat-v1","n":3,"k":3,"r":2,"seed":0,)"
                       << R"("clauses":[{"vars":[0,1,2],"b":0},{"vars":[0,1,2],"b":1}],"nullity":2,"planted":null})";
  EXPECT_EQ(eqplant("solve --in " + unsat + " --target auto").code, 1);
  EXPECT_EQ(eqplant("solve --in " + path("missing.json")).code, 2);
  std::ofstream(path("bad.ising")) << "p ising 2 ?\nJ 0 5 1\n";
  EXPECT_EQ(eqplant("solve --in " + path("bad.ising")).code, 2);
  EXPECT_EQ(eqplant("generate --n 5 --k 3 --r 2").code, 1);
  EXPECT_EQ(eqplant("generate").code, 2);
  EXPECT_EQ(eqplant("frobnicate").code, 2);
  EXPECT_EQ(eqplant("solve --in " + unsat + " --target lots").code, 2);
  EXPECT_EQ(eqplant("gadget-search --k 3 --aux 0 --max-mag 3").code, 1);
  EXPECT_EQ(eqplant("bench --sizes 8,x --out-dir " + path("b")).code, 2);
}

TEST_F(Cli, GadgetSearch) {
  const auto r = eqplant("gadget-search --k 3 --aux 1 --max-mag 2");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ground_energy"].get<int>(), -4);
  EXPECT_EQ(j["spins"].get<int>(), 4);
}

TEST_F(Cli, Verify) {
  ASSERT_EQ(eqplant("generate --n 10 --nullity 2 --plant --seed 9 --out " + path("a.json")).code, 0);
  const auto r = eqplant("verify --in " + path("a.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("nullity: 2"), std::string::npos);
  EXPECT_NE(r.out.find("(4 configuration(s))"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

  std::ofstream(path("lie.ising")) << "p ising 1 -5\nh 0 1\n";
  const auto lie = eqplant("verify --in " + path("lie.ising"));
  EXPECT_EQ(lie.code, 1);
  EXPECT_NE(lie.out.find("FAIL ground energy"), std::string::npos);
}

TEST_F(Cli, Sample) {
  ASSERT_EQ(eqplant("generate --n 12 --nullity 2 --plant --seed 1 --out " + path("a.json")).code, 0);
  ASSERT_EQ(eqplant("sample --in " + path("a.json") + " --runs 20 --seed 2 --sweeps-max 20000 --out " +
                    path("t.csv") + " --report " + path("t.json"))
                .code,
            0);
  const auto csv = slurp(path("t.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto j = nlohmann::json::parse(slurp(path("t.json")));
  EXPECT_EQ(j["tallies"].size(), 4u);
  EXPECT_EQ(j["runs"].get<int>() + j["misses"].get<int>(), 20);
}

}  // namespace
