#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tpslab/io.hpp"

using namespace tpslab;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Result run(const std::string& args) {
  const std::string cmd = std::string(TPSLAB_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("tpslab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const Json& j) {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p.string();
  }

  std::filesystem::path dir_;
};

Json diag_matrix(std::vector<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return matrix_to_json(m);
}

}  // namespace

TEST_F(CliTest, DimsLedger) {
  const auto r = run("dims --factors 2,2,2");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["dim_u_tps"], 10);
  EXPECT_EQ(j["dim_u_tps_numeric"], 10);
  EXPECT_EQ(j["D_H"], 8);
  EXPECT_EQ(j["D_TPS"], 4);
  EXPECT_EQ(j["gap"], 4);
}

TEST_F(CliTest, DimsTableCsv) {
  const auto r = run("dims --table 2 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  EXPECT_NE(r.out.find("\n4,"), std::string::npos);
}

TEST_F(CliTest, ValidationExitCodes) {
  EXPECT_EQ(run("dims --factors 2,1").code, 2);
  EXPECT_EQ(run("dims --factors x").code, 2);
  EXPECT_EQ(run("dims --bogus").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("orbit --preset ising2").code, 2);  // no seed
  EXPECT_EQ(run("entropy-trajectory --preset ising2 --t-grid 1:0:0.1").code, 2);
  const auto bad = write("bad.json", {{"rows", 2}, {"cols", 2}, {"entries", {{0, 0}, {1, 0}}}});
  EXPECT_EQ(run("commutant --hamiltonian " + bad).code, 2);
  const auto nonherm = write("nonherm.json", {{"rows", 2}, {"cols", 2}, {"entries", {{0, 0}, {1, 0}, {0, 0}, {0, 0}}}});
  EXPECT_EQ(run("commutant --hamiltonian " + nonherm).code, 2);
}

TEST_F(CliTest, CommutantPlanted) {
  const auto path = write("h.json", diag_matrix({0, 1, 1, 2}));
  const auto r = run("commutant --hamiltonian " + path);
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["dimension"], 6);
  EXPECT_EQ(j["oracle_dimension"], 6);
  EXPECT_EQ(j["oracle_agrees"], true);
  EXPECT_EQ(j["multiplicities"], Json({1, 2, 1}));
}

TEST_F(CliTest, StrictRejectsBorderlineClustering) {
  const auto path = write("h.json", diag_matrix({0, 5e-8, 1}));
  EXPECT_EQ(run("commutant --hamiltonian " + path + " --cluster-tol 1e-8").code, 0);
  EXPECT_EQ(run("commutant --hamiltonian " + path + " --cluster-tol 1e-8 --strict").code, 3);
}

TEST_F(CliTest, TpsCheck) {
  const auto good = write("tps.json", {{"factor_dims", {2, 2}}});
  const auto r = run("tps-check --tps " + good);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["passes"], true);
  const auto bad = write("bad.json", {{"factor_dims", {2, 2}}, {"frame", diag_matrix({1, 1, 1})}});
  EXPECT_EQ(run("tps-check --tps " + bad).code, 2);
  const auto scaled = write("scaled.json", {{"factor_dims", {2, 2}}, {"frame", diag_matrix({2, 2, 2, 2})}});
  EXPECT_EQ(run("tps-check --tps " + scaled).code, 2);
}

TEST_F(CliTest, OrbitMovesAlgebras) {
  const auto r = run("orbit --preset 'gue(4)' --seed 3 --count 5");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["algebra_set_changed"], 5);
  for (const auto& s : j["samples"]) EXPECT_LE(s["commutation_residual"].get<double>(), 1e-9);
}

TEST_F(CliTest, CounterexamplesPersistDeterministically) {
  const auto runs = (dir_ / "runs").string();
  const auto a = run("counterexamples --preset ising2 --seed 42 --runs-dir " + runs);
  const auto b = run("counterexamples --preset ising2 --seed 42 --runs-dir " + runs);
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const auto record = dir_ / "runs" / "ising2" / "42" / "record.jsonl";
  ASSERT_TRUE(std::filesystem::exists(record));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "runs" / "ising2" / "42" / "trajectory.csv"));
  std::ifstream in(record);
  std::vector<Json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(Json::parse(line));
  ASSERT_EQ(lines.size(), 4u);
  for (auto& l : lines) l.erase("wall_time_ms");
  EXPECT_EQ(lines[0].dump(), lines[2].dump());
  EXPECT_EQ(lines[1].dump(), lines[3].dump());
  EXPECT_EQ(lines[0]["verdicts"]["evolution_certified"], 9);
  EXPECT_EQ(lines[1]["verdicts"]["entangling"], true);
}

TEST_F(CliTest, EntropyTrajectoryCsv) {
  const auto r = run("entropy-trajectory --preset ising2 --t-grid 0:pi/4:pi/4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,S_1,S_2,I_1_2,product_residual");
  EXPECT_NE(r.out.find("0.69314718"), std::string::npos);
  EXPECT_EQ(run("entropy-trajectory --preset 'gue(4)'").code, 2);  // needs --seed
  EXPECT_EQ(run("entropy-trajectory --preset 'gue(4)' --seed 1").code, 0);
}

TEST_F(CliTest, Selftest) {
  const auto r = run("selftest");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["passed"], true);
}
