#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "scfv_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const std::string& name, const std::string& content) {
    auto path = work_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SCFV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSolveConfig = R"({
  "mesh": {"dim": 2, "cells": 8},
  "gas": {"a": 1.0, "gamma": 1.4},
  "scheme": {"cfl": 0.1},
  "data": {
    "param_dim": 1,
    "rho": {"base": 1.0, "modes": [{"k": [1, 1], "amp": 0.2}]},
    "velocity": [
      {"modes": [{"k": [0, 1], "amp": 0.1}]},
      {"modes": [{"k": [1, 0], "amp": 0.1}]}
    ],
    "mu": {"base": 0.1},
    "mu_min": 1e-4
  },
  "run": {"t_final": 0.02, "output_times": [0.0, 0.02]}
})";

const char* kEnsembleConfig = R"({
  "mesh": {"dim": 2, "cells": 8},
  "data": {
    "param_dim": 1,
    "rho": {"base": 1.0, "modes": [{"k": [1, 1], "amp": 0.15, "omega_index": 0, "omega_gain": 0.1}]},
    "velocity": [{"modes": [{"k": [0, 1], "amp": 0.1}]}, {"modes": [{"k": [1, 0], "amp": 0.1}]}],
    "mu": {"base": 0.1},
    "mu_min": 1e-4
  },
  "collocation": {"cells_per_axis": 2, "rule": "midpoint", "seed": 7},
  "run": {"t_final": 0.01}
})";

} // namespace

TEST(Cli, SolveProducesOutputs) {
    auto cfg = write_config("solve.json", kSolveConfig);
    auto out = (work_dir() / "out_solve").string();
    ASSERT_EQ(run_cli("solve --config " + cfg + " --output-dir " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "ledger.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "rho_final.dat"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "mom_final.dat"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "rho_t1.dat"));
}

TEST(Cli, SolveIsByteDeterministic) {
    auto cfg = write_config("solve_det.json", kSolveConfig);
    auto out1 = (work_dir() / "det1").string();
    auto out2 = (work_dir() / "det2").string();
    ASSERT_EQ(run_cli("solve --config " + cfg + " --output-dir " + out1), 0);
    ASSERT_EQ(run_cli("solve --config " + cfg + " --output-dir " + out2), 0);
    EXPECT_EQ(slurp(fs::path(out1) / "ledger.csv"), slurp(fs::path(out2) / "ledger.csv"));
    EXPECT_EQ(slurp(fs::path(out1) / "rho_final.dat"), slurp(fs::path(out2) / "rho_final.dat"));
}

TEST(Cli, EnsembleRunsAndWritesSummary) {
    auto cfg = write_config("ensemble.json", kEnsembleConfig);
    auto out = (work_dir() / "out_ens").string();
    ASSERT_EQ(run_cli("ensemble --config " + cfg + " --output-dir " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "summary.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "nodes.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "rho_mean_t0.dat"));
    EXPECT_TRUE(fs::exists(fs::path(out) / "u_var_t0.dat"));
}

TEST(Cli, ValidationFailureExitsOne) {
    auto cfg = write_config("bad.json", R"({"gas": {"gamma": 0.9}})");
    EXPECT_EQ(run_cli("solve --config " + cfg), 1);
}

TEST(Cli, NegativeDensityRejectedCitingAdmissibility) {
    auto cfg = write_config("neg.json", R"({"data": {"rho": {"base": -0.5}}})");
    EXPECT_EQ(run_cli("solve --config " + cfg), 1);
}

TEST(Cli, SolverFailureExitsTwo) {
    auto cfg = write_config("diverge.json", R"({
      "mesh": {"dim": 2, "cells": 8},
      "scheme": {"picard_max_iter": 1, "picard_tol": 1e-15},
      "data": {
        "param_dim": 1,
        "rho": {"base": 1.0, "modes": [{"k": [1, 1], "amp": 0.2}]},
        "velocity": [{"modes": [{"k": [0, 1], "amp": 0.1}]}, {"modes": [{"k": [1, 0], "amp": 0.1}]}],
        "mu": {"base": 0.1}, "mu_min": 1e-4
      },
      "run": {"t_final": 0.01}
    })");
    EXPECT_EQ(run_cli("solve --config " + cfg), 2);
}

TEST(Cli, MissingConfigExitsOne) {
    EXPECT_EQ(run_cli("solve --config /nonexistent/cfg.json"), 1);
}

TEST(Cli, UnknownSubcommandFails) {
    EXPECT_NE(run_cli("frobnicate"), 0);
}

TEST(Cli, StudySmoke) {
    auto cfg = write_config("study.json", R"({
      "mesh": {"dim": 2, "cells": 8},
      "data": {
        "param_dim": 1,
        "rho": {"base": 1.0, "modes": [{"k": [1, 1], "amp": 0.15, "omega_index": 0, "omega_gain": 0.1}]},
        "velocity": [{"modes": [{"k": [0, 1], "amp": 0.1}]}, {"modes": [{"k": [1, 0], "amp": 0.1}]}],
        "mu": {"base": 0.1}, "mu_min": 1e-4
      },
      "collocation": {"cells_per_axis": 2},
      "run": {"t_final": 0.01}
    })");
    auto out = (work_dir() / "out_study").string();
    ASSERT_EQ(run_cli("study --config " + cfg + " --levels 2 --output-dir " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "study.csv"));
    std::string table = slurp(fs::path(out) / "study.csv");
    EXPECT_NE(table.find("cauchy_rho"), std::string::npos);
}

TEST(Cli, VerifyDefaultConfigPasses) {
    EXPECT_EQ(run_cli("verify"), 0);
}

TEST(Cli, OutputDirEnvOverride) {
    auto cfg = write_config("envdir.json", kSolveConfig);
    auto out = (work_dir() / "env_out").string();
    const std::string cmd = std::string("SCFV_OUTPUT_DIR=") + out + " " + SCFV_CLI_PATH +
                            " solve --config " + cfg + " > /dev/null 2>&1";
    ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "ledger.csv"));
}
