#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scfv/commands.hpp"
#include "scfv/verify.hpp"

namespace {

// exit codes: 0 success, 1 validation failure, 2 runtime/solver failure
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const scfv::ConfigError& e) {
        std::cerr << "error: validation failed\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return kExitValidation;
    } catch (const scfv::EnsembleError& e) {
        std::cerr << "error: " << e.what() << " (completed nodes: " << e.completed_nodes() << ")\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume solver for the compressible barotropic Navier-Stokes system "
                 "on the periodic torus, with a stochastic-collocation layer for ensemble "
                 "statistics and structural diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int levels = 3;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "configuration file (JSON)");
        if (config_required) opt->required();
        cmd->add_option("--output-dir", output_dir,
                        "output directory (overrides config and SCFV_OUTPUT_DIR)");
    };

    CLI::App* solve = app.add_subcommand("solve", "run one deterministic trajectory + ledger");
    add_common(solve, true);
    CLI::App* ensemble =
        app.add_subcommand("ensemble", "run the collocation ensemble + statistics + Lambda");
    add_common(ensemble, true);
    CLI::App* study = app.add_subcommand("study", "run the refinement study and emit the "
                                                  "convergence table");
    add_common(study, true);
    study->add_option("--levels", levels, "number of dyadic refinement levels")
        ->check(CLI::Range(2, 8));
    CLI::App* verify =
        app.add_subcommand("verify", "run the structural invariant suite (pass/fail per property)");
    add_common(verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    return run_guarded([&]() -> int {
        if (verify->parsed()) {
            scfv::RunConfig cfg =
                config_path.empty() ? scfv::default_verify_config() : scfv::load_config(config_path);
            return scfv::cmd_verify(cfg, std::cout);
        }
        scfv::RunConfig cfg = scfv::load_config(config_path);
        const std::string outdir = scfv::resolve_output_dir(cfg, output_dir);
        if (solve->parsed()) return scfv::cmd_solve(cfg, outdir, std::cout);
        if (ensemble->parsed()) return scfv::cmd_ensemble(cfg, outdir, std::cout);
        if (study->parsed()) return scfv::cmd_study(cfg, levels, outdir, std::cout);
        return kExitValidation;
    });
}
