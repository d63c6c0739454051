#pragma once

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <string>

#include "scfv/study.hpp"

namespace scfv {

/// Resolve the output directory: CLI override wins, then the environment
/// variable SCFV_OUTPUT_DIR, then the config value.
inline std::string resolve_output_dir(const RunConfig& cfg, const std::string& cli_override) {
    if (!cli_override.empty()) return cli_override;
    if (const char* env = std::getenv("SCFV_OUTPUT_DIR"); env && *env) return env;
    return cfg.run.output_dir;
}

/// Parameter point used for single deterministic solves of an omega-dependent
/// model: the midpoint of the parameter hypercube.
inline OmegaPoint solve_omega(const RunConfig& cfg) {
    return OmegaPoint(static_cast<std::size_t>(cfg.data.param_dim), 0.5);
}

/// One deterministic trajectory + diagnostics ledger.
inline int cmd_solve(const RunConfig& cfg, const std::string& outdir, std::ostream& os) {
    TorusMesh mesh = cfg.make_mesh();
    GasParams gas = cfg.make_gas();
    SchemeParams params = cfg.make_scheme(mesh);
    const OmegaPoint w = solve_omega(cfg);
    Viscosity visc = cfg.data.viscosity_at(w);

    FluidState s0 = init_state(cfg.data.rho0_at(w), cfg.data.m0_at(w), mesh, cfg.scheme.quad_pts);
    auto [traj, ledger] = run(s0, cfg.run.t_final, params, visc, gas);

    write_ledger_csv(ledger, outdir + "/ledger.csv");
    write_field(traj.states.back().rho, outdir + "/rho_final.dat");
    write_field(traj.states.back().mom, outdir + "/mom_final.dat");
    for (std::size_t i = 0; i < cfg.run.output_times.size(); ++i) {
        const FluidState& s = traj.at_time(cfg.run.output_times[i]);
        write_field(s.rho, outdir + "/rho_t" + std::to_string(i) + ".dat");
        write_field(s.mom, outdir + "/mom_t" + std::to_string(i) + ".dat");
    }

    os << "solve: " << traj.step_count() << " steps to t = " << traj.final_time() << "\n";
    os << "  energy " << ledger.rows.front().energy << " -> " << ledger.rows.back().energy << "\n";
    os << "  mass drift (rel)      " << ledger.max_mass_drift_rel() << "\n";
    os << "  min step dissipation  " << ledger.min_dissipation() << "\n";
    os << "  energy defect         " << ledger.energy_inequality_defect() << "\n";
    os << "  outputs in " << outdir << "\n";
    return 0;
}

/// Collocation ensemble: statistics fields, boundedness statistic, per-node
/// L-infinity table.
inline int cmd_ensemble(const RunConfig& cfg, const std::string& outdir, std::ostream& os) {
    TorusMesh mesh = cfg.make_mesh();
    GasParams gas = cfg.make_gas();
    SchemeParams params = cfg.make_scheme(mesh);
    ProbabilityBox space = make_probability_box(cfg.data.param_dim);
    Partition part = build_partition(space, cfg.colloc.cells_per_axis);
    NodeSet nodes = choose_nodes(part, parse_node_rule(cfg.colloc.rule), cfg.colloc.seed);

    CollocationSolution sol = run_collocation(cfg.data, part, nodes, mesh, params, gas,
                                              cfg.run.t_final, cfg.colloc.workers,
                                              cfg.scheme.quad_pts);

    std::vector<double> times = cfg.run.output_times;
    if (times.empty()) times.push_back(cfg.run.t_final);
    std::vector<EnsembleStats> stats = field_statistics(sol, times);

    write_ensemble_summary_csv(sol, stats, outdir + "/summary.csv");
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const std::string tag = "_t" + std::to_string(i);
        write_field(stats[i].rho_mean, outdir + "/rho_mean" + tag + ".dat");
        write_field(stats[i].rho_var, outdir + "/rho_var" + tag + ".dat");
        write_field(stats[i].u_mean, outdir + "/u_mean" + tag + ".dat");
        write_field(stats[i].u_var, outdir + "/u_var" + tag + ".dat");
    }
    {
        auto out = detail::open_out(outdir + "/nodes.csv");
        out << "node,measure,rho_Linf,u_Linf\n";
        for (int m = 0; m < sol.node_count(); ++m) {
            const EnergyLedger& led = sol.node_solves[static_cast<std::size_t>(m)].ledger;
            out << m << ',' << detail::fmt_full(sol.partition.measure(m)) << ','
                << detail::fmt_full(led.max_rho_linf()) << ',' << detail::fmt_full(led.max_u_linf())
                << "\n";
        }
    }

    const double lambda = boundedness_statistic(sol);
    os << "ensemble: " << sol.node_count() << " nodes, mesh " << cfg.mesh.cells << "^"
       << cfg.mesh.dim << ", t_final = " << cfg.run.t_final << "\n";
    os << "  Lambda (measure-weighted L^inf statistic) = " << lambda << "\n";
    double worst = 0.0;
    int worst_node = 0;
    for (int m = 0; m < sol.node_count(); ++m) {
        const EnergyLedger& led = sol.node_solves[static_cast<std::size_t>(m)].ledger;
        const double v = led.max_rho_linf() + led.max_u_linf();
        if (v > worst) {
            worst = v;
            worst_node = m;
        }
    }
    os << "  largest per-node L^inf sum = " << worst << " at node " << worst_node
       << " (full table in nodes.csv)\n";
    os << "  outputs in " << outdir << "\n";
    return 0;
}

inline int cmd_study(const RunConfig& cfg, int levels, const std::string& outdir, std::ostream& os) {
    StudyResult study = run_study(cfg, levels, &os);
    write_study_csv(study, outdir + "/study.csv");
    os << "level   h         diam      data_rho    e1          e2          Lambda      cauchy_rho  cauchy_u\n";
    for (const StudyLevelResult& r : study.levels) {
        os << std::setw(3) << r.level << "  " << std::scientific << std::setprecision(3) << r.h
           << "  " << r.diam << "  " << r.data_err.rho_lgamma << "  " << r.e1_mean << "  "
           << r.e2_mean << "  " << r.lambda << "  " << r.cauchy_rho << "  " << r.cauchy_u << "\n";
        os.unsetf(std::ios::scientific);
    }
    os << "study table written to " << outdir << "/study.csv\n";
    return 0;
}

} // namespace scfv
