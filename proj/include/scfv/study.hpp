#pragma once

#include <cmath>
#include <ostream>
#include <vector>

#include "scfv/config.hpp"
#include "scfv/consistency.hpp"
#include "scfv/ensemble.hpp"
#include "scfv/io.hpp"

namespace scfv {

/// One refinement level of the joint (mesh, partition) ladder.
struct StudyLevelSpec {
    int mesh_cells = 0;
    int cells_per_axis = 0;
};

struct StudyConfig {
    std::vector<StudyLevelSpec> levels;
};

/// Dyadic ladder starting from the base configuration: both the mesh and the
/// partition refine by 2 per level.
inline StudyConfig make_study_config(const RunConfig& base, int n_levels) {
    if (n_levels < 2) throw ConfigError("study: need at least 2 levels");
    StudyConfig sc;
    int cells = base.mesh.cells;
    int cpa = base.colloc.cells_per_axis;
    for (int l = 0; l < n_levels; ++l) {
        sc.levels.push_back({cells, cpa});
        cells *= 2;
        cpa *= 2;
    }
    // h and diam must strictly decrease along the ladder
    for (std::size_t l = 1; l < sc.levels.size(); ++l) {
        if (!(sc.levels[l].mesh_cells > sc.levels[l - 1].mesh_cells) ||
            !(sc.levels[l].cells_per_axis > sc.levels[l - 1].cells_per_axis))
            throw ConfigError("study: levels must strictly refine h and the partition diameter");
    }
    return sc;
}

/// Per-level diagnostics of the refinement study. Cauchy columns refer to
/// the pair (level, level+1) and are NaN on the last level.
struct StudyLevelResult {
    int level = 0;
    int mesh_cells = 0;
    double h = 0.0;
    int cells_per_axis = 0;
    int nu = 0;
    double diam = 0.0;
    DataInterpError data_err;
    double e1_mean = 0.0;
    double e2_mean = 0.0;
    double lambda = 0.0;
    double cauchy_rho = std::numeric_limits<double>::quiet_NaN();
    double cauchy_u = std::numeric_limits<double>::quiet_NaN();
};

struct StudyResult {
    std::vector<StudyLevelResult> levels;
};

namespace detail {

/// Constant prolongation of a coarse step function onto a finer mesh.
inline std::vector<int> coarse_cell_of_fine(const TorusMesh& fine, const TorusMesh& coarse) {
    std::vector<int> map(static_cast<std::size_t>(fine.cell_count()));
    const int ratio = fine.cells_per_dim() / coarse.cells_per_dim();
    for (int c = 0; c < fine.cell_count(); ++c) {
        auto fc = fine.cell_coords(c);
        std::array<int, 3> cc{0, 0, 0};
        for (int a = 0; a < fine.dim(); ++a) cc[a] = fc[a] / ratio;
        map[static_cast<std::size_t>(c)] = coarse.cell_index(cc);
    }
    return map;
}

/// Expectation-weighted space-time Cauchy differences between two levels:
/// coarse boxes carry the weights, the fine node is the one whose box
/// contains the coarse node, coarse fields are prolonged by constant
/// injection. Returns (||rho_c - rho_f||_{L^gamma}, ||u_c - u_f||_{L^2})
/// in the E-weighted sense.
inline std::pair<double, double> cauchy_pair(const CollocationSolution& coarse,
                                             const CollocationSolution& fine, double gamma) {
    const TorusMesh& mc = *coarse.mesh;
    const TorusMesh& mf = *fine.mesh;
    const int d = mf.dim();
    const auto cmap = coarse_cell_of_fine(mf, mc);

    const double dt_f = fine.node_solves.front().traj.dt;
    const double dt_c = coarse.node_solves.front().traj.dt;
    const int n_slabs_f = fine.node_solves.front().traj.step_count();

    double sum_rho = 0.0;
    double sum_u = 0.0;
    for (int m = 0; m < coarse.partition.nu(); ++m) {
        const int mf_idx = fine.partition.locate(coarse.nodes.points[static_cast<std::size_t>(m)]);
        const Trajectory& tc = coarse.node_solves[static_cast<std::size_t>(m)].traj;
        const Trajectory& tf = fine.node_solves[static_cast<std::size_t>(mf_idx)].traj;
        double acc_rho = 0.0;
        double acc_u = 0.0;
        for (int j = 0; j < n_slabs_f; ++j) {
            const double t_mid = (j + 0.5) * dt_f;
            const FluidState& sf = tf.states[static_cast<std::size_t>(j)];
            const int jc = std::min(static_cast<int>(t_mid / dt_c), tc.step_count() - 1);
            const FluidState& sc = tc.states[static_cast<std::size_t>(jc)];
            double cell_rho = 0.0;
            double cell_u = 0.0;
            for (int c = 0; c < mf.cell_count(); ++c) {
                const int cc = cmap[static_cast<std::size_t>(c)];
                cell_rho += std::pow(std::abs(sc.rho[cc] - sf.rho[c]), gamma);
                double du_sq = 0.0;
                for (int a = 0; a < d; ++a) {
                    const double uc = sc.mom.at(cc, a) / sc.rho[cc];
                    const double uf = sf.mom.at(c, a) / sf.rho[c];
                    du_sq += (uc - uf) * (uc - uf);
                }
                cell_u += du_sq;
            }
            acc_rho += dt_f * mf.cell_volume() * cell_rho;
            acc_u += dt_f * mf.cell_volume() * cell_u;
        }
        sum_rho += coarse.partition.measure(m) * std::pow(acc_rho, 1.0 / gamma);
        sum_u += coarse.partition.measure(m) * std::sqrt(acc_u);
    }
    return {sum_rho, sum_u};
}

} // namespace detail

/// Run the refinement ladder: per level, the data-interpolation errors, the
/// expectation-weighted consistency residuals, the boundedness statistic,
/// and Cauchy differences between consecutive levels.
inline StudyResult run_study(const RunConfig& base, int n_levels, std::ostream* log = nullptr) {
    const StudyConfig sc = make_study_config(base, n_levels);
    const GasParams gas = base.make_gas();

    StudyResult result;
    std::vector<CollocationSolution> solutions;
    std::vector<TorusMesh> meshes;
    meshes.reserve(sc.levels.size());

    for (std::size_t l = 0; l < sc.levels.size(); ++l) {
        const StudyLevelSpec& spec = sc.levels[l];
        meshes.emplace_back(base.mesh.dim, spec.mesh_cells, base.mesh.length);
        const TorusMesh& mesh = meshes.back();
        if (log) *log << "level " << l << ": mesh " << spec.mesh_cells << "^" << base.mesh.dim
                      << ", partition " << spec.cells_per_axis << "^" << base.data.param_dim << "\n";

        ProbabilityBox space = make_probability_box(base.data.param_dim);
        Partition part = build_partition(space, spec.cells_per_axis);
        NodeSet nodes = choose_nodes(part, parse_node_rule(base.colloc.rule), base.colloc.seed);
        SchemeParams params = base.make_scheme(mesh);

        StudyLevelResult row;
        row.level = static_cast<int>(l);
        row.mesh_cells = spec.mesh_cells;
        row.h = mesh.h();
        row.cells_per_axis = spec.cells_per_axis;
        row.nu = part.nu();
        row.diam = part.diam();
        row.data_err = data_interpolation_error(base.data, part, nodes, mesh, gas,
                                                base.colloc.omega_refine, base.scheme.quad_pts);

        CollocationSolution sol = run_collocation(base.data, part, nodes, mesh, params, gas,
                                                  base.run.t_final, base.colloc.workers,
                                                  base.scheme.quad_pts);
        row.lambda = boundedness_statistic(sol);

        const double t_end = sol.node_solves.front().traj.final_time();
        ScalarTestFn phi = default_scalar_test(t_end, base.mesh.length, base.mesh.dim);
        VectorTestFn bphi = default_vector_test(t_end, base.mesh.length, base.mesh.dim);
        double e1w = 0.0, e2w = 0.0;
        for (int m = 0; m < sol.node_count(); ++m) {
            const auto& ns = sol.node_solves[static_cast<std::size_t>(m)];
            ConsistencyReport rep = consistency_residual(ns.traj, phi, bphi, gas, ns.visc,
                                                         base.scheme.quad_pts);
            e1w += part.measure(m) * std::abs(rep.e1);
            e2w += part.measure(m) * std::abs(rep.e2);
        }
        row.e1_mean = e1w;
        row.e2_mean = e2w;

        result.levels.push_back(row);
        solutions.push_back(std::move(sol));
    }

    for (std::size_t l = 0; l + 1 < solutions.size(); ++l) {
        auto [crho, cu] = detail::cauchy_pair(solutions[l], solutions[l + 1], gas.gamma);
        result.levels[l].cauchy_rho = crho;
        result.levels[l].cauchy_u = cu;
    }
    return result;
}

inline void write_study_csv(const StudyResult& study, const std::string& path) {
    auto out = detail::open_out(path);
    out << "level,mesh_cells,h,cells_per_axis,nu,diam,"
           "data_err_rho,data_err_mom,data_err_energy,mu_err,eta_err,"
           "e1,e2,Lambda,cauchy_rho,cauchy_u\n";
    for (const StudyLevelResult& r : study.levels) {
        out << r.level << ',' << r.mesh_cells << ',' << detail::fmt_full(r.h) << ','
            << r.cells_per_axis << ',' << r.nu << ',' << detail::fmt_full(r.diam) << ','
            << detail::fmt_full(r.data_err.rho_lgamma) << ',' << detail::fmt_full(r.data_err.mom_l2g)
            << ',' << detail::fmt_full(r.data_err.energy_gap) << ','
            << detail::fmt_full(r.data_err.mu_l1) << ',' << detail::fmt_full(r.data_err.eta_l1) << ','
            << detail::fmt_full(r.e1_mean) << ',' << detail::fmt_full(r.e2_mean) << ','
            << detail::fmt_full(r.lambda) << ',' << detail::fmt_full(r.cauchy_rho) << ','
            << detail::fmt_full(r.cauchy_u) << "\n";
    }
    if (!out) throw IoError("io: write failed for '" + path + "'");
}

} // namespace scfv
