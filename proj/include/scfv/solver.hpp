#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "scfv/constitutive.hpp"
#include "scfv/flux.hpp"
#include "scfv/operators.hpp"

namespace scfv {

/// Density/momentum pair at one discrete time level. Density must stay
/// strictly positive in every cell; velocity is recovered cellwise as
/// mom / rho.
struct FluidState {
    GridField rho;
    VecGridField mom;
    double time = 0.0;

    VecGridField velocity() const {
        const TorusMesh& m = *rho.mesh;
        VecGridField u(m);
        for (int c = 0; c < m.cell_count(); ++c)
            for (int a = 0; a < m.dim(); ++a) u.at(c, a) = mom.at(c, a) / rho[c];
        return u;
    }
};

struct SchemeParams {
    double dt = 0.0;
    double cfl = 0.1;
    FluxParams flux;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double tol_energy_rel = 1e-8;
};

inline SchemeParams make_scheme_params(const TorusMesh& mesh, double cfl = 0.1, double eps = 1.0,
                                       double picard_tol = 1e-10, int picard_max_iter = 50,
                                       double tol_energy_rel = 1e-8) {
    if (!(cfl > 0.0)) throw ConfigError("scheme: cfl must be > 0");
    if (!(picard_tol > 0.0)) throw ConfigError("scheme: picard_tol must be > 0");
    if (picard_max_iter < 1) throw ConfigError("scheme: picard_max_iter must be >= 1");
    SchemeParams p;
    p.cfl = cfl;
    p.dt = cfl * mesh.h();
    p.flux = make_flux_params(eps, mesh.h());
    p.picard_tol = picard_tol;
    p.picard_max_iter = picard_max_iter;
    p.tol_energy_rel = tol_energy_rel;
    return p;
}

/// Per-step diagnostics: total energy, mass, the viscous dissipation
/// increment dt (mu |grad_D u|^2 + lambda |div_h u|^2), the numerical
/// dissipation residual, and L-infinity norms of (rho, u).
struct LedgerRow {
    double time = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double visc_increment = 0.0;
    double visc_cumulative = 0.0;
    double num_dissipation = 0.0;
    double rho_linf = 0.0;
    double u_linf = 0.0;
    int picard_iters = 0;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;
    double tol_energy_abs = 0.0;

    double initial_energy() const { return rows.empty() ? 0.0 : rows.front().energy; }

    double max_mass_drift_rel() const {
        if (rows.empty()) return 0.0;
        const double m0 = rows.front().mass;
        double drift = 0.0;
        for (const auto& r : rows) drift = std::max(drift, std::abs(r.mass - m0) / std::abs(m0));
        return drift;
    }

    double min_dissipation() const {
        if (rows.size() < 2) return 0.0;
        double mn = rows[1].num_dissipation;
        for (std::size_t k = 2; k < rows.size(); ++k)
            mn = std::min(mn, rows[k].num_dissipation);
        return mn;
    }

    /// Worst violation of E_k + cumulative viscous <= E_0 (positive value
    /// means the inequality is broken by that amount).
    double energy_inequality_defect() const {
        if (rows.empty()) return 0.0;
        const double e0 = rows.front().energy;
        double defect = -std::numeric_limits<double>::infinity();
        for (const auto& r : rows)
            defect = std::max(defect, r.energy + r.visc_cumulative - e0);
        return defect;
    }

    double max_rho_linf() const {
        double mx = 0.0;
        for (const auto& r : rows) mx = std::max(mx, r.rho_linf);
        return mx;
    }

    double max_u_linf() const {
        double mx = 0.0;
        for (const auto& r : rows) mx = std::max(mx, r.u_linf);
        return mx;
    }
};

/// Discrete trajectory: states at t_k = k dt, interpreted as a piecewise
/// constant function of time on slabs [k dt, (k+1) dt).
struct Trajectory {
    std::vector<FluidState> states;
    double dt = 0.0;

    int step_count() const { return static_cast<int>(states.size()) - 1; }
    double final_time() const { return states.empty() ? 0.0 : states.back().time; }

    /// Index of the slab containing time t (clamped to the last state).
    int slab_index(double t) const {
        if (t <= 0.0) return 0;
        int k = static_cast<int>(std::floor(t / dt + 1e-12));
        return std::min(k, step_count());
    }

    const FluidState& at_time(double t) const { return states[static_cast<std::size_t>(slab_index(t))]; }
};

/// Project initial data onto the mesh. Throws if any projected density cell
/// is nonpositive (inadmissible data).
inline FluidState init_state(const ScalarFn& rho0, const VectorFn& m0, const TorusMesh& mesh,
                             int quad_pts = 3) {
    FluidState s;
    s.rho = project(rho0, mesh, quad_pts);
    s.mom = project_vec(m0, mesh, quad_pts);
    s.time = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c)
        if (!(s.rho[c] > 0.0))
            throw SolverError("init_state: projected density nonpositive in cell " + std::to_string(c) +
                              " (admissibility violation: initial density must be uniformly positive)");
    return s;
}

namespace detail {

/// Residual of the implicit system evaluated at a candidate new state equal
/// to the previous one (time-derivative terms drop). Exact zeros identify
/// states that are fixed points of the scheme.
inline double steady_residual_max(const FluidState& s, const SchemeParams& params,
                                  const Viscosity& visc, const GasParams& gas) {
    const TorusMesh& mesh = *s.rho.mesh;
    const int d = mesh.dim();
    const double area = mesh.face_area();
    const double vol = mesh.cell_volume();
    const double lam = visc.lambda(d);

    VecGridField u = s.velocity();
    GridField res_rho(mesh);
    VecGridField res_mom(mesh);

    GridField p(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c) p[c] = pressure(s.rho[c], gas);

    for (const Face& f : mesh.faces()) {
        const double vn = face_avg_normal(u, f);
        const double frho = area * diss_flux_vn(s.rho[f.inward], s.rho[f.outward], vn, params.flux);
        res_rho[f.inward] += frho;
        res_rho[f.outward] -= frho;
        const double pavg = area * face_avg(p, f);
        res_mom.at(f.inward, f.axis) += pavg;
        res_mom.at(f.outward, f.axis) -= pavg;
        for (int a = 0; a < d; ++a) {
            const double fm = area * diss_flux_vn(s.mom.at(f.inward, a), s.mom.at(f.outward, a), vn,
                                                  params.flux);
            res_mom.at(f.inward, a) += fm;
            res_mom.at(f.outward, a) -= fm;
        }
    }

    // viscous terms: mu |K| laplace_h(u_a) + lambda |K| grad_h(div_h u)_a
    GridField divu = div_h(u);
    VecGridField gdiv = grad_h(divu);
    for (int a = 0; a < d; ++a) {
        GridField ua(mesh);
        for (int c = 0; c < mesh.cell_count(); ++c) ua[c] = u.at(c, a);
        GridField lap = laplace_h(ua);
        for (int c = 0; c < mesh.cell_count(); ++c)
            res_mom.at(c, a) -= vol * (visc.mu * lap[c] + lam * gdiv.at(c, a));
    }

    double mx = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        mx = std::max(mx, std::abs(res_rho[c]));
        for (int a = 0; a < d; ++a) mx = std::max(mx, std::abs(res_mom.at(c, a)));
    }
    return mx;
}

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline Eigen::VectorXd sparse_solve(const SpMat& A, const Eigen::VectorXd& b,
                                    const std::string& what) {
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("step: " + what + " system factorization failed");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("step: " + what + " system solve failed");
    return x;
}

} // namespace detail

struct StepStats {
    int picard_iters = 0;
    bool exact_steady = false;
};

/// One backward-Euler step of the FV scheme. The nonlinear system is solved
/// by Picard iteration: the advecting velocity and the pressure coefficient
/// are frozen at the current iterate, the resulting linear transport systems
/// for density and momentum are solved exactly, and the loop stops when the
/// max-norm increment of (rho, m) falls below picard_tol.
inline FluidState step(const FluidState& state, const SchemeParams& params, const Viscosity& visc,
                       const GasParams& gas, StepStats* stats = nullptr) {
    const TorusMesh& mesh = *state.rho.mesh;
    const int d = mesh.dim();
    const int nc = mesh.cell_count();
    const double area = mesh.face_area();
    const double vol = mesh.cell_volume();
    const double dt = params.dt;
    const double lam = visc.lambda(d);

    if (detail::steady_residual_max(state, params, visc, gas) == 0.0) {
        FluidState next = state;
        next.time = state.time + dt;
        if (stats) {
            stats->picard_iters = 0;
            stats->exact_steady = true;
        }
        return next;
    }

    GridField rho = state.rho;
    VecGridField u = state.velocity();
    VecGridField mom = state.mom;

    bool converged = false;
    int iter = 0;
    for (; iter < params.picard_max_iter; ++iter) {
        // --- density sweep: linear upwind transport with frozen velocity ---
        std::vector<detail::Triplet> trips;
        trips.reserve(static_cast<std::size_t>(nc) * (2 * d + 1));
        Eigen::VectorXd b(nc);
        for (int c = 0; c < nc; ++c) {
            trips.emplace_back(c, c, vol / dt);
            b[c] = vol / dt * state.rho[c];
        }
        for (const Face& f : mesh.faces()) {
            const double vn = face_avg_normal(u, f);
            const double cdiff = params.flux.h_eps + 0.5 * std::abs(vn);
            const double alpha = area * (0.5 * vn + cdiff);
            const double beta = area * (0.5 * vn - cdiff);
            trips.emplace_back(f.inward, f.inward, alpha);
            trips.emplace_back(f.inward, f.outward, beta);
            trips.emplace_back(f.outward, f.inward, -alpha);
            trips.emplace_back(f.outward, f.outward, -beta);
        }
        detail::SpMat A(nc, nc);
        A.setFromTriplets(trips.begin(), trips.end());
        Eigen::VectorXd rho_new_v = detail::sparse_solve(A, b, "density");

        GridField rho_new(mesh);
        for (int c = 0; c < nc; ++c) rho_new[c] = rho_new_v[c];
        for (int c = 0; c < nc; ++c)
            if (!(rho_new[c] > 0.0))
                throw SolverError("step: density positivity lost in cell " + std::to_string(c) +
                                  " during Picard iteration (try a smaller time step)");

        // --- momentum sweep: unknown velocity, frozen advecting velocity ---
        GridField p(mesh);
        for (int c = 0; c < nc; ++c) p[c] = pressure(rho_new[c], gas);
        VecGridField gp = grad_h(p);

        const int nu = nc * d;
        auto uidx = [d](int cell, int comp) { return cell * d + comp; };
        std::vector<detail::Triplet> mtrips;
        mtrips.reserve(static_cast<std::size_t>(nu) * (2 * d + 4 * d + 1));
        Eigen::VectorXd mb(nu);
        for (int c = 0; c < nc; ++c) {
            for (int a = 0; a < d; ++a) {
                mtrips.emplace_back(uidx(c, a), uidx(c, a), vol / dt * rho_new[c]);
                mb[uidx(c, a)] = vol / dt * state.mom.at(c, a) - vol * gp.at(c, a);
            }
        }
        const double wmu = visc.mu * vol / (mesh.h() * mesh.h());
        for (const Face& f : mesh.faces()) {
            const double vn = face_avg_normal(u, f);
            const double cdiff = params.flux.h_eps + 0.5 * std::abs(vn);
            const double alpha = area * (0.5 * vn + cdiff);
            const double beta = area * (0.5 * vn - cdiff);
            for (int a = 0; a < d; ++a) {
                const double ain = alpha * rho_new[f.inward];
                const double aout = beta * rho_new[f.outward];
                mtrips.emplace_back(uidx(f.inward, a), uidx(f.inward, a), ain);
                mtrips.emplace_back(uidx(f.inward, a), uidx(f.outward, a), aout);
                mtrips.emplace_back(uidx(f.outward, a), uidx(f.inward, a), -ain);
                mtrips.emplace_back(uidx(f.outward, a), uidx(f.outward, a), -aout);
                // -mu |K| laplace_h(u_a), assembled per face
                mtrips.emplace_back(uidx(f.inward, a), uidx(f.inward, a), wmu);
                mtrips.emplace_back(uidx(f.inward, a), uidx(f.outward, a), -wmu);
                mtrips.emplace_back(uidx(f.outward, a), uidx(f.outward, a), wmu);
                mtrips.emplace_back(uidx(f.outward, a), uidx(f.inward, a), -wmu);
            }
        }
        // -lambda |K| grad_h(div_h u): 4-point cross stencil per axis pair
        const double wlam = lam * vol / (4.0 * mesh.h() * mesh.h());
        for (int c = 0; c < nc; ++c) {
            for (int a = 0; a < d; ++a) {
                const int cpa = mesh.neighbor(c, a, +1);
                const int cma = mesh.neighbor(c, a, -1);
                for (int bax = 0; bax < d; ++bax) {
                    mtrips.emplace_back(uidx(c, a), uidx(mesh.neighbor(cpa, bax, +1), bax), -wlam);
                    mtrips.emplace_back(uidx(c, a), uidx(mesh.neighbor(cpa, bax, -1), bax), wlam);
                    mtrips.emplace_back(uidx(c, a), uidx(mesh.neighbor(cma, bax, +1), bax), wlam);
                    mtrips.emplace_back(uidx(c, a), uidx(mesh.neighbor(cma, bax, -1), bax), -wlam);
                }
            }
        }
        detail::SpMat M(nu, nu);
        M.setFromTriplets(mtrips.begin(), mtrips.end());
        Eigen::VectorXd u_new_v = detail::sparse_solve(M, mb, "momentum");

        VecGridField u_new(mesh);
        VecGridField mom_new(mesh);
        for (int c = 0; c < nc; ++c) {
            for (int a = 0; a < d; ++a) {
                u_new.at(c, a) = u_new_v[uidx(c, a)];
                mom_new.at(c, a) = rho_new[c] * u_new.at(c, a);
            }
        }

        double incr = 0.0;
        for (int c = 0; c < nc; ++c) {
            incr = std::max(incr, std::abs(rho_new[c] - rho[c]));
            for (int a = 0; a < d; ++a)
                incr = std::max(incr, std::abs(mom_new.at(c, a) - mom.at(c, a)));
        }
        rho = std::move(rho_new);
        u = std::move(u_new);
        mom = std::move(mom_new);
        if (incr <= params.picard_tol) {
            converged = true;
            ++iter;
            break;
        }
    }

    if (!converged)
        throw SolverError("step: Picard iteration did not reach tol " +
                          std::to_string(params.picard_tol) + " within " +
                          std::to_string(params.picard_max_iter) +
                          " iterations (try a smaller time step)");

    for (int c = 0; c < nc; ++c)
        if (!(rho[c] > 0.0))
            throw SolverError("step: converged state has nonpositive density in cell " +
                              std::to_string(c));

    FluidState next;
    next.rho = std::move(rho);
    next.mom = std::move(mom);
    next.time = state.time + dt;
    if (stats) {
        stats->picard_iters = iter;
        stats->exact_steady = false;
    }
    return next;
}

/// Viscous dissipation rate of a state: mu |grad_D u|^2 + lambda |div_h u|^2
/// with the face seminorm weight |sigma| h.
inline double viscous_rate(const FluidState& s, const Viscosity& visc) {
    VecGridField u = s.velocity();
    GridField divu = div_h(u);
    const double gsq = grad_D_seminorm_sq(grad_D(u));
    const double dsq = l2_inner(divu, divu);
    return visc.mu * gsq + visc.lambda(s.rho.mesh->dim()) * dsq;
}

/// Energy-balance residual of one step: E(prev) - E(next) minus the viscous
/// dissipation increment of the new state. Nonnegative (up to tolerance) for
/// a valid scheme.
inline double numerical_dissipation(const FluidState& prev, const FluidState& next,
                                    const SchemeParams& params, const Viscosity& visc,
                                    const GasParams& gas) {
    const double e_prev = total_energy(prev.rho, prev.mom, gas);
    const double e_next = total_energy(next.rho, next.mom, gas);
    return e_prev - e_next - params.dt * viscous_rate(next, visc);
}

namespace detail {

inline LedgerRow make_row(const FluidState& s, const GasParams& gas) {
    LedgerRow r;
    r.time = s.time;
    r.energy = total_energy(s.rho, s.mom, gas);
    r.mass = integral(s.rho);
    r.rho_linf = lp_norm(s.rho, inf_p);
    r.u_linf = lp_norm(s.velocity(), inf_p);
    return r;
}

} // namespace detail

/// Advance from state0 to T_final with N_T = ceil(T_final / dt) steps,
/// recording the diagnostics ledger. Throws SolverError with the step index
/// on failure.
inline std::pair<Trajectory, EnergyLedger> run(const FluidState& state0, double t_final,
                                               const SchemeParams& params, const Viscosity& visc,
                                               const GasParams& gas) {
    if (!(t_final > 0.0)) throw ConfigError("run: T_final must be > 0");
    const int n_steps = static_cast<int>(std::ceil(t_final / params.dt - 1e-9));

    Trajectory traj;
    traj.dt = params.dt;
    traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.states.push_back(state0);

    EnergyLedger ledger;
    ledger.rows.reserve(static_cast<std::size_t>(n_steps) + 1);
    ledger.rows.push_back(detail::make_row(state0, gas));
    ledger.tol_energy_abs = params.tol_energy_rel * ledger.rows.front().energy;

    for (int k = 1; k <= n_steps; ++k) {
        StepStats stats;
        FluidState next;
        try {
            next = step(traj.states.back(), params, visc, gas, &stats);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " [at step " + std::to_string(k) + "]", k);
        }
        next.time = k * params.dt;

        LedgerRow row = detail::make_row(next, gas);
        row.picard_iters = stats.picard_iters;
        row.visc_increment = params.dt * viscous_rate(next, visc);
        row.visc_cumulative = ledger.rows.back().visc_cumulative + row.visc_increment;
        row.num_dissipation = ledger.rows.back().energy - row.energy - row.visc_increment;
        ledger.rows.push_back(row);
        traj.states.push_back(std::move(next));
    }
    return {std::move(traj), std::move(ledger)};
}

} // namespace scfv
