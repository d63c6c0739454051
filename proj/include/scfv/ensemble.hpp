#pragma once

#include <algorithm>
#include <atomic>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "scfv/random_data.hpp"
#include "scfv/solver.hpp"

namespace scfv {

struct NodeSolve {
    Trajectory traj;
    EnergyLedger ledger;
    Viscosity visc;
};

/// Approximate statistical solution: the family of deterministic FV solves
/// at the collocation nodes, evaluated as a piecewise constant function of
/// the random parameter.
struct CollocationSolution {
    Partition partition;
    NodeSet nodes;
    const TorusMesh* mesh = nullptr;
    GasParams gas;
    double t_final = 0.0;
    std::vector<NodeSolve> node_solves;

    int node_count() const { return static_cast<int>(node_solves.size()); }

    const FluidState& state_at(int node, double t) const {
        return node_solves[static_cast<std::size_t>(node)].traj.at_time(t);
    }

    double eval_rho(double t, const Vec3& x, const OmegaPoint& w) const {
        const FluidState& s = state_at(partition.locate(w), t);
        return eval_step(s.rho, x);
    }

    Vec3 eval_u(double t, const Vec3& x, const OmegaPoint& w) const {
        const FluidState& s = state_at(partition.locate(w), t);
        const TorusMesh& m = *s.rho.mesh;
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < m.dim(); ++a) {
            double q = x[a] / m.length();
            q -= std::floor(q);
            c[a] = std::min(static_cast<int>(q * m.cells_per_dim()), m.cells_per_dim() - 1);
        }
        const int cell = m.cell_index(c);
        Vec3 u = zero_vec();
        for (int a = 0; a < m.dim(); ++a) u[a] = s.mom.at(cell, a) / s.rho[cell];
        return u;
    }
};

/// Deterministic FV solves at every collocation node, one shared mesh size.
/// Node solves are independent; `workers` threads may run them concurrently,
/// results are always collected in node order, so output is bit-identical
/// for any worker count. Fails fast with the lowest failing node index.
inline CollocationSolution run_collocation(const RandomDataModel& model, const Partition& p,
                                           const NodeSet& nodes, const TorusMesh& mesh,
                                           const SchemeParams& params, const GasParams& gas,
                                           double t_final, int workers = 1, int quad_pts = 3) {
    {
        auto violations = validate_model(model);
        if (!violations.empty()) throw ConfigError(violations);
    }
    const int nu = p.nu();
    std::vector<std::optional<NodeSolve>> slots(static_cast<std::size_t>(nu));
    std::vector<std::pair<int, std::string>> failures; // node index + cause
    std::mutex failures_mtx;

    auto solve_node = [&](int m) {
        const OmegaPoint& w = nodes.points[static_cast<std::size_t>(m)];
        NodeSolve ns;
        ns.visc = model.viscosity_at(w);
        FluidState s0 = init_state(model.rho0_at(w), model.m0_at(w), mesh, quad_pts);
        auto [traj, ledger] = run(s0, t_final, params, ns.visc, gas);
        ns.traj = std::move(traj);
        ns.ledger = std::move(ledger);
        slots[static_cast<std::size_t>(m)] = std::move(ns);
    };

    workers = std::max(1, workers);
    if (workers == 1) {
        for (int m = 0; m < nu; ++m) {
            try {
                solve_node(m);
            } catch (const std::exception& e) {
                throw EnsembleError("node " + std::to_string(m) + " solve failed: " + e.what(), m, m);
            }
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    int m = next.fetch_add(1);
                    if (m >= nu) return;
                    try {
                        solve_node(m);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(failures_mtx);
                        failures.emplace_back(m, e.what());
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (!failures.empty()) {
            auto worst = *std::min_element(failures.begin(), failures.end());
            int completed = 0;
            for (const auto& s : slots)
                if (s.has_value()) ++completed;
            throw EnsembleError("node " + std::to_string(worst.first) + " solve failed: " + worst.second,
                                worst.first, completed);
        }
    }

    CollocationSolution sol{p, nodes, &mesh, gas, t_final, {}};
    sol.node_solves.reserve(static_cast<std::size_t>(nu));
    for (int m = 0; m < nu; ++m) sol.node_solves.push_back(std::move(*slots[static_cast<std::size_t>(m)]));
    return sol;
}

/// Measure-weighted sum of per-node space-time L^infinity norms of density
/// and velocity; the computable proxy for boundedness in probability.
inline double boundedness_statistic(const CollocationSolution& sol) {
    double sum = 0.0;
    for (int m = 0; m < sol.node_count(); ++m) {
        const EnergyLedger& led = sol.node_solves[static_cast<std::size_t>(m)].ledger;
        sum += sol.partition.measure(m) * (led.max_rho_linf() + led.max_u_linf());
    }
    return sum;
}

/// Cellwise mean/variance fields of rho and u at one time, plus moments of
/// the total energy. Variances are clamped at zero; the largest clamped
/// magnitude is reported.
struct EnsembleStats {
    double time = 0.0;
    GridField rho_mean, rho_var;
    VecGridField u_mean, u_var;
    double energy_mean = 0.0;
    double energy_var = 0.0;
    double variance_clamp = 0.0;
};

inline std::vector<EnsembleStats> field_statistics(const CollocationSolution& sol,
                                                   const std::vector<double>& times) {
    const TorusMesh& mesh = *sol.mesh;
    const int d = mesh.dim();
    std::vector<EnsembleStats> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0 || t > sol.t_final + 1e-12)
            throw ConfigError("field_statistics: requested time " + std::to_string(t) +
                              " outside [0, T_final]");
        EnsembleStats st;
        st.time = t;
        st.rho_mean = GridField(mesh);
        st.rho_var = GridField(mesh);
        st.u_mean = VecGridField(mesh);
        st.u_var = VecGridField(mesh);
        GridField rho_sq(mesh);
        VecGridField u_sq(mesh);
        double e_sum = 0.0, e_sq = 0.0;
        for (int m = 0; m < sol.node_count(); ++m) {
            const double w = sol.partition.measure(m);
            const NodeSolve& ns = sol.node_solves[static_cast<std::size_t>(m)];
            const int slab = ns.traj.slab_index(t);
            const FluidState& s = ns.traj.states[static_cast<std::size_t>(slab)];
            const double e = ns.ledger.rows[static_cast<std::size_t>(slab)].energy;
            e_sum += w * e;
            e_sq += w * e * e;
            for (int c = 0; c < mesh.cell_count(); ++c) {
                st.rho_mean[c] += w * s.rho[c];
                rho_sq[c] += w * s.rho[c] * s.rho[c];
                for (int a = 0; a < d; ++a) {
                    const double ua = s.mom.at(c, a) / s.rho[c];
                    st.u_mean.at(c, a) += w * ua;
                    u_sq.at(c, a) += w * ua * ua;
                }
            }
        }
        double clamp = 0.0;
        auto clamped_var = [&clamp](double sq, double mean) {
            double v = sq - mean * mean;
            if (v < 0.0) {
                clamp = std::max(clamp, -v);
                v = 0.0;
            }
            return v;
        };
        for (int c = 0; c < mesh.cell_count(); ++c) {
            st.rho_var[c] = clamped_var(rho_sq[c], st.rho_mean[c]);
            for (int a = 0; a < d; ++a)
                st.u_var.at(c, a) = clamped_var(u_sq.at(c, a), st.u_mean.at(c, a));
        }
        st.energy_mean = e_sum;
        st.energy_var = clamped_var(e_sq, e_sum);
        st.variance_clamp = clamp;
        out.push_back(std::move(st));
    }
    return out;
}

/// Interpolation errors of the random data itself (no PDE solve): expected
/// spatial norms of the data defect, the expected-energy gap, and the
/// viscosity interpolation errors.
struct DataInterpError {
    double rho_lgamma = 0.0;   // E || rho0^M - rho0 ||_{L^gamma}
    double mom_l2g = 0.0;      // E || m0^M - m0 ||_{L^{2 gamma/(gamma+1)}}
    double energy_gap = 0.0;   // | E int E(data^M) - E int E(data) |
    double mu_l1 = 0.0;        // E | mu^M - mu |
    double eta_l1 = 0.0;       // E | eta^M - eta |
    OmegaEstimator method = OmegaEstimator::quadrature;
};

namespace detail {

/// Spatial L^p norm of the difference between the data fields at two
/// parameter points, by cellwise Gauss quadrature.
inline double data_diff_norm_rho(const RandomDataModel& model, const TorusMesh& mesh,
                                 const OmegaPoint& wa, const OmegaPoint& wb, double p,
                                 int quad_pts) {
    double sum = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        cell_quad_visit(mesh, c, quad_pts, [&](const Vec3& x, double w) {
            const double va = model.rho0.eval(x, wa, model.space_dim, model.domain_length);
            const double vb = model.rho0.eval(x, wb, model.space_dim, model.domain_length);
            sum += w * std::pow(std::abs(va - vb), p);
        });
    }
    return std::pow(sum, 1.0 / p);
}

inline double data_diff_norm_mom(const RandomDataModel& model, const TorusMesh& mesh,
                                 const OmegaPoint& wa, const OmegaPoint& wb, double p,
                                 int quad_pts) {
    double sum = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        cell_quad_visit(mesh, c, quad_pts, [&](const Vec3& x, double w) {
            const Vec3 va = model.m0_eval(x, wa);
            const Vec3 vb = model.m0_eval(x, wb);
            sum += w * std::pow(norm2(va - vb), p);
        });
    }
    return std::pow(sum, 1.0 / p);
}

inline double data_energy_integral(const RandomDataModel& model, const TorusMesh& mesh,
                                   const GasParams& gas, const OmegaPoint& w, int quad_pts) {
    double sum = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) {
        cell_quad_visit(mesh, c, quad_pts, [&](const Vec3& x, double wq) {
            const double r = model.rho0.eval(x, w, model.space_dim, model.domain_length);
            sum += wq * energy(r, model.m0_eval(x, w), gas);
        });
    }
    return sum;
}

} // namespace detail

inline DataInterpError data_interpolation_error(const RandomDataModel& model, const Partition& p,
                                                const NodeSet& nodes, const TorusMesh& mesh,
                                                const GasParams& gas, int omega_refine = 8,
                                                int space_quad = 3, int mc_samples = 20000,
                                                std::uint64_t mc_seed = 7771) {
    DataInterpError err;
    const double pg = gas.gamma;
    const double pm = 2.0 * gas.gamma / (gas.gamma + 1.0);

    auto node_of = [&](const OmegaPoint& w) -> const OmegaPoint& {
        return nodes.points[static_cast<std::size_t>(p.locate(w))];
    };

    // Riemann-sum side of the expected-energy gap: exact finite sum.
    double e_nodes = 0.0;
    for (int m = 0; m < p.nu(); ++m)
        e_nodes += p.measure(m) *
                   detail::data_energy_integral(model, mesh, gas, nodes.points[static_cast<std::size_t>(m)],
                                                space_quad);

    if (p.dim() <= 3) {
        err.method = OmegaEstimator::quadrature;
        err.rho_lgamma = detail::omega_quadrature(p, omega_refine, 3, [&](const OmegaPoint& w) {
            return detail::data_diff_norm_rho(model, mesh, node_of(w), w, pg, space_quad);
        });
        err.mom_l2g = detail::omega_quadrature(p, omega_refine, 3, [&](const OmegaPoint& w) {
            return detail::data_diff_norm_mom(model, mesh, node_of(w), w, pm, space_quad);
        });
        const double e_true = detail::omega_quadrature(p, omega_refine, 3, [&](const OmegaPoint& w) {
            return detail::data_energy_integral(model, mesh, gas, w, space_quad);
        });
        err.energy_gap = std::abs(e_nodes - e_true);
        err.mu_l1 = detail::omega_quadrature(p, omega_refine, 3, [&](const OmegaPoint& w) {
            return std::abs(model.mu.eval(node_of(w)) - model.mu.eval(w));
        });
        err.eta_l1 = detail::omega_quadrature(p, omega_refine, 3, [&](const OmegaPoint& w) {
            return std::abs(model.eta.eval(node_of(w)) - model.eta.eval(w));
        });
    } else {
        err.method = OmegaEstimator::monte_carlo;
        std::mt19937_64 rng(mc_seed);
        auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double s_rho = 0.0, s_mom = 0.0, s_e = 0.0, s_mu = 0.0, s_eta = 0.0;
        OmegaPoint w(static_cast<std::size_t>(p.dim()));
        for (int i = 0; i < mc_samples; ++i) {
            for (int a = 0; a < p.dim(); ++a) w[static_cast<std::size_t>(a)] = u01();
            const double dens = p.space().density_at(w);
            const OmegaPoint& wn = node_of(w);
            s_rho += dens * detail::data_diff_norm_rho(model, mesh, wn, w, pg, space_quad);
            s_mom += dens * detail::data_diff_norm_mom(model, mesh, wn, w, pm, space_quad);
            s_e += dens * detail::data_energy_integral(model, mesh, gas, w, space_quad);
            s_mu += dens * std::abs(model.mu.eval(wn) - model.mu.eval(w));
            s_eta += dens * std::abs(model.eta.eval(wn) - model.eta.eval(w));
        }
        err.rho_lgamma = s_rho / mc_samples;
        err.mom_l2g = s_mom / mc_samples;
        err.energy_gap = std::abs(e_nodes - s_e / mc_samples);
        err.mu_l1 = s_mu / mc_samples;
        err.eta_l1 = s_eta / mc_samples;
    }
    return err;
}

} // namespace scfv
