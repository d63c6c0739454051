#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scfv/commands.hpp"
#include "scfv/consistency.hpp"

namespace scfv {

/// Distance in units-in-the-last-place between two doubles (0 if bitwise
/// equal); infinity-like large value across signs/NaN.
inline std::uint64_t ulp_distance(double a, double b) {
    if (a == b) return 0;
    if (std::isnan(a) || std::isnan(b)) return UINT64_MAX;
    if ((a < 0.0) != (b < 0.0)) return UINT64_MAX;
    auto bits = [](double x) {
        std::uint64_t u = std::bit_cast<std::uint64_t>(std::abs(x));
        return u;
    };
    const std::uint64_t ua = bits(a), ub = bits(b);
    return ua > ub ? ua - ub : ub - ua;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Built-in configuration for `verify` when the user provides none: smooth
/// two-mode 2D data with moderate viscosity.
inline RunConfig default_verify_config() {
    RunConfig cfg;
    cfg.mesh = MeshConfig{2, 16, 1.0};
    cfg.gas = GasConfig{1.0, 1.4};
    cfg.run.t_final = 0.05;
    cfg.data.param_dim = 1;
    cfg.data.space_dim = 2;
    cfg.data.rho0.base = 1.0;
    cfg.data.rho0.modes.push_back(FourierMode{{1, 1, 0}, {0, 0, 0}, 0.2, -1, 0.0});
    cfg.data.u0[0].modes.push_back(FourierMode{{0, 1, 0}, {0, 0, 0}, 0.1, -1, 0.0});
    cfg.data.u0[1].modes.push_back(FourierMode{{1, 0, 0}, {0, 0, 0}, 0.1, -1, 0.0});
    cfg.data.mu = ViscosityLaw::constant_law(0.1);
    cfg.data.eta = ViscosityLaw::constant_law(0.0);
    cfg.data.mu_min = 1e-4;
    return cfg;
}

namespace detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

inline CheckResult check_flux_oracle() {
    std::mt19937_64 rng(411);
    auto uni = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    std::uint64_t worst = 0;
    bool upwind_exact = true;
    for (int i = 0; i < 2000; ++i) {
        const double h = uni(0.05, 0.9);
        const double eps = uni(-0.9, 2.0);
        FluxParams fp = make_flux_params(eps, h);
        const double r_in = uni(0.1, 2.0), r_out = uni(0.1, 2.0);
        Vec3 v_in{uni(-1, 1), uni(-1, 1), uni(-1, 1)};
        Vec3 v_out{uni(-1, 1), uni(-1, 1), uni(-1, 1)};
        Vec3 n = axis_unit(static_cast<int>(rng() % 3));
        const double got = diss_flux(r_in, r_out, v_in, v_out, n, fp);
        const double vn = dot(0.5 * (v_in + v_out), n);
        const double expanded =
            0.5 * (r_in + r_out) * vn - (fp.h_eps + 0.5 * std::abs(vn)) * (r_out - r_in);
        worst = std::max(worst, ulp_distance(got, expanded));
        if (vn > 0.0 && upwind(r_in, r_out, v_in, v_out, n) != vn * r_in) upwind_exact = false;
    }
    CheckResult r{"flux_oracle", worst <= 4 && upwind_exact,
                  "max ulp distance " + std::to_string(worst) +
                      (upwind_exact ? ", upwind identity exact" : ", upwind identity BROKEN")};
    return r;
}

inline GridField random_field(const TorusMesh& mesh, std::mt19937_64& rng) {
    GridField g(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c)
        g[c] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return g;
}

inline CheckResult check_operator_duality() {
    std::mt19937_64 rng(412);
    double worst_rel = 0.0;
    double worst_int = 0.0;
    for (int dim : {2, 3}) {
        TorusMesh mesh = build_mesh(dim, 4, 1.0);
        GridField r = random_field(mesh, rng);
        GridField s = random_field(mesh, rng);
        double lhs = 0.0;
        GridField lap = laplace_h(r);
        for (int c = 0; c < mesh.cell_count(); ++c) lhs += mesh.cell_volume() * lap[c] * s[c];
        double rhs = 0.0;
        for (const Face& f : mesh.faces())
            rhs += mesh.face_area() * face_jump(r, f) * face_jump(s, f) / mesh.h();
        const double scale = std::abs(lhs) + std::abs(rhs) + 1e-30;
        worst_rel = std::max(worst_rel, std::abs(lhs + rhs) / scale);

        VecGridField g = grad_h(r);
        Vec3 gi = integral(g);
        GridField dv = div_h(g);
        worst_int = std::max({worst_int, std::abs(gi[0]), std::abs(gi[1]), std::abs(gi[2]),
                              std::abs(integral(dv))});
    }
    return CheckResult{"operator_duality", worst_rel < 1e-12 && worst_int < 1e-13,
                       "duality rel " + num(worst_rel) + ", operator mean " + num(worst_int)};
}

inline CheckResult check_projection() {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    std::mt19937_64 rng(413);
    GridField g = random_field(mesh, rng);
    GridField g2 = project([&](const Vec3& x) { return eval_step(g, x); }, mesh, 3);
    double worst = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c) worst = std::max(worst, std::abs(g2[c] - g[c]));
    // mean preservation for a smooth function
    auto f = [](const Vec3& x) { return std::sin(2 * M_PI * x[0]) * std::cos(2 * M_PI * x[1]) + 0.5; };
    GridField pf = project(f, mesh, 5);
    const double mean_defect = std::abs(integral(pf) - 0.5);
    return CheckResult{"projection", worst < 1e-14 && mean_defect < 1e-12,
                       "idempotence defect " + num(worst) + ", mean defect " + num(mean_defect)};
}

inline CheckResult check_partition_measures() {
    ProbabilityBox space = make_probability_box(2);
    double sum_err = 0.0;
    double prev_diam = 1.0;
    bool halves = true;
    for (int c : {2, 4, 8}) {
        Partition p = build_partition(space, c);
        double total = 0.0;
        for (int m = 0; m < p.nu(); ++m) total += p.measure(m);
        sum_err = std::max(sum_err, std::abs(total - 1.0));
        if (c > 2 && std::abs(p.diam() - 0.5 * prev_diam) > 1e-15) halves = false;
        prev_diam = p.diam();
    }
    return CheckResult{"partition_measures", sum_err < 1e-10 && halves,
                       "measure sum defect " + num(sum_err)};
}

inline CheckResult check_riemann_convergence() {
    ProbabilityBox space = make_probability_box(1);
    OmegaFn f = [](const OmegaPoint& w) { return w[0] * w[0]; };
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int k = 2; k <= 6; ++k) {
        Partition p = build_partition(space, 1 << k);
        NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
        auto s = interpolate_scalar(f, p, nodes);
        const double err = lq_error(s, f, 1.0, 16).value;
        if (err >= prev) decreasing = false;
        prev = err;
    }
    return CheckResult{"riemann_convergence", decreasing, "E|f^M - f| final " + num(prev)};
}

inline CheckResult check_interpolation_exactness() {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 8);
    NodeSet nodes = choose_nodes(p, NodeRule::random, 5150);
    // any function evaluated at the nodes must produce a step interpolant
    // whose expectation is the exact Riemann sum
    OmegaFn f = [](const OmegaPoint& w) { return std::cos(3.0 * w[0]); };
    auto s = interpolate_scalar(f, p, nodes);
    double riemann = 0.0;
    for (int m = 0; m < p.nu(); ++m)
        riemann += f(nodes.points[static_cast<std::size_t>(m)]) * p.measure(m);
    const bool exact = (expectation(s) == riemann);
    bool members = true;
    for (int m = 0; m < p.nu(); ++m)
        if (p.locate(nodes.points[static_cast<std::size_t>(m)]) != m) members = false;
    return CheckResult{"interpolation_exactness", exact && members,
                       exact ? "expectation equals Riemann sum bit-exactly" : "mismatch"};
}

inline CheckResult check_fixed_point(const GasParams& gas) {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    SchemeParams params = make_scheme_params(mesh);
    Viscosity visc{0.1, 0.0};
    FluidState s = init_state([](const Vec3&) { return 1.0; },
                              [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; }, mesh);
    auto [traj, ledger] = run(s, 5 * params.dt, params, visc, gas);
    bool identical = true;
    for (const FluidState& st : traj.states) {
        if (st.rho.v != s.rho.v || st.mom.v != s.mom.v) identical = false;
    }
    return CheckResult{"fixed_point", identical,
                       identical ? "constant state bit-exact over 5 steps" : "state drifted"};
}

inline CheckResult check_conservation_positivity(const RunConfig& cfg) {
    TorusMesh mesh = cfg.make_mesh();
    GasParams gas = cfg.make_gas();
    SchemeParams params = cfg.make_scheme(mesh);
    const OmegaPoint w = solve_omega(cfg);
    FluidState s0 = init_state(cfg.data.rho0_at(w), cfg.data.m0_at(w), mesh, cfg.scheme.quad_pts);
    auto [traj, ledger] = run(s0, cfg.run.t_final, params, cfg.data.viscosity_at(w), gas);
    const double drift = ledger.max_mass_drift_rel();
    bool positive = true;
    for (const FluidState& st : traj.states)
        for (int c = 0; c < mesh.cell_count(); ++c)
            if (!(st.rho[c] > 0.0)) positive = false;
    const double defect = ledger.energy_inequality_defect();
    const double min_diss = ledger.min_dissipation();
    const bool pass = drift <= 1e-12 && positive && defect <= ledger.tol_energy_abs &&
                      min_diss >= -1e-10;
    return CheckResult{"conservation_positivity_energy", pass,
                       "mass drift " + num(drift) + ", energy defect " + num(defect) +
                           ", min dissipation " + num(min_diss)};
}

inline CheckResult check_determinism(const RunConfig& cfg) {
    TorusMesh mesh = cfg.make_mesh();
    GasParams gas = cfg.make_gas();
    SchemeParams params = cfg.make_scheme(mesh);
    const OmegaPoint w = solve_omega(cfg);
    FluidState s0 = init_state(cfg.data.rho0_at(w), cfg.data.m0_at(w), mesh, cfg.scheme.quad_pts);
    Viscosity visc = cfg.data.viscosity_at(w);
    FluidState a = step(s0, params, visc, gas);
    FluidState b = step(s0, params, visc, gas);
    const bool same = (a.rho.v == b.rho.v) && (a.mom.v == b.mom.v);
    return CheckResult{"determinism", same,
                       same ? "repeated step bit-identical" : "repeated step differs"};
}

inline CheckResult check_consistency_decay(const RunConfig& cfg) {
    GasParams gas = cfg.make_gas();
    const OmegaPoint w = solve_omega(cfg);
    Viscosity visc = cfg.data.viscosity_at(w);
    double prev1 = std::numeric_limits<double>::infinity();
    double prev2 = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int n : {8, 16}) {
        TorusMesh mesh(cfg.mesh.dim, n, cfg.mesh.length);
        SchemeParams params = cfg.make_scheme(mesh);
        FluidState s0 = init_state(cfg.data.rho0_at(w), cfg.data.m0_at(w), mesh, cfg.scheme.quad_pts);
        auto [traj, ledger] = run(s0, cfg.run.t_final, params, visc, gas);
        ScalarTestFn phi = default_scalar_test(traj.final_time(), cfg.mesh.length, cfg.mesh.dim);
        VectorTestFn bphi = default_vector_test(traj.final_time(), cfg.mesh.length, cfg.mesh.dim);
        ConsistencyReport rep = consistency_residual(traj, phi, bphi, gas, visc, cfg.scheme.quad_pts);
        if (!(std::abs(rep.e1) < prev1) || !(std::abs(rep.e2) < prev2)) decreasing = false;
        prev1 = std::abs(rep.e1);
        prev2 = std::abs(rep.e2);
    }
    return CheckResult{"consistency_decay", decreasing,
                       "e1 " + num(prev1) + ", e2 " + num(prev2) + " at the finer level"};
}

} // namespace detail

/// The structural-property suite behind `verify`: one named check per
/// scheme property, each reporting pass/fail with a quantitative detail.
inline std::vector<CheckResult> verify_suite(const RunConfig& cfg) {
    std::vector<CheckResult> results;
    results.push_back(detail::check_flux_oracle());
    results.push_back(detail::check_operator_duality());
    results.push_back(detail::check_projection());
    results.push_back(detail::check_partition_measures());
    results.push_back(detail::check_riemann_convergence());
    results.push_back(detail::check_interpolation_exactness());
    results.push_back(detail::check_fixed_point(cfg.make_gas()));
    results.push_back(detail::check_conservation_positivity(cfg));
    results.push_back(detail::check_determinism(cfg));
    results.push_back(detail::check_consistency_decay(cfg));
    return results;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    auto results = verify_suite(cfg);
    bool all = true;
    for (const CheckResult& r : results) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    os << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all ? 0 : 1;
}

} // namespace scfv
