#pragma once

#include <cmath>
#include <string>

#include "scfv/solver.hpp"

namespace scfv {

/// Smooth scalar test function of (t, x) with analytic spatial gradient.
/// Must vanish at the final time of the trajectory it is paired with.
struct ScalarTestFn {
    std::string desc;
    std::function<double(double, const Vec3&)> value;
    std::function<Vec3(double, const Vec3&)> grad;
};

/// Smooth vector test function with analytic Jacobian; grad(t,x)[i] is the
/// spatial gradient of component i, div the trace of the Jacobian.
struct VectorTestFn {
    std::string desc;
    std::function<Vec3(double, const Vec3&)> value;
    std::function<std::array<Vec3, 3>(double, const Vec3&)> grad;
    std::function<double(double, const Vec3&)> div;
};

/// Weak-form defects of the trajectory against the pair (phi, bphi):
/// e1 for the continuity equation, e2 for the momentum equation.
struct ConsistencyReport {
    double e1 = 0.0;
    double e2 = 0.0;
    double h = 0.0;
    std::string phi_desc;
    std::string bphi_desc;
};

/// psi(t) = (1 - t/T)^2: smooth in time, zero at t = T.
inline double time_window(double t, double t_final) {
    const double s = 1.0 - t / t_final;
    return s * s;
}

// phase offsets keep the built-in test functions free of the parity
// cancellations a fully symmetric mode pair would produce
inline constexpr std::array<double, 3> kTestPhases{0.7, 0.3, 0.5};

/// Built-in C^2 scalar test function psi(t) prod_a cos(2 pi x_a / L + p_a).
inline ScalarTestFn default_scalar_test(double t_final, double length, int dim) {
    const double w = 2.0 * M_PI / length;
    ScalarTestFn fn;
    fn.desc = "psi(t) prod cos(2 pi x_a / L + p_a), psi = (1-t/T)^2";
    fn.value = [=](double t, const Vec3& x) {
        double v = time_window(t, t_final);
        for (int a = 0; a < dim; ++a) v *= std::cos(w * x[a] + kTestPhases[a]);
        return v;
    };
    fn.grad = [=](double t, const Vec3& x) {
        Vec3 g = zero_vec();
        for (int a = 0; a < dim; ++a) {
            double v = time_window(t, t_final);
            for (int b = 0; b < dim; ++b)
                v *= (b == a) ? -w * std::sin(w * x[b] + kTestPhases[b])
                              : std::cos(w * x[b] + kTestPhases[b]);
            g[a] = v;
        }
        return g;
    };
    return fn;
}

/// Built-in vector test function with components psi(t) sin(2 pi x_a / L + p_a);
/// not divergence-free, so the pressure coupling is exercised.
inline VectorTestFn default_vector_test(double t_final, double length, int dim) {
    const double w = 2.0 * M_PI / length;
    VectorTestFn fn;
    fn.desc = "psi(t) (sin(2 pi x_a / L + p_a))_a, psi = (1-t/T)^2";
    fn.value = [=](double t, const Vec3& x) {
        Vec3 v = zero_vec();
        for (int a = 0; a < dim; ++a)
            v[a] = time_window(t, t_final) * std::sin(w * x[a] + kTestPhases[a]);
        return v;
    };
    fn.grad = [=](double t, const Vec3& x) {
        std::array<Vec3, 3> g{zero_vec(), zero_vec(), zero_vec()};
        for (int a = 0; a < dim; ++a)
            g[a][a] = time_window(t, t_final) * w * std::cos(w * x[a] + kTestPhases[a]);
        return g;
    };
    fn.div = [=](double t, const Vec3& x) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += w * std::cos(w * x[a] + kTestPhases[a]);
        return time_window(t, t_final) * s;
    };
    return fn;
}

namespace detail {

inline void require_vanishing_at_final_time(const Trajectory& traj, const ScalarTestFn& phi,
                                            const VectorTestFn& bphi) {
    const TorusMesh& mesh = *traj.states.front().rho.mesh;
    const double t_end = traj.final_time();
    double mx = 0.0;
    const int stride = std::max(1, mesh.cell_count() / 16);
    for (int c = 0; c < mesh.cell_count(); c += stride) {
        Vec3 x = mesh.cell_center(c);
        mx = std::max(mx, std::abs(phi.value(t_end, x)));
        mx = std::max(mx, norm2(bphi.value(t_end, x)));
    }
    if (mx > 1e-12)
        throw ConfigError(
            "consistency_residual: test functions must vanish at the final time (max |value(T)| = " +
            std::to_string(mx) + ")");
}

} // namespace detail

/// Defect of the discrete weak formulation: substitute the piecewise constant
/// trajectory into the continuity and momentum weak forms with the given test
/// functions. Space integrals use cellwise Gauss quadrature of the test
/// function (face terms use face-center values); time integrals pair per-slab
/// Gauss points with the piecewise constant-in-time trajectory, and the d/dt
/// terms telescope exactly.
inline ConsistencyReport consistency_residual(const Trajectory& traj, const ScalarTestFn& phi,
                                              const VectorTestFn& bphi, const GasParams& gas,
                                              const Viscosity& visc, int space_quad = 3,
                                              int time_quad = 2) {
    detail::require_vanishing_at_final_time(traj, phi, bphi);

    const TorusMesh& mesh = *traj.states.front().rho.mesh;
    const int d = mesh.dim();
    const int nc = mesh.cell_count();
    const double dt = traj.dt;
    const int n_slabs = traj.step_count();
    const double lam = visc.lambda(d);
    const GaussRule& trule = gauss_rule(time_quad);

    double e1 = 0.0;
    double e2 = 0.0;

    // initial-data terms: + int rho_0h phi(0,.) and + int m_0h . bphi(0,.)
    const FluidState& s0 = traj.states.front();
    for (int c = 0; c < nc; ++c) {
        double iphi = 0.0;
        Vec3 ibphi = zero_vec();
        detail::cell_quad_visit(mesh, c, space_quad, [&](const Vec3& x, double w) {
            iphi += w * phi.value(0.0, x);
            Vec3 b = bphi.value(0.0, x);
            for (int a = 0; a < d; ++a) ibphi[a] += w * b[a];
        });
        e1 += s0.rho[c] * iphi;
        for (int a = 0; a < d; ++a) e2 += s0.mom.at(c, a) * ibphi[a];
    }

    for (int k = 0; k < n_slabs; ++k) {
        const FluidState& s = traj.states[static_cast<std::size_t>(k)];
        const double t0 = k * dt;
        const double t1 = (k + 1) * dt;
        VecGridField u = s.velocity();
        GridField divu = div_h(u);

        for (int c = 0; c < nc; ++c) {
            const Vec3 uc = u.vec(c);
            const Vec3 mc = s.mom.vec(c);
            const double pc = pressure(s.rho[c], gas);

            double dphi = 0.0;
            Vec3 dbphi = zero_vec();
            // time-quadrature accumulators for the spatial-derivative terms
            double conv1 = 0.0;  // int_slab int_K u . grad phi weighted by rho
            double conv2 = 0.0;  // int_slab int_K (m (x) u) : grad bphi
            double divb = 0.0;   // int_slab int_K div bphi

            detail::cell_quad_visit(mesh, c, space_quad, [&](const Vec3& x, double w) {
                dphi += w * (phi.value(t1, x) - phi.value(t0, x));
                Vec3 b1 = bphi.value(t1, x);
                Vec3 b0 = bphi.value(t0, x);
                for (int a = 0; a < d; ++a) dbphi[a] += w * (b1[a] - b0[a]);
                for (int q = 0; q < time_quad; ++q) {
                    const double tq = t0 + trule.nodes[q] * dt;
                    const double tw = trule.weights[q] * dt;
                    conv1 += tw * w * dot(mc, phi.grad(tq, x));
                    const auto gb = bphi.grad(tq, x);
                    double cc = 0.0;
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) cc += mc[i] * uc[j] * gb[i][j];
                    conv2 += tw * w * cc;
                    divb += tw * w * bphi.div(tq, x);
                }
            });
            e1 += s.rho[c] * dphi + conv1;
            for (int a = 0; a < d; ++a) e2 += s.mom.at(c, a) * dbphi[a];
            e2 += conv2 + pc * divb - lam * divu[c] * divb;
        }

        // - mu sum_sigma |sigma| [[u]] . (d_axis bphi)(face center)
        for (const Face& f : mesh.faces()) {
            Vec3 xf = mesh.face_center(f);
            for (int q = 0; q < time_quad; ++q) {
                const double tq = t0 + trule.nodes[q] * dt;
                const double tw = trule.weights[q] * dt;
                const auto gb = bphi.grad(tq, xf);
                double s_face = 0.0;
                for (int i = 0; i < d; ++i) s_face += face_jump(u, f, i) * gb[i][f.axis];
                e2 -= tw * visc.mu * mesh.face_area() * s_face;
            }
        }
    }

    ConsistencyReport rep;
    rep.e1 = e1;
    rep.e2 = e2;
    rep.h = mesh.h();
    rep.phi_desc = phi.desc;
    rep.bphi_desc = bphi.desc;
    return rep;
}

} // namespace scfv
