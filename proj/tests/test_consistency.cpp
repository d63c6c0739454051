#include <gtest/gtest.h>

#include "scfv/consistency.hpp"
#include "test_util.hpp"

using namespace scfv;

namespace {

const GasParams kGas{1.0, 1.4};
const Viscosity kVisc{0.1, 0.0};

FluidState smooth_state(const TorusMesh& mesh) {
    auto rho0 = [](const Vec3& x) {
        return 1.0 + 0.2 * std::sin(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]);
    };
    auto m0 = [rho0](const Vec3& x) {
        const double r = rho0(x);
        return Vec3{0.1 * r * std::sin(2.0 * M_PI * x[1]), 0.1 * r * std::sin(2.0 * M_PI * x[0]),
                    0.0};
    };
    return init_state(rho0, m0, mesh);
}

ScalarTestFn zero_scalar() {
    ScalarTestFn fn;
    fn.desc = "zero";
    fn.value = [](double, const Vec3&) { return 0.0; };
    fn.grad = [](double, const Vec3&) { return zero_vec(); };
    return fn;
}

VectorTestFn zero_vector() {
    VectorTestFn fn;
    fn.desc = "zero";
    fn.value = [](double, const Vec3&) { return zero_vec(); };
    fn.grad = [](double, const Vec3&) {
        return std::array<Vec3, 3>{zero_vec(), zero_vec(), zero_vec()};
    };
    fn.div = [](double, const Vec3&) { return 0.0; };
    return fn;
}

/// Space-independent pair: phi = psi(t), bphi = psi(t) (1,1).
std::pair<ScalarTestFn, VectorTestFn> time_only_pair(double t_final) {
    ScalarTestFn phi;
    phi.desc = "psi(t)";
    phi.value = [t_final](double t, const Vec3&) { return time_window(t, t_final); };
    phi.grad = [](double, const Vec3&) { return zero_vec(); };
    VectorTestFn bphi;
    bphi.desc = "psi(t) (1,1)";
    bphi.value = [t_final](double t, const Vec3&) {
        const double w = time_window(t, t_final);
        return Vec3{w, w, 0.0};
    };
    bphi.grad = [](double, const Vec3&) {
        return std::array<Vec3, 3>{zero_vec(), zero_vec(), zero_vec()};
    };
    bphi.div = [](double, const Vec3&) { return 0.0; };
    return {phi, bphi};
}

} // namespace

TEST(Consistency, ZeroTestFunctionsGiveZeroResiduals) {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    SchemeParams params = make_scheme_params(mesh);
    auto [traj, ledger] = run(smooth_state(mesh), 4 * params.dt, params, kVisc, kGas);
    ConsistencyReport rep = consistency_residual(traj, zero_scalar(), zero_vector(), kGas, kVisc);
    EXPECT_EQ(rep.e1, 0.0);
    EXPECT_EQ(rep.e2, 0.0);
}

TEST(Consistency, ConstantTrajectoryTimeOnlyTestFunction) {
    // for a constant state the d/dt term telescopes against the initial term,
    // leaving only roundoff
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    SchemeParams params = make_scheme_params(mesh);
    FluidState s = init_state([](const Vec3&) { return 1.0; },
                              [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; }, mesh);
    auto [traj, ledger] = run(s, 8 * params.dt, params, kVisc, kGas);
    auto [phi, bphi] = time_only_pair(traj.final_time());
    ConsistencyReport rep = consistency_residual(traj, phi, bphi, kGas, kVisc);
    EXPECT_NEAR(rep.e1, 0.0, 1e-12);
    EXPECT_NEAR(rep.e2, 0.0, 1e-12);
}

TEST(Consistency, RejectsTestFunctionsNotVanishingAtFinalTime) {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    SchemeParams params = make_scheme_params(mesh);
    auto [traj, ledger] = run(smooth_state(mesh), 2 * params.dt, params, kVisc, kGas);
    ScalarTestFn bad;
    bad.desc = "constant 1";
    bad.value = [](double, const Vec3&) { return 1.0; };
    bad.grad = [](double, const Vec3&) { return zero_vec(); };
    EXPECT_THROW(consistency_residual(traj, bad, zero_vector(), kGas, kVisc), ConfigError);
}

TEST(Consistency, ResidualsDecreaseUnderRefinement) {
    double prev_e1 = std::numeric_limits<double>::infinity();
    double prev_e2 = std::numeric_limits<double>::infinity();
    for (int n : {8, 16}) {
        TorusMesh mesh = build_mesh(2, n, 1.0);
        SchemeParams params = make_scheme_params(mesh);
        auto [traj, ledger] = run(smooth_state(mesh), 0.05, params, kVisc, kGas);
        ScalarTestFn phi = default_scalar_test(traj.final_time(), 1.0, 2);
        VectorTestFn bphi = default_vector_test(traj.final_time(), 1.0, 2);
        ConsistencyReport rep = consistency_residual(traj, phi, bphi, kGas, kVisc);
        EXPECT_LT(std::abs(rep.e1), prev_e1);
        EXPECT_LT(std::abs(rep.e2), prev_e2);
        prev_e1 = std::abs(rep.e1);
        prev_e2 = std::abs(rep.e2);
    }
}

TEST(Consistency, ReportCarriesMeshSizeAndDescriptors) {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    SchemeParams params = make_scheme_params(mesh);
    auto [traj, ledger] = run(smooth_state(mesh), 2 * params.dt, params, kVisc, kGas);
    ScalarTestFn phi = default_scalar_test(traj.final_time(), 1.0, 2);
    VectorTestFn bphi = default_vector_test(traj.final_time(), 1.0, 2);
    ConsistencyReport rep = consistency_residual(traj, phi, bphi, kGas, kVisc);
    EXPECT_DOUBLE_EQ(rep.h, mesh.h());
    EXPECT_FALSE(rep.phi_desc.empty());
    EXPECT_FALSE(rep.bphi_desc.empty());
    EXPECT_TRUE(std::isfinite(rep.e1));
    EXPECT_TRUE(std::isfinite(rep.e2));
}
