#include <gtest/gtest.h>

#include "scfv/constitutive.hpp"
#include "scfv/solver.hpp"
#include "test_util.hpp"

using namespace scfv;

TEST(Pressure, PowerLaw) {
    EXPECT_DOUBLE_EQ(pressure(0.0, {1.0, 1.4}), 0.0);
    EXPECT_DOUBLE_EQ(pressure(1.0, {1.0, 1.4}), 1.0);
    EXPECT_DOUBLE_EQ(pressure(2.0, {1.0, 2.0}), 4.0);
}

TEST(PressurePotential, Values) {
    EXPECT_DOUBLE_EQ(pressure_potential(1.0, {1.0, 2.0}), 1.0);
    EXPECT_DOUBLE_EQ(pressure_potential(0.0, {1.0, 2.0}), 0.0);
}

TEST(PressurePotential, LegendreIdentity) {
    // P'(rho) rho - P(rho) = p(rho), with P' by central finite differences
    GasParams g{0.7, 1.4};
    std::mt19937_64 rng(51);
    for (int i = 0; i < 50; ++i) {
        const double rho = test::uniform(rng, 0.2, 3.0);
        const double dr = 1e-6 * rho;
        const double dP =
            (pressure_potential(rho + dr, g) - pressure_potential(rho - dr, g)) / (2.0 * dr);
        EXPECT_NEAR(dP * rho - pressure_potential(rho, g), pressure(rho, g), 1e-6);
    }
}

TEST(Pressure, StrictlyIncreasing) {
    GasParams g{1.3, 1.7};
    double prev_p = 0.0, prev_P = 0.0;
    for (double rho = 0.1; rho < 3.0; rho += 0.1) {
        EXPECT_GT(pressure(rho, g), prev_p);
        EXPECT_GT(pressure_potential(rho, g), prev_P);
        prev_p = pressure(rho, g);
        prev_P = pressure_potential(rho, g);
    }
}

TEST(Energy, ThreeBranches) {
    GasParams g{1.0, 2.0};
    EXPECT_DOUBLE_EQ(energy(0.0, {0.0, 0.0, 0.0}, g), 0.0);
    EXPECT_TRUE(std::isinf(energy(0.0, {1.0, 0.0, 0.0}, g)));
    EXPECT_TRUE(std::isinf(energy(-0.5, {0.0, 0.0, 0.0}, g)));
    // (rho, m) = (2, (2,0)): 0.5*4/2 + 4/(2-1) = 1 + 4 = 5
    EXPECT_DOUBLE_EQ(energy(2.0, {2.0, 0.0, 0.0}, g), 5.0);
}

TEST(Energy, RhoUFormAgrees) {
    GasParams g{1.0, 1.4};
    std::mt19937_64 rng(52);
    for (int i = 0; i < 100; ++i) {
        const double rho = test::uniform(rng, 0.1, 3.0);
        Vec3 u{test::uniform(rng), test::uniform(rng), test::uniform(rng)};
        Vec3 m = rho * u;
        EXPECT_NEAR(energy(rho, m, g), energy_rho_u(rho, u, g), 1e-12);
    }
}

TEST(Energy, MidpointConvexity) {
    GasParams g{1.0, 1.4};
    std::mt19937_64 rng(53);
    for (int i = 0; i < 200; ++i) {
        const double r1 = test::uniform(rng, 0.05, 3.0);
        const double r2 = test::uniform(rng, 0.05, 3.0);
        Vec3 m1{test::uniform(rng), test::uniform(rng), 0.0};
        Vec3 m2{test::uniform(rng), test::uniform(rng), 0.0};
        const double mid = energy(0.5 * (r1 + r2), 0.5 * (m1 + m2), g);
        EXPECT_LE(mid, 0.5 * (energy(r1, m1, g) + energy(r2, m2, g)) + 1e-12);
    }
    // degenerate endpoints participate through the extended-real values
    EXPECT_LE(energy(0.5, {0.5, 0.0, 0.0}, g),
              0.5 * (energy(0.0, {1.0, 0.0, 0.0}, g) + energy(1.0, {0.0, 0.0, 0.0}, g)));
}

TEST(TotalEnergy, UniformState) {
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    GasParams g{1.0, 2.0};
    GridField rho(mesh, 1.0);
    VecGridField mom(mesh, 0.0);
    EXPECT_NEAR(total_energy(rho, mom, g), 1.0, 1e-14); // P(1) * |T^2| = 1
}

TEST(TotalEnergy, MomentumScaling) {
    TorusMesh mesh = build_mesh(2, 4, 1.0);
    GasParams g{1.0, 1.4};
    std::mt19937_64 rng(54);
    GridField rho = test::random_field(mesh, rng, 0.5, 2.0);
    VecGridField mom = test::random_vec_field(mesh, rng);
    VecGridField mom2(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c)
        for (int a = 0; a < 2; ++a) mom2.at(c, a) = 2.0 * mom.at(c, a);
    GridField zero(mesh, 0.0);
    VecGridField zv(mesh, 0.0);
    const double pot = total_energy(rho, zv, g);
    const double kin1 = total_energy(rho, mom, g) - pot;
    const double kin2 = total_energy(rho, mom2, g) - pot;
    EXPECT_NEAR(kin2, 4.0 * kin1, 1e-12 * (1.0 + kin2));
    (void)zero;
}

TEST(TotalEnergy, DegenerateCellPropagatesInfinity) {
    TorusMesh mesh = build_mesh(2, 4, 1.0);
    GasParams g{1.0, 1.4};
    GridField rho(mesh, 1.0);
    VecGridField mom(mesh, 0.0);
    rho[3] = 0.0;
    mom.at(3, 0) = 0.5;
    EXPECT_TRUE(std::isinf(total_energy(rho, mom, g)));
}

TEST(TotalEnergy, JensenAgainstContinuousData) {
    // projected data cannot exceed the continuous data energy
    TorusMesh mesh = build_mesh(2, 8, 1.0);
    GasParams g{1.0, 1.4};
    auto rho0 = [](const Vec3& x) {
        return 1.0 + 0.4 * std::sin(2.0 * M_PI * x[0]) * std::sin(2.0 * M_PI * x[1]);
    };
    auto m0 = [](const Vec3& x) {
        return Vec3{0.3 * std::sin(2.0 * M_PI * x[1]), 0.2 * std::cos(2.0 * M_PI * x[0]), 0.0};
    };
    GridField rho_h = project(rho0, mesh, 4);
    VecGridField mom_h = project_vec(m0, mesh, 4);
    const double projected = total_energy(rho_h, mom_h, g);
    double continuous = 0.0;
    for (int c = 0; c < mesh.cell_count(); ++c)
        detail::cell_quad_visit(mesh, c, 6, [&](const Vec3& x, double w) {
            continuous += w * energy(rho0(x), m0(x), g);
        });
    EXPECT_LE(projected, continuous + 1e-12);
}

TEST(Viscosity, LambdaCombination) {
    Viscosity v{0.3, 0.1};
    EXPECT_DOUBLE_EQ(v.lambda(2), 0.25);
    EXPECT_DOUBLE_EQ(v.lambda(3), 0.2);
}

TEST(GasParams, Validation) {
    EXPECT_THROW(make_gas_params(0.0, 1.4), ConfigError);
    EXPECT_THROW(make_gas_params(1.0, 1.0), ConfigError);
    EXPECT_THROW(make_gas_params(1.0, 0.9), ConfigError);
    EXPECT_NO_THROW(make_gas_params(2.0, 1.01));
}
