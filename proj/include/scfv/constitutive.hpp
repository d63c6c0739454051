#pragma once

#include <cmath>
#include <limits>

#include "scfv/errors.hpp"
#include "scfv/mesh.hpp"

namespace scfv {

/// Isentropic pressure law p(rho) = a rho^gamma, a > 0, gamma > 1.
struct GasParams {
    double a = 1.0;
    double gamma = 1.4;
};

inline GasParams make_gas_params(double a, double gamma) {
    if (!(a > 0.0)) throw ConfigError("gas: a must be > 0, got " + std::to_string(a));
    if (!(gamma > 1.0)) throw ConfigError("gas: gamma must be > 1, got " + std::to_string(gamma));
    return GasParams{a, gamma};
}

/// Shear/bulk viscosities; the scheme's divergence coefficient is
/// lambda = mu/d + eta.
struct Viscosity {
    double mu = 0.1;
    double eta = 0.0;

    double lambda(int dim) const { return mu / dim + eta; }
};

inline double pressure(double rho, const GasParams& g) { return g.a * std::pow(rho, g.gamma); }

/// Pressure potential P with P'(rho) rho - P(rho) = p(rho).
inline double pressure_potential(double rho, const GasParams& g) {
    return g.a / (g.gamma - 1.0) * std::pow(rho, g.gamma);
}

/// Total energy density as a convex extended-real function of (rho, m):
/// kinetic + pressure potential for rho > 0, 0 at the vacuum rest state,
/// +infinity for vacuum with momentum or negative density.
inline double energy(double rho, const Vec3& m, const GasParams& g) {
    if (rho > 0.0) return 0.5 * norm2_sq(m) / rho + pressure_potential(rho, g);
    if (rho == 0.0 && m[0] == 0.0 && m[1] == 0.0 && m[2] == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

/// E written in (rho, u) variables; equals energy(rho, rho u) for rho > 0.
inline double energy_rho_u(double rho, const Vec3& u, const GasParams& g) {
    return 0.5 * rho * norm2_sq(u) + pressure_potential(rho, g);
}

/// Integral of E(rho_h, m_h) over the torus; infinity if any cell is
/// degenerate.
inline double total_energy(const GridField& rho, const VecGridField& mom, const GasParams& g) {
    const TorusMesh& m = *rho.mesh;
    double sum = 0.0;
    for (int c = 0; c < m.cell_count(); ++c) {
        double e = energy(rho[c], mom.vec(c), g);
        if (std::isinf(e)) return e;
        sum += m.cell_volume() * e;
    }
    return sum;
}

} // namespace scfv
