#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "scfv/constitutive.hpp"
#include "scfv/mesh.hpp"
#include "scfv/probability.hpp"

namespace scfv {

/// One Fourier mode of a random field. The amplitude is affine in one
/// parameter coordinate: amp + omega_gain * (w[omega_index] - 1/2); the
/// spatial factor is the product over axes with wavenumber k[a] != 0 of
/// sin(2 pi k[a] x[a] / L + phase[a]).
struct FourierMode {
    std::array<int, 3> k{0, 0, 0};
    std::array<double, 3> phase{0.0, 0.0, 0.0};
    double amp = 0.0;
    int omega_index = -1; // -1: deterministic amplitude
    double omega_gain = 0.0;
};

struct ScalarFieldSpec {
    double base = 0.0;
    std::vector<FourierMode> modes;

    double eval(const Vec3& x, const OmegaPoint& w, int space_dim, double length) const {
        double v = base;
        for (const FourierMode& m : modes) {
            double a = m.amp;
            if (m.omega_index >= 0)
                a += m.omega_gain * (w[static_cast<std::size_t>(m.omega_index)] - 0.5);
            double factor = 1.0;
            for (int ax = 0; ax < space_dim; ++ax)
                if (m.k[static_cast<std::size_t>(ax)] != 0)
                    factor *= std::sin(2.0 * M_PI * m.k[static_cast<std::size_t>(ax)] * x[ax] / length +
                                       m.phase[static_cast<std::size_t>(ax)]);
            v += a * factor;
        }
        return v;
    }
};

/// Viscosity coefficient as a function of the random parameter. Discrete
/// laws are step functions of one coordinate and may be discontinuous; the
/// level for w[omega_index] is levels[#breakpoints <= w].
struct ViscosityLaw {
    enum class Kind { constant, affine, discrete };
    Kind kind = Kind::constant;
    double base = 0.0;
    double gain = 0.0;
    int omega_index = 0;
    std::vector<double> levels;
    std::vector<double> breakpoints; // sorted, strictly inside (0,1)

    static ViscosityLaw constant_law(double value) {
        ViscosityLaw law;
        law.kind = Kind::constant;
        law.base = value;
        return law;
    }

    static ViscosityLaw affine_law(double base, double gain, int omega_index) {
        ViscosityLaw law;
        law.kind = Kind::affine;
        law.base = base;
        law.gain = gain;
        law.omega_index = omega_index;
        return law;
    }

    static ViscosityLaw discrete_law(std::vector<double> levels, std::vector<double> breakpoints,
                                     int omega_index) {
        ViscosityLaw law;
        law.kind = Kind::discrete;
        law.levels = std::move(levels);
        law.breakpoints = std::move(breakpoints);
        law.omega_index = omega_index;
        return law;
    }

    double eval(const OmegaPoint& w) const {
        switch (kind) {
        case Kind::constant: return base;
        case Kind::affine: return base + gain * (w[static_cast<std::size_t>(omega_index)] - 0.5);
        case Kind::discrete: {
            const double y = w[static_cast<std::size_t>(omega_index)];
            std::size_t j = 0;
            while (j < breakpoints.size() && y >= breakpoints[j]) ++j;
            return levels[j];
        }
        }
        return base;
    }

    /// Exact lower bound of the law over [0,1]^N.
    double min_value() const {
        switch (kind) {
        case Kind::constant: return base;
        case Kind::affine: return base - 0.5 * std::abs(gain);
        case Kind::discrete: {
            double mn = levels.empty() ? 0.0 : levels.front();
            for (double v : levels) mn = std::min(mn, v);
            return mn;
        }
        }
        return base;
    }
};

/// Random data: initial density/velocity fields and viscosity coefficients
/// parameterized over [0,1]^N. Momentum is rho0 * u0.
struct RandomDataModel {
    int param_dim = 1;
    int space_dim = 2;
    double domain_length = 1.0;
    ScalarFieldSpec rho0;
    std::array<ScalarFieldSpec, 3> u0;
    ViscosityLaw mu = ViscosityLaw::constant_law(0.1);
    ViscosityLaw eta = ViscosityLaw::constant_law(0.0);
    double mu_min = 1e-6;

    ScalarFn rho0_at(const OmegaPoint& w) const {
        return [this, w](const Vec3& x) { return rho0.eval(x, w, space_dim, domain_length); };
    }

    VectorFn u0_at(const OmegaPoint& w) const {
        return [this, w](const Vec3& x) {
            Vec3 v = zero_vec();
            for (int a = 0; a < space_dim; ++a)
                v[a] = u0[static_cast<std::size_t>(a)].eval(x, w, space_dim, domain_length);
            return v;
        };
    }

    VectorFn m0_at(const OmegaPoint& w) const {
        return [this, w](const Vec3& x) {
            const double r = rho0.eval(x, w, space_dim, domain_length);
            Vec3 v = zero_vec();
            for (int a = 0; a < space_dim; ++a)
                v[a] = r * u0[static_cast<std::size_t>(a)].eval(x, w, space_dim, domain_length);
            return v;
        };
    }

    Vec3 m0_eval(const Vec3& x, const OmegaPoint& w) const {
        const double r = rho0.eval(x, w, space_dim, domain_length);
        Vec3 v = zero_vec();
        for (int a = 0; a < space_dim; ++a)
            v[a] = r * u0[static_cast<std::size_t>(a)].eval(x, w, space_dim, domain_length);
        return v;
    }

    Viscosity viscosity_at(const OmegaPoint& w) const { return Viscosity{mu.eval(w), eta.eval(w)}; }
};

/// Admissibility spot-check on a validation sample of parameter points and a
/// spatial lattice: rho0 uniformly positive, mu >= mu_min, eta >= 0. Returns
/// every violation found.
inline std::vector<std::string> validate_model(const RandomDataModel& model, int omega_samples = 64,
                                               std::uint64_t seed = 99) {
    std::vector<std::string> violations;
    if (!(model.mu_min > 0.0)) violations.push_back("data.mu_min: must be > 0");
    for (const FourierMode& m : model.rho0.modes) {
        if (m.omega_index >= model.param_dim)
            violations.push_back("data.rho.modes: omega_index out of range for param_dim");
    }
    for (int a = 0; a < model.space_dim; ++a)
        for (const FourierMode& m : model.u0[static_cast<std::size_t>(a)].modes)
            if (m.omega_index >= model.param_dim)
                violations.push_back("data.velocity.modes: omega_index out of range for param_dim");
    for (const ViscosityLaw* law : {&model.mu, &model.eta}) {
        if (law->kind != ViscosityLaw::Kind::constant && law->omega_index >= model.param_dim)
            violations.push_back("data viscosity law: omega_index out of range for param_dim");
        if (law->kind == ViscosityLaw::Kind::discrete) {
            if (law->levels.size() != law->breakpoints.size() + 1)
                violations.push_back("data viscosity law: need #levels == #breakpoints + 1");
            for (std::size_t j = 0; j + 1 < law->breakpoints.size(); ++j)
                if (!(law->breakpoints[j] < law->breakpoints[j + 1]))
                    violations.push_back("data viscosity law: breakpoints must be strictly increasing");
        }
    }
    if (!violations.empty()) return violations;

    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<OmegaPoint> samples;
    samples.push_back(OmegaPoint(static_cast<std::size_t>(model.param_dim), 0.5));
    samples.push_back(OmegaPoint(static_cast<std::size_t>(model.param_dim), 0.0));
    samples.push_back(OmegaPoint(static_cast<std::size_t>(model.param_dim), 1.0));
    for (int i = 0; i < omega_samples; ++i) {
        OmegaPoint w(static_cast<std::size_t>(model.param_dim));
        for (auto& c : w) c = u01();
        samples.push_back(std::move(w));
    }

    // viscosity laws admit exact bounds
    if (!(model.mu.min_value() >= model.mu_min))
        violations.push_back("data.mu: law minimum " + std::to_string(model.mu.min_value()) +
                             " is below mu_min " + std::to_string(model.mu_min));
    if (!(model.eta.min_value() >= 0.0))
        violations.push_back("data.eta: law minimum is negative");

    const int lattice = 17;
    double min_rho = std::numeric_limits<double>::infinity();
    for (const OmegaPoint& w : samples) {
        std::array<int, 3> ix{0, 0, 0};
        bool done = false;
        while (!done) {
            Vec3 x = zero_vec();
            for (int a = 0; a < model.space_dim; ++a)
                x[a] = (ix[static_cast<std::size_t>(a)] + 0.31) / lattice * model.domain_length;
            min_rho = std::min(min_rho, model.rho0.eval(x, w, model.space_dim, model.domain_length));
            int a = 0;
            for (; a < model.space_dim; ++a) {
                if (++ix[static_cast<std::size_t>(a)] < lattice) break;
                ix[static_cast<std::size_t>(a)] = 0;
            }
            done = (a == model.space_dim);
        }
    }
    if (!(min_rho > 0.0))
        violations.push_back("data.rho: initial density not uniformly positive on validation sample (min " +
                             std::to_string(min_rho) + ")");
    return violations;
}

} // namespace scfv
