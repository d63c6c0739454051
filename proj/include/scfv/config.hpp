#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scfv/random_data.hpp"
#include "scfv/solver.hpp"

namespace scfv {

struct MeshConfig {
    int dim = 2;
    int cells = 16;
    double length = 1.0;
};

struct GasConfig {
    double a = 1.0;
    double gamma = 1.4;
};

struct SchemeConfig {
    double cfl = 0.1;
    double eps = 1.0;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double tol_energy_rel = 1e-8;
    int quad_pts = 3;
};

struct CollocationConfig {
    int cells_per_axis = 2;
    std::string rule = "midpoint";
    std::uint64_t seed = 12345;
    int workers = 1;
    int omega_refine = 8;
};

struct RunSection {
    double t_final = 0.1;
    std::vector<double> output_times;
    std::string output_dir = "out";
};

struct RunConfig {
    MeshConfig mesh;
    GasConfig gas;
    SchemeConfig scheme;
    RandomDataModel data;
    CollocationConfig colloc;
    RunSection run;

    TorusMesh make_mesh() const { return build_mesh(mesh.dim, mesh.cells, mesh.length); }
    GasParams make_gas() const { return GasParams{gas.a, gas.gamma}; }
    SchemeParams make_scheme(const TorusMesh& m) const {
        return make_scheme_params(m, scheme.cfl, scheme.eps, scheme.picard_tol,
                                  scheme.picard_max_iter, scheme.tol_energy_rel);
    }
};

namespace detail {

using json = nlohmann::json;

inline int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

class ConfigReader {
public:
    explicit ConfigReader(std::vector<std::string>& violations) : violations_(violations) {}

    template <class T>
    void get(const json& j, const std::string& path, const char* key, T& out) {
        if (!j.contains(key)) return;
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            violations_.push_back(path + "." + key + ": " + e.what());
        }
    }

    void require(bool cond, const std::string& msg) {
        if (!cond) violations_.push_back(msg);
    }

private:
    std::vector<std::string>& violations_;
};

inline FourierMode parse_mode(const json& j, const std::string& path,
                              std::vector<std::string>& violations) {
    ConfigReader r(violations);
    FourierMode m;
    if (j.contains("k")) {
        auto kv = j.at("k").get<std::vector<int>>();
        for (std::size_t a = 0; a < kv.size() && a < 3; ++a) m.k[a] = kv[a];
    }
    if (j.contains("phase")) {
        auto pv = j.at("phase").get<std::vector<double>>();
        for (std::size_t a = 0; a < pv.size() && a < 3; ++a) m.phase[a] = pv[a];
    }
    r.get(j, path, "amp", m.amp);
    r.get(j, path, "omega_index", m.omega_index);
    r.get(j, path, "omega_gain", m.omega_gain);
    return m;
}

inline ScalarFieldSpec parse_field_spec(const json& j, const std::string& path,
                                        std::vector<std::string>& violations) {
    ConfigReader r(violations);
    ScalarFieldSpec spec;
    r.get(j, path, "base", spec.base);
    if (j.contains("modes")) {
        int i = 0;
        for (const auto& jm : j.at("modes")) {
            spec.modes.push_back(parse_mode(jm, path + ".modes[" + std::to_string(i) + "]", violations));
            ++i;
        }
    }
    return spec;
}

inline ViscosityLaw parse_viscosity_law(const json& j, const std::string& path,
                                        std::vector<std::string>& violations) {
    ConfigReader r(violations);
    ViscosityLaw law;
    if (j.contains("levels")) {
        law.kind = ViscosityLaw::Kind::discrete;
        law.levels = j.at("levels").get<std::vector<double>>();
        if (j.contains("breakpoints"))
            law.breakpoints = j.at("breakpoints").get<std::vector<double>>();
        r.get(j, path, "omega_index", law.omega_index);
        r.require(law.levels.size() == law.breakpoints.size() + 1,
                  path + ": need #levels == #breakpoints + 1");
    } else if (j.contains("omega_index") || j.contains("gain")) {
        law.kind = ViscosityLaw::Kind::affine;
        r.get(j, path, "base", law.base);
        r.get(j, path, "gain", law.gain);
        r.get(j, path, "omega_index", law.omega_index);
    } else {
        law.kind = ViscosityLaw::Kind::constant;
        r.get(j, path, "base", law.base);
    }
    return law;
}

} // namespace detail

/// Parse and validate a configuration document. Collects every violation
/// before throwing, so a bad file reports all problems at once.
inline RunConfig parse_config(const detail::json& j) {
    std::vector<std::string> violations;
    detail::ConfigReader r(violations);
    RunConfig cfg;

    if (j.contains("mesh")) {
        const auto& jm = j.at("mesh");
        r.get(jm, "mesh", "dim", cfg.mesh.dim);
        r.get(jm, "mesh", "cells", cfg.mesh.cells);
        r.get(jm, "mesh", "length", cfg.mesh.length);
    }
    if (j.contains("gas")) {
        const auto& jg = j.at("gas");
        r.get(jg, "gas", "a", cfg.gas.a);
        r.get(jg, "gas", "gamma", cfg.gas.gamma);
    }
    if (j.contains("scheme")) {
        const auto& js = j.at("scheme");
        r.get(js, "scheme", "cfl", cfg.scheme.cfl);
        r.get(js, "scheme", "eps", cfg.scheme.eps);
        r.get(js, "scheme", "picard_tol", cfg.scheme.picard_tol);
        r.get(js, "scheme", "picard_max_iter", cfg.scheme.picard_max_iter);
        r.get(js, "scheme", "tol_energy_rel", cfg.scheme.tol_energy_rel);
        r.get(js, "scheme", "quad_pts", cfg.scheme.quad_pts);
    }
    if (j.contains("data")) {
        const auto& jd = j.at("data");
        r.get(jd, "data", "param_dim", cfg.data.param_dim);
        r.get(jd, "data", "mu_min", cfg.data.mu_min);
        if (jd.contains("rho"))
            cfg.data.rho0 = detail::parse_field_spec(jd.at("rho"), "data.rho", violations);
        else
            cfg.data.rho0.base = 1.0;
        if (jd.contains("velocity")) {
            int a = 0;
            for (const auto& jc : jd.at("velocity")) {
                if (a >= 3) break;
                cfg.data.u0[static_cast<std::size_t>(a)] = detail::parse_field_spec(
                    jc, "data.velocity[" + std::to_string(a) + "]", violations);
                ++a;
            }
        }
        if (jd.contains("mu"))
            cfg.data.mu = detail::parse_viscosity_law(jd.at("mu"), "data.mu", violations);
        if (jd.contains("eta"))
            cfg.data.eta = detail::parse_viscosity_law(jd.at("eta"), "data.eta", violations);
    } else {
        cfg.data.rho0.base = 1.0;
    }
    if (j.contains("collocation")) {
        const auto& jc = j.at("collocation");
        r.get(jc, "collocation", "cells_per_axis", cfg.colloc.cells_per_axis);
        r.get(jc, "collocation", "rule", cfg.colloc.rule);
        r.get(jc, "collocation", "seed", cfg.colloc.seed);
        r.get(jc, "collocation", "workers", cfg.colloc.workers);
        r.get(jc, "collocation", "omega_refine", cfg.colloc.omega_refine);
    }
    if (j.contains("run")) {
        const auto& jr = j.at("run");
        r.get(jr, "run", "t_final", cfg.run.t_final);
        r.get(jr, "run", "output_times", cfg.run.output_times);
        r.get(jr, "run", "output_dir", cfg.run.output_dir);
    }

    // cross-field validation; every rule is checked even after earlier hits
    r.require(cfg.mesh.dim == 2 || cfg.mesh.dim == 3, "mesh.dim: must be 2 or 3 (got " +
                                                          std::to_string(cfg.mesh.dim) + ")");
    r.require(cfg.mesh.cells >= 2, "mesh.cells: must be >= 2");
    r.require(cfg.mesh.length > 0.0, "mesh.length: must be > 0");
    r.require(cfg.gas.a > 0.0, "gas.a: must satisfy a > 0");
    r.require(cfg.gas.gamma > 1.0, "gas.gamma: must satisfy gamma > 1 (got " +
                                       std::to_string(cfg.gas.gamma) + ")");
    r.require(cfg.scheme.eps > -1.0, "scheme.eps: must satisfy -1 < eps (got " +
                                         std::to_string(cfg.scheme.eps) + ")");
    r.require(cfg.scheme.cfl > 0.0, "scheme.cfl: must be > 0");
    r.require(cfg.scheme.picard_tol > 0.0, "scheme.picard_tol: must be > 0");
    r.require(cfg.scheme.picard_max_iter >= 1, "scheme.picard_max_iter: must be >= 1");
    r.require(cfg.scheme.tol_energy_rel >= 0.0, "scheme.tol_energy_rel: must be >= 0");
    r.require(cfg.scheme.quad_pts >= 1, "scheme.quad_pts: must be >= 1");
    if (cfg.mesh.cells >= 2 && cfg.mesh.length > 0.0)
        r.require(cfg.mesh.length / cfg.mesh.cells < 1.0,
                  "mesh: cell size h = length/cells must lie in (0,1) for the h^eps flux diffusion");
    r.require(cfg.data.param_dim >= 1, "data.param_dim: must be >= 1");
    r.require(cfg.colloc.cells_per_axis >= 1, "collocation.cells_per_axis: must be >= 1");
    r.require(cfg.colloc.workers >= 1, "collocation.workers: must be >= 1");
    r.require(cfg.colloc.omega_refine >= 1, "collocation.omega_refine: must be >= 1");
    r.require(cfg.run.t_final > 0.0, "run.t_final: must be > 0");
    for (double t : cfg.run.output_times)
        r.require(t >= 0.0 && t <= cfg.run.t_final,
                  "run.output_times: time " + std::to_string(t) + " outside [0, t_final]");
    try {
        parse_node_rule(cfg.colloc.rule);
    } catch (const ConfigError& e) {
        violations.push_back(e.what());
    }

    if ((cfg.mesh.dim == 2 || cfg.mesh.dim == 3) && cfg.mesh.length > 0.0) {
        cfg.data.space_dim = cfg.mesh.dim;
        cfg.data.domain_length = cfg.mesh.length;
        for (const std::string& v : validate_model(cfg.data)) violations.push_back(v);
    }

    if (!violations.empty()) throw ConfigError(violations);
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError("config: parse error in '" + path + "' near line " +
                          std::to_string(detail::line_of_byte(text, e.byte)) + ": " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const ConfigError& e) {
        std::vector<std::string> tagged;
        for (const auto& v : e.violations()) tagged.push_back(path + ": " + v);
        throw ConfigError(tagged);
    }
}

} // namespace scfv
