#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "scfv/ensemble.hpp"
#include "scfv/solver.hpp"

namespace scfv {

namespace detail {

/// Shortest decimal that round-trips a double bit-exactly.
inline std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw IoError("io: cannot open '" + path + "' for writing");
    return out;
}

} // namespace detail

/// Structured-grid text format: a fixed header (dim, cells, length, h,
/// components) followed by one line per cell in lexicographic index order,
/// full decimal precision, `components` values per line.
inline void write_field(const GridField& g, const std::string& path) {
    auto out = detail::open_out(path);
    const TorusMesh& m = *g.mesh;
    out << "scfv-field 1\n";
    out << "dim " << m.dim() << "\n";
    out << "cells " << m.cells_per_dim() << "\n";
    out << "length " << detail::fmt_full(m.length()) << "\n";
    out << "h " << detail::fmt_full(m.h()) << "\n";
    out << "components 1\n";
    for (int c = 0; c < m.cell_count(); ++c) out << detail::fmt_full(g[c]) << "\n";
    if (!out) throw IoError("io: write failed for '" + path + "'");
}

inline void write_field(const VecGridField& g, const std::string& path) {
    auto out = detail::open_out(path);
    const TorusMesh& m = *g.mesh;
    out << "scfv-field 1\n";
    out << "dim " << m.dim() << "\n";
    out << "cells " << m.cells_per_dim() << "\n";
    out << "length " << detail::fmt_full(m.length()) << "\n";
    out << "h " << detail::fmt_full(m.h()) << "\n";
    out << "components " << g.dim << "\n";
    for (int c = 0; c < m.cell_count(); ++c) {
        for (int a = 0; a < g.dim; ++a) out << (a ? " " : "") << detail::fmt_full(g.at(c, a));
        out << "\n";
    }
    if (!out) throw IoError("io: write failed for '" + path + "'");
}

struct FieldFileHeader {
    int dim = 0;
    int cells = 0;
    double length = 0.0;
    double h = 0.0;
    int components = 0;
};

inline FieldFileHeader read_field_header(std::istream& in, const std::string& path) {
    FieldFileHeader hd;
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "scfv-field" || version != 1)
        throw IoError("io: '" + path + "' is not an scfv field file");
    std::string key;
    for (int i = 0; i < 5; ++i) {
        in >> key;
        if (key == "dim") in >> hd.dim;
        else if (key == "cells") in >> hd.cells;
        else if (key == "length") in >> hd.length;
        else if (key == "h") in >> hd.h;
        else if (key == "components") in >> hd.components;
        else throw IoError("io: unexpected header key '" + key + "' in '" + path + "'");
    }
    return hd;
}

/// Reads a scalar field written by write_field; the mesh must match the
/// header geometry.
inline GridField read_grid_field(const TorusMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("io: cannot open '" + path + "'");
    FieldFileHeader hd = read_field_header(in, path);
    if (hd.dim != mesh.dim() || hd.cells != mesh.cells_per_dim() || hd.components != 1)
        throw IoError("io: '" + path + "' geometry does not match the target mesh");
    GridField g(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c)
        if (!(in >> g[c])) throw IoError("io: short read in '" + path + "'");
    return g;
}

inline VecGridField read_vec_field(const TorusMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("io: cannot open '" + path + "'");
    FieldFileHeader hd = read_field_header(in, path);
    if (hd.dim != mesh.dim() || hd.cells != mesh.cells_per_dim() || hd.components != mesh.dim())
        throw IoError("io: '" + path + "' geometry does not match the target mesh");
    VecGridField g(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c)
        for (int a = 0; a < mesh.dim(); ++a)
            if (!(in >> g.at(c, a))) throw IoError("io: short read in '" + path + "'");
    return g;
}

/// Ledger CSV: one named column per diagnostic, one row per time level
/// (step_count + 1 rows).
inline void write_ledger_csv(const EnergyLedger& ledger, const std::string& path) {
    auto out = detail::open_out(path);
    out << "time,energy,mass,dissipation,viscous_increment,viscous_cumulative,rho_Linf,u_Linf,picard_iters\n";
    for (const LedgerRow& r : ledger.rows) {
        out << detail::fmt_full(r.time) << ',' << detail::fmt_full(r.energy) << ','
            << detail::fmt_full(r.mass) << ',' << detail::fmt_full(r.num_dissipation) << ','
            << detail::fmt_full(r.visc_increment) << ',' << detail::fmt_full(r.visc_cumulative) << ','
            << detail::fmt_full(r.rho_linf) << ',' << detail::fmt_full(r.u_linf) << ','
            << r.picard_iters << "\n";
    }
    if (!out) throw IoError("io: write failed for '" + path + "'");
}

/// Ensemble summary CSV: the boundedness statistic and energy moments per
/// requested output time.
inline void write_ensemble_summary_csv(const CollocationSolution& sol,
                                       const std::vector<EnsembleStats>& stats,
                                       const std::string& path) {
    auto out = detail::open_out(path);
    out << "time,Lambda,energy_mean,energy_var,variance_clamp\n";
    const double lambda = boundedness_statistic(sol);
    for (const EnsembleStats& st : stats) {
        out << detail::fmt_full(st.time) << ',' << detail::fmt_full(lambda) << ','
            << detail::fmt_full(st.energy_mean) << ',' << detail::fmt_full(st.energy_var) << ','
            << detail::fmt_full(st.variance_clamp) << "\n";
    }
    if (!out) throw IoError("io: write failed for '" + path + "'");
}

} // namespace scfv
