#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "scfv/mesh.hpp"

namespace scfv {

/// Face-based quantity, `comps` values per face. For scalar difference
/// quotients comps == 1 and the value is the signed coefficient along the
/// face normal; for vector fields comps == dim.
struct FaceField {
    const TorusMesh* mesh = nullptr;
    int comps = 1;
    std::vector<double> v;

    FaceField() = default;
    FaceField(const TorusMesh& m, int c)
        : mesh(&m), comps(c), v(static_cast<std::size_t>(m.face_count()) * c, 0.0) {}

    double& at(int face, int comp = 0) { return v[static_cast<std::size_t>(face) * comps + comp]; }
    double at(int face, int comp = 0) const { return v[static_cast<std::size_t>(face) * comps + comp]; }
};

/// {{v}} on a face: mean of the inward and outward traces.
inline double face_avg(const GridField& g, const Face& f) {
    return 0.5 * (g[f.inward] + g[f.outward]);
}

/// [[v]] on a face: outward minus inward trace, signed by the face normal.
inline double face_jump(const GridField& g, const Face& f) {
    return g[f.outward] - g[f.inward];
}

inline double face_avg(const VecGridField& g, const Face& f, int comp) {
    return 0.5 * (g.at(f.inward, comp) + g.at(f.outward, comp));
}

inline double face_jump(const VecGridField& g, const Face& f, int comp) {
    return g.at(f.outward, comp) - g.at(f.inward, comp);
}

/// Normal component of the face average of a vector field. Exact for the
/// axis-aligned normals of the structured mesh.
inline double face_avg_normal(const VecGridField& g, const Face& f) {
    return face_avg(g, f, f.axis);
}

/// Cell gradient (sum over faces of |sigma|/|K| {{r}} n, outward normals).
inline VecGridField grad_h(const GridField& r) {
    const TorusMesh& m = *r.mesh;
    VecGridField out(m);
    const double coeff = m.face_area() / m.cell_volume();
    for (const Face& f : m.faces()) {
        double contrib = coeff * face_avg(r, f);
        out.at(f.inward, f.axis) += contrib;
        out.at(f.outward, f.axis) -= contrib;
    }
    return out;
}

/// Cell divergence (sum over faces of |sigma|/|K| {{v}} . n).
inline GridField div_h(const VecGridField& v) {
    const TorusMesh& m = *v.mesh;
    GridField out(m);
    const double coeff = m.face_area() / m.cell_volume();
    for (const Face& f : m.faces()) {
        double contrib = coeff * face_avg_normal(v, f);
        out[f.inward] += contrib;
        out[f.outward] -= contrib;
    }
    return out;
}

/// Cell Laplacian (sum over faces of |sigma|/|K| [[r]]/h, jumps taken with
/// the outward normal of each incident cell).
inline GridField laplace_h(const GridField& r) {
    const TorusMesh& m = *r.mesh;
    GridField out(m);
    const double coeff = m.face_area() / (m.cell_volume() * m.h());
    for (const Face& f : m.faces()) {
        double contrib = coeff * face_jump(r, f);
        out[f.inward] += contrib;
        out[f.outward] -= contrib;
    }
    return out;
}

/// Face difference quotient [[r]]/h (signed along the face normal).
inline FaceField grad_D(const GridField& r) {
    const TorusMesh& m = *r.mesh;
    FaceField out(m, 1);
    for (int i = 0; i < m.face_count(); ++i)
        out.at(i) = face_jump(r, m.faces()[i]) / m.h();
    return out;
}

inline FaceField grad_D(const VecGridField& u) {
    const TorusMesh& m = *u.mesh;
    FaceField out(m, m.dim());
    for (int i = 0; i < m.face_count(); ++i)
        for (int a = 0; a < m.dim(); ++a)
            out.at(i, a) = face_jump(u, m.faces()[i], a) / m.h();
    return out;
}

/// Face-dissipation seminorm squared: sum over faces of |sigma| h |g_sigma|^2.
/// For grad_D(u) this equals (1/h) sum over faces of |sigma| |[[u]]|^2.
inline double grad_D_seminorm_sq(const FaceField& g) {
    const TorusMesh& m = *g.mesh;
    double sum = 0.0;
    const double w = m.face_area() * m.h();
    for (int i = 0; i < m.face_count(); ++i) {
        double sq = 0.0;
        for (int a = 0; a < g.comps; ++a) sq += g.at(i, a) * g.at(i, a);
        sum += w * sq;
    }
    return sum;
}

inline constexpr double inf_p = std::numeric_limits<double>::infinity();

/// Volume-weighted L^p norm, p in [1, inf].
inline double lp_norm(const GridField& g, double p) {
    const TorusMesh& m = *g.mesh;
    if (std::isinf(p)) {
        double mx = 0.0;
        for (double x : g.v) mx = std::max(mx, std::abs(x));
        return mx;
    }
    double sum = 0.0;
    for (double x : g.v) sum += m.cell_volume() * std::pow(std::abs(x), p);
    return std::pow(sum, 1.0 / p);
}

/// L^p norm of a vector field, cellwise Euclidean magnitude.
inline double lp_norm(const VecGridField& g, double p) {
    const TorusMesh& m = *g.mesh;
    if (std::isinf(p)) {
        double mx = 0.0;
        for (int c = 0; c < m.cell_count(); ++c) mx = std::max(mx, norm2(g.vec(c)));
        return mx;
    }
    double sum = 0.0;
    for (int c = 0; c < m.cell_count(); ++c)
        sum += m.cell_volume() * std::pow(norm2(g.vec(c)), p);
    return std::pow(sum, 1.0 / p);
}

inline double integral(const GridField& g) {
    double sum = 0.0;
    for (double x : g.v) sum += x;
    return g.mesh->cell_volume() * sum;
}

inline Vec3 integral(const VecGridField& g) {
    Vec3 sum = zero_vec();
    for (int c = 0; c < g.mesh->cell_count(); ++c)
        for (int a = 0; a < g.dim; ++a) sum[a] += g.at(c, a);
    return g.mesh->cell_volume() * sum;
}

inline double l2_inner(const GridField& a, const GridField& b) {
    double sum = 0.0;
    for (int c = 0; c < a.mesh->cell_count(); ++c) sum += a[c] * b[c];
    return a.mesh->cell_volume() * sum;
}

} // namespace scfv
