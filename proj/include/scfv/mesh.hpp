#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "scfv/errors.hpp"
#include "scfv/quadrature.hpp"
#include "scfv/vec.hpp"

namespace scfv {

/// A face of the periodic mesh. The unit normal points along +axis, from the
/// inward cell towards the outward cell. Inward/outward traces of a field at
/// the face are the values of those two cells.
struct Face {
    int inward;
    int outward;
    int axis;
};

/// Uniform structured periodic mesh of the d-torus, d = 2 or 3. Cells are
/// cubes of edge h = length / cells_per_dim, indexed lexicographically with
/// axis 0 fastest. Faces are listed axis-major, then by inward cell index,
/// which fixes the deterministic iteration order used by all assembly loops.
class TorusMesh {
public:
    TorusMesh(int dim, int cells_per_dim, double length)
        : dim_(dim), n_(cells_per_dim), length_(length) {
        if (dim != 2 && dim != 3)
            throw ConfigError("mesh: dim must be 2 or 3, got " + std::to_string(dim));
        if (cells_per_dim < 2)
            throw ConfigError("mesh: cells_per_dim must be >= 2 (periodic faces would coincide), got " +
                              std::to_string(cells_per_dim));
        if (!(length > 0.0))
            throw ConfigError("mesh: domain_length must be > 0");
        h_ = length_ / n_;
        cell_count_ = 1;
        for (int a = 0; a < dim_; ++a) cell_count_ *= n_;
        cell_volume_ = std::pow(h_, dim_);
        face_area_ = std::pow(h_, dim_ - 1);
        faces_.reserve(static_cast<std::size_t>(dim_) * cell_count_);
        for (int axis = 0; axis < dim_; ++axis)
            for (int c = 0; c < cell_count_; ++c)
                faces_.push_back(Face{c, neighbor(c, axis, +1), axis});
    }

    int dim() const { return dim_; }
    int cells_per_dim() const { return n_; }
    double length() const { return length_; }
    double h() const { return h_; }
    int cell_count() const { return cell_count_; }
    double cell_volume() const { return cell_volume_; }
    double face_area() const { return face_area_; }
    double total_volume() const { return cell_volume_ * cell_count_; }
    const std::vector<Face>& faces() const { return faces_; }
    int face_count() const { return static_cast<int>(faces_.size()); }

    std::array<int, 3> cell_coords(int idx) const {
        std::array<int, 3> c{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            c[a] = idx % n_;
            idx /= n_;
        }
        return c;
    }

    int cell_index(const std::array<int, 3>& c) const {
        int idx = 0;
        for (int a = dim_ - 1; a >= 0; --a) idx = idx * n_ + wrap(c[a]);
        return idx;
    }

    /// Periodic neighbor of `cell` one step along `axis` in direction +1/-1.
    int neighbor(int cell, int axis, int dir) const {
        auto c = cell_coords(cell);
        c[axis] = wrap(c[axis] + dir);
        return cell_index(c);
    }

    Vec3 cell_lo(int idx) const {
        auto c = cell_coords(idx);
        return {c[0] * h_, c[1] * h_, c[2] * h_};
    }

    Vec3 cell_center(int idx) const {
        auto c = cell_coords(idx);
        return {(c[0] + 0.5) * h_, (c[1] + 0.5) * h_, (c[2] + 0.5) * h_};
    }

    /// Center of a face: the midpoint of the shared boundary between the
    /// inward cell and its +axis neighbor.
    Vec3 face_center(const Face& f) const {
        Vec3 x = cell_center(f.inward);
        x[f.axis] += 0.5 * h_;
        if (x[f.axis] >= length_) x[f.axis] -= length_;
        return x;
    }

private:
    int wrap(int i) const {
        i %= n_;
        return i < 0 ? i + n_ : i;
    }

    int dim_;
    int n_;
    double length_;
    double h_;
    int cell_count_;
    double cell_volume_;
    double face_area_;
    std::vector<Face> faces_;
};

inline TorusMesh build_mesh(int dim, int cells_per_dim, double domain_length = 1.0) {
    return TorusMesh(dim, cells_per_dim, domain_length);
}

/// Piecewise-constant scalar field: one value per cell.
struct GridField {
    const TorusMesh* mesh = nullptr;
    std::vector<double> v;

    GridField() = default;
    explicit GridField(const TorusMesh& m, double fill = 0.0)
        : mesh(&m), v(static_cast<std::size_t>(m.cell_count()), fill) {}

    double& operator[](int cell) { return v[static_cast<std::size_t>(cell)]; }
    double operator[](int cell) const { return v[static_cast<std::size_t>(cell)]; }
    int size() const { return static_cast<int>(v.size()); }
};

/// Piecewise-constant vector field: dim values per cell, stored interleaved.
struct VecGridField {
    const TorusMesh* mesh = nullptr;
    int dim = 0;
    std::vector<double> v;

    VecGridField() = default;
    explicit VecGridField(const TorusMesh& m, double fill = 0.0)
        : mesh(&m), dim(m.dim()), v(static_cast<std::size_t>(m.cell_count()) * m.dim(), fill) {}

    double& at(int cell, int comp) { return v[static_cast<std::size_t>(cell) * dim + comp]; }
    double at(int cell, int comp) const { return v[static_cast<std::size_t>(cell) * dim + comp]; }

    Vec3 vec(int cell) const {
        Vec3 out = zero_vec();
        for (int a = 0; a < dim; ++a) out[a] = at(cell, a);
        return out;
    }

    void set_vec(int cell, const Vec3& x) {
        for (int a = 0; a < dim; ++a) at(cell, a) = x[a];
    }
};

using ScalarFn = std::function<double(const Vec3&)>;
using VectorFn = std::function<Vec3(const Vec3&)>;

namespace detail {

/// Visit the tensor Gauss points of one cell with their scaled weights.
template <class Fn>
void cell_quad_visit(const TorusMesh& mesh, int cell, int quad_pts, Fn&& visit) {
    Vec3 lo = mesh.cell_lo(cell);
    Vec3 size{mesh.h(), mesh.h(), mesh.h()};
    tensor_quadrature_visit(mesh.dim(), lo, size, quad_pts,
                            [&](const std::vector<double>& x, double w) {
                                Vec3 p = zero_vec();
                                for (int a = 0; a < mesh.dim(); ++a) p[a] = x[a];
                                visit(p, w);
                            });
}

template <class Fn>
double cell_average(const TorusMesh& mesh, int cell, int quad_pts, Fn&& f) {
    Vec3 lo = mesh.cell_lo(cell);
    Vec3 size{mesh.h(), mesh.h(), mesh.h()};
    double integral = tensor_quadrature(mesh.dim(), lo, size, quad_pts,
                                        [&](const std::vector<double>& x) {
                                            Vec3 p = zero_vec();
                                            for (int a = 0; a < mesh.dim(); ++a) p[a] = x[a];
                                            return f(p);
                                        });
    return integral / mesh.cell_volume();
}

} // namespace detail

/// L^1 -> Q_h projection: cell averages by tensor Gauss quadrature.
inline GridField project(const ScalarFn& f, const TorusMesh& mesh, int quad_pts = 3) {
    GridField out(mesh);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        double val = detail::cell_average(mesh, c, quad_pts, f);
        if (!std::isfinite(val))
            throw SolverError("project: non-finite cell average in cell " + std::to_string(c));
        out[c] = val;
    }
    return out;
}

inline VecGridField project_vec(const VectorFn& f, const TorusMesh& mesh, int quad_pts = 3) {
    VecGridField out(mesh);
    for (int a = 0; a < mesh.dim(); ++a) {
        for (int c = 0; c < mesh.cell_count(); ++c) {
            double val = detail::cell_average(mesh, c, quad_pts,
                                              [&](const Vec3& x) { return f(x)[a]; });
            if (!std::isfinite(val))
                throw SolverError("project: non-finite cell average in cell " + std::to_string(c));
            out.at(c, a) = val;
        }
    }
    return out;
}

/// Evaluate a GridField as a step function on the torus (containing-cell lookup).
inline double eval_step(const GridField& g, const Vec3& x) {
    const TorusMesh& m = *g.mesh;
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < m.dim(); ++a) {
        double t = x[a] / m.length();
        t -= std::floor(t);
        c[a] = std::min(static_cast<int>(t * m.cells_per_dim()), m.cells_per_dim() - 1);
    }
    return g[m.cell_index(c)];
}

/// Roll a field by whole cells along each axis (periodic index shift).
inline GridField shift_cells(const GridField& g, const std::array<int, 3>& offset) {
    const TorusMesh& m = *g.mesh;
    GridField out(m);
    for (int c = 0; c < m.cell_count(); ++c) {
        auto cc = m.cell_coords(c);
        for (int a = 0; a < m.dim(); ++a) cc[a] += offset[a];
        out[m.cell_index(cc)] = g[c];
    }
    return out;
}

inline VecGridField shift_cells(const VecGridField& g, const std::array<int, 3>& offset) {
    const TorusMesh& m = *g.mesh;
    VecGridField out(m);
    for (int c = 0; c < m.cell_count(); ++c) {
        auto cc = m.cell_coords(c);
        for (int a = 0; a < m.dim(); ++a) cc[a] += offset[a];
        int dst = m.cell_index(cc);
        for (int a = 0; a < m.dim(); ++a) out.at(dst, a) = g.at(c, a);
    }
    return out;
}

} // namespace scfv
