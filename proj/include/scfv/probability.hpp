#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "scfv/errors.hpp"
#include "scfv/quadrature.hpp"

namespace scfv {

using OmegaPoint = std::vector<double>;
using OmegaFn = std::function<double(const OmegaPoint&)>;

/// Probability basis [0,1]^N with a density rho(y) against Lebesgue measure
/// (empty density means uniform). Diameters are measured in the sup metric,
/// so the diameter of a box is its largest edge.
struct ProbabilityBox {
    int dim = 1;
    OmegaFn density; // empty => uniform

    double density_at(const OmegaPoint& y) const { return density ? density(y) : 1.0; }
    bool is_uniform() const { return !density; }
};

/// Checks that the density integrates to 1 over the hypercube.
inline ProbabilityBox make_probability_box(int dim, OmegaFn density = {}, double tol = 1e-8) {
    if (dim < 1) throw ConfigError("probability: param_dim must be >= 1");
    ProbabilityBox space{dim, std::move(density)};
    if (!space.is_uniform()) {
        // composite Gauss with a point budget that degrades gracefully in dim
        int panels = 16;
        const int gpts = 3;
        while (dim > 1 && std::pow(static_cast<double>(panels) * gpts, dim) > 6.0e6) panels /= 2;
        panels = std::max(panels, 2);
        double total = 0.0;
        const double width = 1.0 / panels;
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        bool done = false;
        while (!done) {
            OmegaPoint lo(static_cast<std::size_t>(dim)), size(static_cast<std::size_t>(dim), width);
            for (int a = 0; a < dim; ++a) lo[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] * width;
            total += tensor_quadrature(dim, lo, size, gpts,
                                       [&](const OmegaPoint& y) { return space.density_at(y); });
            int a = 0;
            for (; a < dim; ++a) {
                if (++idx[static_cast<std::size_t>(a)] < panels) break;
                idx[static_cast<std::size_t>(a)] = 0;
            }
            done = (a == dim);
        }
        if (std::abs(total - 1.0) > tol)
            throw ConfigError("probability: density must integrate to 1 over [0,1]^N (got " +
                              std::to_string(total) + ")");
    }
    return space;
}

/// Tensor partition of [0,1]^N into cells_per_axis^N half-open boxes; the
/// closed upper boundary belongs to the last box along each axis. Boxes are
/// indexed lexicographically with axis 0 fastest.
class Partition {
public:
    Partition(const ProbabilityBox& space, int cells_per_axis, int quad_pts = 5)
        : space_(space), cells_(cells_per_axis) {
        if (cells_per_axis < 1) throw ConfigError("partition: cells_per_axis must be >= 1");
        edges_.resize(static_cast<std::size_t>(cells_) + 1);
        for (int m = 0; m <= cells_; ++m)
            edges_[static_cast<std::size_t>(m)] = static_cast<double>(m) / cells_;
        nu_ = 1;
        for (int a = 0; a < space_.dim; ++a) nu_ *= cells_;
        diam_ = 0.0;
        for (int m = 0; m < cells_; ++m)
            diam_ = std::max(diam_, edges_[static_cast<std::size_t>(m) + 1] - edges_[static_cast<std::size_t>(m)]);

        measures_.resize(static_cast<std::size_t>(nu_));
        double total = 0.0;
        for (int m = 0; m < nu_; ++m) {
            OmegaPoint lo = box_lo(m), hi = box_hi(m);
            double meas;
            if (space_.is_uniform()) {
                meas = 1.0;
                for (int a = 0; a < space_.dim; ++a)
                    meas *= hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
            } else {
                OmegaPoint size(static_cast<std::size_t>(space_.dim));
                for (int a = 0; a < space_.dim; ++a)
                    size[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
                meas = tensor_quadrature(space_.dim, lo, size, quad_pts,
                                         [&](const OmegaPoint& y) { return space_.density_at(y); });
            }
            measures_[static_cast<std::size_t>(m)] = meas;
            total += meas;
        }
        if (std::abs(total - 1.0) > 1e-10)
            throw ConfigError("partition: box measures sum to " + std::to_string(total) +
                              ", expected 1 (density/quadrature configuration error)");
    }

    const ProbabilityBox& space() const { return space_; }
    int dim() const { return space_.dim; }
    int cells_per_axis() const { return cells_; }
    int nu() const { return nu_; }
    double diam() const { return diam_; }
    double measure(int m) const { return measures_[static_cast<std::size_t>(m)]; }
    const std::vector<double>& measures() const { return measures_; }

    std::vector<int> box_coords(int m) const {
        std::vector<int> c(static_cast<std::size_t>(space_.dim));
        for (int a = 0; a < space_.dim; ++a) {
            c[static_cast<std::size_t>(a)] = m % cells_;
            m /= cells_;
        }
        return c;
    }

    int box_index(const std::vector<int>& c) const {
        int idx = 0;
        for (int a = space_.dim - 1; a >= 0; --a) idx = idx * cells_ + c[static_cast<std::size_t>(a)];
        return idx;
    }

    OmegaPoint box_lo(int m) const {
        auto c = box_coords(m);
        OmegaPoint lo(static_cast<std::size_t>(space_.dim));
        for (int a = 0; a < space_.dim; ++a)
            lo[static_cast<std::size_t>(a)] = edges_[static_cast<std::size_t>(c[static_cast<std::size_t>(a)])];
        return lo;
    }

    OmegaPoint box_hi(int m) const {
        auto c = box_coords(m);
        OmegaPoint hi(static_cast<std::size_t>(space_.dim));
        for (int a = 0; a < space_.dim; ++a)
            hi[static_cast<std::size_t>(a)] = edges_[static_cast<std::size_t>(c[static_cast<std::size_t>(a)]) + 1];
        return hi;
    }

    /// Index of the box containing w; half-open boxes, upper domain boundary
    /// assigned to the last box. Rejects points outside [0,1]^N.
    int locate(const OmegaPoint& w) const {
        if (static_cast<int>(w.size()) != space_.dim)
            throw ConfigError("partition: point dimension mismatch");
        std::vector<int> c(static_cast<std::size_t>(space_.dim));
        for (int a = 0; a < space_.dim; ++a) {
            const double wa = w[static_cast<std::size_t>(a)];
            if (!(wa >= 0.0 && wa <= 1.0))
                throw ConfigError("partition: evaluation point outside [0,1]^N (coordinate " +
                                  std::to_string(wa) + ")");
            int g = std::min(static_cast<int>(wa * cells_), cells_ - 1);
            // correct the multiplicative guess against the stored edges
            if (wa < edges_[static_cast<std::size_t>(g)]) --g;
            else if (g + 1 < cells_ && wa >= edges_[static_cast<std::size_t>(g) + 1]) ++g;
            c[static_cast<std::size_t>(a)] = g;
        }
        return box_index(c);
    }

private:
    ProbabilityBox space_;
    int cells_;
    int nu_ = 0;
    double diam_ = 0.0;
    std::vector<double> edges_;
    std::vector<double> measures_;
};

inline Partition build_partition(const ProbabilityBox& space, int cells_per_axis, int quad_pts = 5) {
    return Partition(space, cells_per_axis, quad_pts);
}

enum class NodeRule { midpoint, corner, random };

inline NodeRule parse_node_rule(const std::string& s) {
    if (s == "midpoint") return NodeRule::midpoint;
    if (s == "corner") return NodeRule::corner;
    if (s == "random") return NodeRule::random;
    throw ConfigError("collocation: unknown node rule '" + s + "' (midpoint|corner|random)");
}

/// One collocation node per partition box, guaranteed to lie in its box.
struct NodeSet {
    NodeRule rule = NodeRule::midpoint;
    std::uint64_t seed = 0;
    std::vector<OmegaPoint> points;
};

inline NodeSet choose_nodes(const Partition& p, NodeRule rule, std::uint64_t seed = 0) {
    NodeSet ns;
    ns.rule = rule;
    ns.seed = seed;
    ns.points.resize(static_cast<std::size_t>(p.nu()));
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int m = 0; m < p.nu(); ++m) {
        OmegaPoint lo = p.box_lo(m), hi = p.box_hi(m);
        OmegaPoint pt(static_cast<std::size_t>(p.dim()));
        for (int a = 0; a < p.dim(); ++a) {
            const double l = lo[static_cast<std::size_t>(a)], u = hi[static_cast<std::size_t>(a)];
            double v = 0.0;
            switch (rule) {
            case NodeRule::midpoint: v = 0.5 * (l + u); break;
            case NodeRule::corner: v = l; break;
            case NodeRule::random:
                v = l + u01() * (u - l);
                if (v >= u) v = std::nextafter(u, l);
                break;
            }
            pt[static_cast<std::size_t>(a)] = v;
        }
        ns.points[static_cast<std::size_t>(m)] = std::move(pt);
    }
    return ns;
}

/// Piecewise constant interpolant over a partition: one value per box,
/// evaluation is containing-box lookup.
template <class T>
struct StepInterpolant {
    const Partition* part = nullptr;
    std::vector<T> values;

    const T& eval(const OmegaPoint& w) const {
        return values[static_cast<std::size_t>(part->locate(w))];
    }
};

template <class T, class Fn>
StepInterpolant<T> interpolate(Fn&& f, const Partition& p, const NodeSet& nodes) {
    StepInterpolant<T> s;
    s.part = &p;
    s.values.reserve(static_cast<std::size_t>(p.nu()));
    for (int m = 0; m < p.nu(); ++m) s.values.push_back(f(nodes.points[static_cast<std::size_t>(m)]));
    return s;
}

inline StepInterpolant<double> interpolate_scalar(const OmegaFn& f, const Partition& p,
                                                  const NodeSet& nodes) {
    return interpolate<double>(f, p, nodes);
}

/// Riemann sum sum_m value_m P[box_m], accumulated in fixed box order.
inline double expectation(const StepInterpolant<double>& s) {
    double sum = 0.0;
    for (int m = 0; m < s.part->nu(); ++m)
        sum += s.values[static_cast<std::size_t>(m)] * s.part->measure(m);
    return sum;
}

inline std::vector<double> expectation(const StepInterpolant<std::vector<double>>& s) {
    std::vector<double> sum;
    if (!s.values.empty()) sum.assign(s.values.front().size(), 0.0);
    for (int m = 0; m < s.part->nu(); ++m) {
        const double w = s.part->measure(m);
        const auto& v = s.values[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < v.size(); ++i) sum[i] += w * v[i];
    }
    return sum;
}

enum class OmegaEstimator { quadrature, monte_carlo };

struct LqErrorResult {
    double value = 0.0;
    double std_error = 0.0; // zero for quadrature
    OmegaEstimator method = OmegaEstimator::quadrature;
};

namespace detail {

/// Integrate g(y) rho(y) over [0,1]^N by per-box subdivision quadrature.
template <class Fn>
double omega_quadrature(const Partition& p, int refine, int gpts, Fn&& g) {
    const int dim = p.dim();
    double total = 0.0;
    for (int m = 0; m < p.nu(); ++m) {
        OmegaPoint lo = p.box_lo(m), hi = p.box_hi(m);
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        bool done = false;
        while (!done) {
            OmegaPoint slo(static_cast<std::size_t>(dim)), ssize(static_cast<std::size_t>(dim));
            for (int a = 0; a < dim; ++a) {
                const double w = (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) / refine;
                slo[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)] * w;
                ssize[static_cast<std::size_t>(a)] = w;
            }
            total += tensor_quadrature(dim, slo, ssize, gpts, [&](const OmegaPoint& y) {
                return g(y) * p.space().density_at(y);
            });
            int a = 0;
            for (; a < dim; ++a) {
                if (++idx[static_cast<std::size_t>(a)] < refine) break;
                idx[static_cast<std::size_t>(a)] = 0;
            }
            done = (a == dim);
        }
    }
    return total;
}

} // namespace detail

/// E[|f^M - f|^q]: per-box subdivision quadrature (refinement factor >= 8
/// relative to the partition) for N <= 3, seeded Monte Carlo with reported
/// standard error otherwise.
inline LqErrorResult lq_error(const StepInterpolant<double>& s, const OmegaFn& f, double q,
                              int refine = 8, int mc_samples = 200000, std::uint64_t mc_seed = 7771) {
    if (!(q >= 1.0)) throw ConfigError("lq_error: q must be >= 1");
    const Partition& p = *s.part;
    LqErrorResult res;
    if (p.dim() <= 3) {
        res.method = OmegaEstimator::quadrature;
        res.value = detail::omega_quadrature(p, std::max(refine, 8), 3, [&](const OmegaPoint& y) {
            return std::pow(std::abs(s.eval(y) - f(y)), q);
        });
    } else {
        res.method = OmegaEstimator::monte_carlo;
        std::mt19937_64 rng(mc_seed);
        auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double sum = 0.0, sum_sq = 0.0;
        OmegaPoint y(static_cast<std::size_t>(p.dim()));
        for (int i = 0; i < mc_samples; ++i) {
            for (int a = 0; a < p.dim(); ++a) y[static_cast<std::size_t>(a)] = u01();
            const double g = std::pow(std::abs(s.eval(y) - f(y)), q) * p.space().density_at(y);
            sum += g;
            sum_sq += g * g;
        }
        res.value = sum / mc_samples;
        const double var = std::max(0.0, sum_sq / mc_samples - res.value * res.value);
        res.std_error = std::sqrt(var / mc_samples);
    }
    return res;
}

/// Riemann-sum moments of a scalar interpolant.
struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    std::vector<std::pair<int, double>> raw;
    std::vector<std::pair<int, double>> central;
};

inline MomentReport moments(const StepInterpolant<double>& s, const std::vector<int>& orders = {1, 2}) {
    MomentReport rep;
    rep.mean = expectation(s);
    const Partition& p = *s.part;
    double var = 0.0;
    for (int m = 0; m < p.nu(); ++m) {
        const double dv = s.values[static_cast<std::size_t>(m)] - rep.mean;
        var += p.measure(m) * dv * dv;
    }
    rep.variance = var;
    for (int r : orders) {
        double raw = 0.0, cen = 0.0;
        for (int m = 0; m < p.nu(); ++m) {
            const double v = s.values[static_cast<std::size_t>(m)];
            raw += p.measure(m) * std::pow(v, r);
            cen += p.measure(m) * std::pow(v - rep.mean, r);
        }
        rep.raw.emplace_back(r, raw);
        rep.central.emplace_back(r, cen);
    }
    return rep;
}

} // namespace scfv
