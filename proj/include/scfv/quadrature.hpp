#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace scfv {

/// Gauss-Legendre rule on the reference interval [0,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: need at least one point");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // P_n and P_n' by the three-term recurrence over [-1,1]
    auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        return std::pair<double, double>{p1, dp};
    };
    // roots come in symmetric pairs; solve the positive half and mirror
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            auto [pn, dp] = legendre(x);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                auto [pn2, dp2] = legendre(x); // one polishing step
                x -= pn2 / dp2;
                break;
            }
        }
        const double dp = legendre(x).second;
        const double w = 1.0 / ((1.0 - x * x) * dp * dp); // half of the [-1,1] weight
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.5; // center the odd node exactly
    return rule;
}

} // namespace detail

/// Cached n-point Gauss-Legendre rule on [0,1].
inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_rule(n)).first;
    return it->second;
}

/// Visit the tensor-product Gauss points of the axis-aligned box
/// [lo, lo+size) in `dim` dimensions; `visit(point, weight)` is called once
/// per point with the scaled quadrature weight.
template <class Point, class Fn>
void tensor_quadrature_visit(int dim, const Point& lo, const Point& size, int pts_per_axis,
                             Fn&& visit) {
    const GaussRule& rule = gauss_rule(pts_per_axis);
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim, 0.0);
    bool done = false;
    while (!done) {
        double w = 1.0;
        for (int a = 0; a < dim; ++a) {
            x[a] = lo[a] + rule.nodes[idx[a]] * size[a];
            w *= rule.weights[idx[a]] * size[a];
        }
        visit(x, w);
        // odometer increment
        int a = 0;
        for (; a < dim; ++a) {
            if (++idx[a] < pts_per_axis) break;
            idx[a] = 0;
        }
        done = (a == dim);
    }
}

/// Tensor-product Gauss quadrature of `f` over [lo, lo+size).
template <class Point, class Fn>
double tensor_quadrature(int dim, const Point& lo, const Point& size, int pts_per_axis, Fn&& f) {
    double sum = 0.0;
    tensor_quadrature_visit(dim, lo, size, pts_per_axis,
                            [&](const std::vector<double>& x, double w) { sum += w * f(x); });
    return sum;
}

} // namespace scfv
