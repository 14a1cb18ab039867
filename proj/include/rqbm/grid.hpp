#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rqbm {

// Uniform 1D grid. For periodic use the right endpoint x0 + n*dx is the
// image of x0 and is not stored; for bounded (momentum) grids both
// endpoints are stored and the span is (n-1)*dx.
struct UniformGrid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double point(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = point(i);
        return xs;
    }
};

inline UniformGrid periodic_grid(double length, std::size_t n, double x0 = 0.0) {
    if (n == 0 || length <= 0.0) throw std::invalid_argument("periodic_grid: need n > 0, length > 0");
    return {x0, length / static_cast<double>(n), n};
}

// Symmetric bounded grid on [-span, span], endpoints included.
inline UniformGrid bounded_grid(double span, std::size_t n) {
    if (n < 2 || span <= 0.0) throw std::invalid_argument("bounded_grid: need n >= 2, span > 0");
    return {-span, 2.0 * span / static_cast<double>(n - 1), n};
}

inline double periodic_length(const UniformGrid& g) { return g.dx * static_cast<double>(g.n); }

// Trapezoid weights: 1 everywhere for a periodic grid, half at the ends of
// a bounded one. Multiply by dx for the quadrature weight.
inline double trapezoid_weight(const UniformGrid& g, std::size_t i, bool periodic) {
    if (periodic) return 1.0;
    return (i == 0 || i + 1 == g.n) ? 0.5 : 1.0;
}

inline double integrate(const UniformGrid& g, const std::vector<double>& f, bool periodic) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) s += trapezoid_weight(g, i, periodic) * f[i];
    return s * g.dx;
}

}  // namespace rqbm
