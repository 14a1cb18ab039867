#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rqbm/grid.hpp"

namespace rqbm {

// Analytic potential family with closed-form derivatives through 4th order.
// Tabulated potentials are deliberately unsupported: the effective-potential
// algebra needs a stable bilaplacian.

struct Free {};

struct Harmonic {
    double k;  // stiffness > 0
};

struct Cosine {
    double U0;  // amplitude
    double q;   // wavenumber > 0
};

// U = -2 alpha x^2 + beta x^4; minima at +-sqrt(alpha/beta), barrier alpha^2/beta.
struct DoubleWell {
    double alpha;  // > 0
    double beta;   // > 0
};

struct LinearGravity {
    double mg;  // force
};

using PotentialModel = std::variant<Free, Harmonic, Cosine, DoubleWell, LinearGravity>;

// value / grad / laplacian / bilaplacian, overloaded per variant so hot
// loops can work on the concrete type.

inline double value(const Free&, double) { return 0.0; }
inline double grad(const Free&, double) { return 0.0; }
inline double laplacian(const Free&, double) { return 0.0; }
inline double bilaplacian(const Free&, double) { return 0.0; }

inline double value(const Harmonic& p, double x) { return 0.5 * p.k * x * x; }
inline double grad(const Harmonic& p, double x) { return p.k * x; }
inline double laplacian(const Harmonic& p, double) { return p.k; }
inline double bilaplacian(const Harmonic&, double) { return 0.0; }

inline double value(const Cosine& p, double x) { return p.U0 * std::cos(p.q * x); }
inline double grad(const Cosine& p, double x) { return -p.U0 * p.q * std::sin(p.q * x); }
inline double laplacian(const Cosine& p, double x) { return -p.U0 * p.q * p.q * std::cos(p.q * x); }
inline double bilaplacian(const Cosine& p, double x) {
    const double q2 = p.q * p.q;
    return p.U0 * q2 * q2 * std::cos(p.q * x);
}

inline double value(const DoubleWell& p, double x) {
    const double x2 = x * x;
    return -2.0 * p.alpha * x2 + p.beta * x2 * x2;
}
inline double grad(const DoubleWell& p, double x) { return -4.0 * p.alpha * x + 4.0 * p.beta * x * x * x; }
inline double laplacian(const DoubleWell& p, double x) { return -4.0 * p.alpha + 12.0 * p.beta * x * x; }
inline double bilaplacian(const DoubleWell& p, double) { return 24.0 * p.beta; }

inline double value(const LinearGravity& p, double x) { return p.mg * x; }
inline double grad(const LinearGravity& p, double) { return p.mg; }
inline double laplacian(const LinearGravity&, double) { return 0.0; }
inline double bilaplacian(const LinearGravity&, double) { return 0.0; }

inline double value(const PotentialModel& pot, double x) {
    return std::visit([x](const auto& p) { return value(p, x); }, pot);
}
inline double grad(const PotentialModel& pot, double x) {
    return std::visit([x](const auto& p) { return grad(p, x); }, pot);
}
inline double laplacian(const PotentialModel& pot, double x) {
    return std::visit([x](const auto& p) { return laplacian(p, x); }, pot);
}
inline double bilaplacian(const PotentialModel& pot, double x) {
    return std::visit([x](const auto& p) { return bilaplacian(p, x); }, pot);
}

inline void validate(const PotentialModel& pot) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Harmonic>) {
                if (!(p.k > 0.0)) throw std::invalid_argument("Harmonic: k must be > 0");
            } else if constexpr (std::is_same_v<T, Cosine>) {
                if (!(p.q > 0.0)) throw std::invalid_argument("Cosine: q must be > 0");
            } else if constexpr (std::is_same_v<T, DoubleWell>) {
                if (!(p.alpha > 0.0) || !(p.beta > 0.0))
                    throw std::invalid_argument("DoubleWell: alpha, beta must be > 0");
            }
        },
        pot);
}

template <typename F>
std::vector<double> sample_on_grid(const UniformGrid& g, F&& f) {
    std::vector<double> out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = f(g.point(i));
    return out;
}

inline std::vector<double> sample_values(const PotentialModel& pot, const UniformGrid& g) {
    return sample_on_grid(g, [&](double x) { return value(pot, x); });
}
inline std::vector<double> sample_grad(const PotentialModel& pot, const UniformGrid& g) {
    return sample_on_grid(g, [&](double x) { return grad(pot, x); });
}
inline std::vector<double> sample_laplacian(const PotentialModel& pot, const UniformGrid& g) {
    return sample_on_grid(g, [&](double x) { return laplacian(pot, x); });
}
inline std::vector<double> sample_bilaplacian(const PotentialModel& pot, const UniformGrid& g) {
    return sample_on_grid(g, [&](double x) { return bilaplacian(pot, x); });
}

}  // namespace rqbm
