#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rqbm/constants.hpp"
#include "rqbm/fourier.hpp"
#include "rqbm/grid.hpp"
#include "rqbm/potentials.hpp"

namespace rqbm {

// Density floor shared with the wave-function polar decomposition.
inline constexpr double kDensityFloorRel = 1e-12;

struct HydroFields {
    UniformGrid x;            // periodic
    std::vector<double> rho;  // probability density, >= 0
    std::vector<double> V;    // hydrodynamic-like velocity
};

enum class MuForm { Exact, QExpressed };
enum class HydroRegime { QuantumRelativistic, Classical };

inline double density_floor(const std::vector<double>& rho) {
    double m = 0.0;
    for (double r : rho) m = std::max(m, r);
    return kDensityFloorRel * m;
}

inline void normalize_density(const UniformGrid& g, std::vector<double>& rho) {
    const double mass = integrate(g, rho, true);
    if (!(mass > 0.0)) throw std::domain_error("normalize_density: nonpositive mass");
    for (double& r : rho) r /= mass;
}

struct BohmPotentialResult {
    std::vector<double> Q;
    std::vector<double> bilap_term;  // lap^2 sqrt(rho) / sqrt(rho), for the exact mu form
    std::size_t n_floored = 0;
};

// Q = -hbar^2 lap sqrt(rho) / (2 m sqrt(rho)), spectral laplacian on the
// floored square root. The bilaplacian sandwich rides along for free.
inline BohmPotentialResult bohm_quantum_potential_full(const PhysicalSystem& sys,
                                                       const UniformGrid& g,
                                                       const std::vector<double>& rho) {
    if (rho.size() != g.n) throw std::invalid_argument("bohm_quantum_potential: size mismatch");
    const double floor = density_floor(rho);
    BohmPotentialResult out;
    std::vector<double> s(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        if (rho[i] < floor) ++out.n_floored;
        s[i] = std::sqrt(std::max(rho[i], floor));
    }
    Fft fft(g.n);
    const auto lap = spectral_derivative(fft, s, g.dx, 2);
    const auto bilap = spectral_derivative(fft, s, g.dx, 4);
    out.Q.resize(g.n);
    out.bilap_term.resize(g.n);
    const double pref = -sys.hbar * sys.hbar / (2.0 * sys.m);
    for (std::size_t i = 0; i < g.n; ++i) {
        out.Q[i] = pref * lap[i] / s[i];
        out.bilap_term[i] = bilap[i] / s[i];
    }
    return out;
}

inline std::vector<double> bohm_quantum_potential(const PhysicalSystem& sys, const UniformGrid& g,
                                                  const std::vector<double>& rho) {
    return bohm_quantum_potential_full(sys, g, rho).Q;
}

// Pointwise chemical-potential combinators. `bilap_term` is
// lap^2 sqrt(rho) / sqrt(rho).
inline double mu_exact_point(const PhysicalSystem& sys, double U, double Q, double bilap_term) {
    const double h4 = sys.hbar * sys.hbar * sys.hbar * sys.hbar;
    return U + Q - h4 * bilap_term / (8.0 * sys.m * sys.m * sys.m * sys.c * sys.c);
}

inline double mu_q_expressed_point(const PhysicalSystem& sys, double U, double Q) {
    return U + (1.0 - Q / (2.0 * sys.m * sys.c * sys.c)) * Q;
}

// rho^{-1/2} H_BF rho^{1/2} (form Exact) or the Q-expressed reading
// U + (1 - Q/2mc^2) Q. Both reduce to U + Q as c -> infinity.
inline std::vector<double> quantum_chemical_potential(const PhysicalSystem& sys,
                                                      const PotentialModel& pot,
                                                      const UniformGrid& g,
                                                      const std::vector<double>& rho,
                                                      MuForm form) {
    const auto q = bohm_quantum_potential_full(sys, g, rho);
    std::vector<double> mu(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double U = value(pot, g.point(i));
        mu[i] = form == MuForm::Exact ? mu_exact_point(sys, U, q.Q[i], q.bilap_term[i])
                                      : mu_q_expressed_point(sys, U, q.Q[i]);
    }
    return mu;
}

namespace detail {

// Periodic 4th-order centered differences. The hydro solver uses local
// stencils throughout: the regularized quantum potential has small kinks at
// the density-floor crossover, and a global (spectral) derivative would smear
// that noise over the whole domain, including the bulk.
inline void fd_d1(const std::vector<double>& f, double dx, std::vector<double>& out) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (-f[(i + 2) % n] + 8.0 * f[(i + 1) % n] - 8.0 * f[(i + n - 1) % n] +
                  f[(i + n - 2) % n]) /
                 (12.0 * dx);
}

inline void fd_d2(const std::vector<double>& f, double dx, std::vector<double>& out) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (-f[(i + 2) % n] + 16.0 * f[(i + 1) % n] - 30.0 * f[i] +
                  16.0 * f[(i + n - 1) % n] - f[(i + n - 2) % n]) /
                 (12.0 * dx * dx);
}

// Unscaled second difference; applied four times this gives an 8th-order
// hyperdiffusion stencil whose sawtooth eigenvalue is 256.
inline void fd_sdiff(const std::vector<double>& f, std::vector<double>& out) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n];
}

}  // namespace detail

struct HydroRhs {
    std::vector<double> drho;
    std::vector<double> dV;
};

// Regularization of the solver around the vacuum: the quantum potential is
// built from sqrt(rho + eps) with eps = 1e-10 max(rho), and the quantum force
// is attenuated by rho / (rho + delta) with delta = 1e-8 max(rho) so that the
// noise it picks up where the density crosses the floor cannot accelerate the
// near-empty tails.
inline constexpr double kHydroSqrtFloorRel = 1e-10;
inline constexpr double kHydroForceWeightRel = 1e-8;

// d_t rho = -d_x(rho V)
// m d_t V = -m V d_x V - b V - d_x(mu + kB_T ln rho)
// with mu the quantum chemical potential or plain U in the classical regime.
// The external force enters through the analytic gradient (the potential need
// not be periodic on the box); the quantum and thermal parts are
// differentiated with local 4th-order stencils. `hyper_nu` adds
// -hyper_nu (delta_h)^4 to both fields.
inline HydroRhs hydro_rhs(const PhysicalSystem& sys, const PotentialModel& pot,
                          const HydroFields& f, HydroRegime regime,
                          MuForm form = MuForm::QExpressed, double hyper_nu = 0.0) {
    const std::size_t n = f.x.n;
    const double dx = f.x.dx;
    double rho_max = 0.0;
    for (double r : f.rho) rho_max = std::max(rho_max, r);
    const double eps = kHydroSqrtFloorRel * rho_max;
    const double delta = kHydroForceWeightRel * rho_max;

    // internal chemical potential (everything except the external U)
    std::vector<double> mu(n, 0.0);
    if (regime == HydroRegime::QuantumRelativistic) {
        std::vector<double> s(n), lap(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(std::max(f.rho[i], 0.0) + eps);
        detail::fd_d2(s, dx, lap);
        const double pref = -sys.hbar * sys.hbar / (2.0 * sys.m);
        if (form == MuForm::QExpressed) {
            for (std::size_t i = 0; i < n; ++i) {
                const double q = pref * lap[i] / s[i];
                mu[i] = (1.0 - q / (2.0 * sys.m * sys.c * sys.c)) * q;
            }
        } else {
            std::vector<double> bilap(n);
            detail::fd_d2(lap, dx, bilap);
            const double h4 = sys.hbar * sys.hbar * sys.hbar * sys.hbar;
            for (std::size_t i = 0; i < n; ++i)
                mu[i] = pref * lap[i] / s[i] -
                        h4 * bilap[i] / (8.0 * sys.m * sys.m * sys.m * sys.c * sys.c * s[i]);
        }
    }
    if (sys.kB_T > 0.0)
        for (std::size_t i = 0; i < n; ++i)
            mu[i] += sys.kB_T * std::log(std::max(f.rho[i], 0.0) + eps);

    std::vector<double> rhoV(n), div_rhoV(n), dmu(n), dVx(n);
    for (std::size_t i = 0; i < n; ++i) rhoV[i] = f.rho[i] * f.V[i];
    detail::fd_d1(rhoV, dx, div_rhoV);
    detail::fd_d1(mu, dx, dmu);
    detail::fd_d1(f.V, dx, dVx);

    HydroRhs out;
    out.drho.resize(n);
    out.dV.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::max(f.rho[i], 0.0) / (std::max(f.rho[i], 0.0) + delta);
        out.drho[i] = -div_rhoV[i];
        out.dV[i] = -f.V[i] * dVx[i] - (sys.b / sys.m) * f.V[i] -
                    (grad(pot, f.x.point(i)) + w * dmu[i]) / sys.m;
    }
    if (hyper_nu > 0.0) {
        std::vector<double> t1(n), t2(n);
        detail::fd_sdiff(f.rho, t1);
        detail::fd_sdiff(t1, t2);
        detail::fd_sdiff(t2, t1);
        detail::fd_sdiff(t1, t2);
        for (std::size_t i = 0; i < n; ++i) out.drho[i] -= hyper_nu * t2[i];
        detail::fd_sdiff(f.V, t1);
        detail::fd_sdiff(t1, t2);
        detail::fd_sdiff(t2, t1);
        detail::fd_sdiff(t1, t2);
        for (std::size_t i = 0; i < n; ++i) out.dV[i] -= hyper_nu * t2[i];
    }
    return out;
}

struct HydroEvolveOptions {
    MuForm form = MuForm::QExpressed;
    // Sawtooth damping per step from the 8th-order hyperdiffusion; the grid
    // mode loses a fraction ~hyper_strength of its amplitude each dt while the
    // smooth bulk is touched at the (dx^8) level.
    double hyper_strength = 1.0;
    double warn_speed = 0.1;  // fraction of c above which max|V| leaves the validity domain
};

struct HydroEvolveResult {
    HydroFields fields;
    double max_speed = 0.0;  // max|V| seen over the run
    bool speed_warning = false;
};

// Classic RK4 on (rho, V).
inline HydroEvolveResult hydro_evolve(const PhysicalSystem& sys, const PotentialModel& pot,
                                      const HydroFields& f0, double dt, std::size_t n_steps,
                                      HydroRegime regime, const HydroEvolveOptions& opt = {}) {
    if (!(dt > 0.0)) throw std::invalid_argument("hydro_evolve: dt must be > 0");
    HydroEvolveResult res;
    res.fields = f0;
    HydroFields& f = res.fields;
    const std::size_t n = f.x.n;
    const double hyper_nu = opt.hyper_strength / (256.0 * dt);

    auto axpy = [n](const HydroFields& base, const HydroRhs& k, double a, HydroFields& out) {
        for (std::size_t i = 0; i < n; ++i) {
            out.rho[i] = base.rho[i] + a * k.drho[i];
            out.V[i] = base.V[i] + a * k.dV[i];
        }
    };

    HydroFields tmp = f;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const auto k1 = hydro_rhs(sys, pot, f, regime, opt.form, hyper_nu);
        axpy(f, k1, 0.5 * dt, tmp);
        const auto k2 = hydro_rhs(sys, pot, tmp, regime, opt.form, hyper_nu);
        axpy(f, k2, 0.5 * dt, tmp);
        const auto k3 = hydro_rhs(sys, pot, tmp, regime, opt.form, hyper_nu);
        axpy(f, k3, dt, tmp);
        const auto k4 = hydro_rhs(sys, pot, tmp, regime, opt.form, hyper_nu);
        double rho_max = 0.0, rho_min = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            f.rho[i] += dt / 6.0 * (k1.drho[i] + 2.0 * k2.drho[i] + 2.0 * k3.drho[i] + k4.drho[i]);
            f.V[i] += dt / 6.0 * (k1.dV[i] + 2.0 * k2.dV[i] + 2.0 * k3.dV[i] + k4.dV[i]);
            rho_max = std::max(rho_max, f.rho[i]);
            rho_min = std::min(rho_min, f.rho[i]);
            vmax = std::max(vmax, std::abs(f.V[i]));
        }
        res.max_speed = std::max(res.max_speed, vmax);
        if (!std::isfinite(rho_min) || rho_min < -1e-6 * rho_max)
            throw std::runtime_error("hydro_evolve: negative density at step " + std::to_string(s));
    }
    if (res.max_speed > opt.warn_speed * sys.c) res.speed_warning = true;
    return res;
}

// Energy functional int(rho m V^2/2 + rho U + hbar^2 (d_x sqrt(rho))^2 / 2m) dx;
// non-increasing under friction at kB_T = 0.
inline double hydro_energy(const PhysicalSystem& sys, const PotentialModel& pot,
                           const HydroFields& f) {
    const std::size_t n = f.x.n;
    Fft fft(n);
    std::vector<double> s(n);
    const double floor = density_floor(f.rho);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(std::max(f.rho[i], floor));
    const auto ds = spectral_derivative(fft, s, f.x.dx, 1);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e += 0.5 * sys.m * f.rho[i] * f.V[i] * f.V[i];
        e += f.rho[i] * value(pot, f.x.point(i));
        e += sys.hbar * sys.hbar * ds[i] * ds[i] / (2.0 * sys.m);
    }
    return e * f.x.dx;
}

}  // namespace rqbm
