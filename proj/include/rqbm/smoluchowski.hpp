#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqbm/constants.hpp"
#include "rqbm/grid.hpp"
#include "rqbm/madelung.hpp"
#include "rqbm/potentials.hpp"

namespace rqbm {

struct DensityField {
    UniformGrid x;  // periodic
    std::vector<double> rho;
};

enum class SmolVariant { QuantumRelativistic, QuantumNonrelativistic, Classical };

struct SmolOptions {
    MuForm form = MuForm::QExpressed;
    // Quasi-equilibrium semiclassical mode: evaluate the quantum potentials
    // on a frozen density (e.g. the Boltzmann one) instead of rho itself.
    std::optional<std::vector<double>> frozen_q_density;
};

namespace detail {

inline std::vector<double> smol_mu(const PhysicalSystem& sys, const PotentialModel& pot,
                                   const UniformGrid& g, const std::vector<double>& rho,
                                   SmolVariant variant, const SmolOptions& opt) {
    std::vector<double> mu = sample_values(pot, g);
    if (variant == SmolVariant::Classical) return mu;
    const std::vector<double>& qr = opt.frozen_q_density ? *opt.frozen_q_density : rho;
    const auto q = bohm_quantum_potential_full(sys, g, qr);
    for (std::size_t i = 0; i < g.n; ++i) {
        if (variant == SmolVariant::QuantumNonrelativistic) {
            mu[i] += q.Q[i];
        } else if (opt.form == MuForm::Exact) {
            mu[i] = mu_exact_point(sys, mu[i], q.Q[i], q.bilap_term[i]);
        } else {
            mu[i] = mu_q_expressed_point(sys, mu[i], q.Q[i]);
        }
    }
    return mu;
}

}  // namespace detail

// d_t rho = d_x(rho d_x mu / b) + D d_x^2 rho in conservative flux form:
// midpoint-density times centered mu difference, so the discrete mass is
// conserved to round-off by telescoping.
inline std::vector<double> smoluchowski_rhs(const PhysicalSystem& sys, const PotentialModel& pot,
                                            const DensityField& f, SmolVariant variant,
                                            const SmolOptions& opt = {}) {
    if (!(sys.b > 0.0)) throw std::domain_error("smoluchowski_rhs: need b > 0");
    const std::size_t n = f.x.n;
    const double dx = f.x.dx;
    const auto mu = detail::smol_mu(sys, pot, f.x, f.rho, variant, opt);
    const double D = sys.kB_T / sys.b;

    std::vector<double> flux(n);  // flux[i] lives at i+1/2
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double rho_mid = 0.5 * (f.rho[i] + f.rho[j]);
        flux[i] = rho_mid * (mu[j] - mu[i]) / (dx * sys.b) + D * (f.rho[j] - f.rho[i]) / dx;
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = (flux[i] - flux[(i + n - 1) % n]) / dx;
    return rhs;
}

namespace detail {

// Solve (I - a L) y = r with L the periodic 1D Laplacian stencil / dx^2,
// via Thomas plus Sherman-Morrison for the corner entries.
inline std::vector<double> solve_periodic_helmholtz(double a_over_dx2, std::vector<double> r) {
    const std::size_t n = r.size();
    const double off = -a_over_dx2;
    const double diag = 1.0 + 2.0 * a_over_dx2;
    // Sherman-Morrison: A = T + u v^T with u = (gamma, 0, ..., off)^T scaled
    const double gamma = -diag;
    std::vector<double> b(n, diag), u(n, 0.0);
    b[0] = diag - gamma;
    b[n - 1] = diag - off * off / gamma;
    u[0] = gamma;
    u[n - 1] = off;

    auto thomas = [&](std::vector<double> d) {
        std::vector<double> c(n, 0.0);
        // forward sweep with constant off-diagonals `off`, modified diag b[]
        std::vector<double> bp(b);
        for (std::size_t i = 1; i < n; ++i) {
            const double m = off / bp[i - 1];
            bp[i] -= m * off;
            d[i] -= m * d[i - 1];
        }
        d[n - 1] /= bp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - off * d[i + 1]) / bp[i];
        (void)c;
        return d;
    };

    const auto y = thomas(r);
    const auto q = thomas(u);
    const double vy = y[0] + (off / gamma) * y[n - 1];
    const double vq = q[0] + (off / gamma) * q[n - 1];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - vy / (1.0 + vq) * q[i];
    return out;
}

}  // namespace detail

struct StationaryResult {
    DensityField field;
    double residual = 0.0;  // L2 norm of d_t rho at exit
    std::size_t n_steps = 0;
    bool converged = false;
    std::vector<double> residual_history;  // one entry per check interval
};

// Semi-implicit stepping. Classical variant: nonlinear drift explicit, the
// linear diffusion implicit (periodic tridiagonal solve). Quantum variants:
// the Bohm drift linearizes to a stiff 4th-order dissipation with
// coefficient hbar^2/4mb, so the implicit proxy is D k^2 + nu4 k^4 applied
// spectrally; the full nonlinear RHS stays explicit and the proxy is added
// and removed consistently (first-order IMEX). Runs until ||d_t rho|| < tol
// or n_max steps.
inline StationaryResult evolve_to_stationary(const PhysicalSystem& sys, const PotentialModel& pot,
                                             const DensityField& rho0, SmolVariant variant,
                                             double dt, double tol, std::size_t n_max = 200000,
                                             const SmolOptions& opt = {}) {
    if (!(tol > 0.0)) throw std::invalid_argument("evolve_to_stationary: tol must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_to_stationary: dt must be > 0");
    StationaryResult res;
    res.field = rho0;
    DensityField& f = res.field;
    const std::size_t n = f.x.n;
    const double D = diffusion_constant(sys);
    const double a = D * dt / (f.x.dx * f.x.dx);
    const std::size_t check_every = 50;

    const bool quantum = variant != SmolVariant::Classical && !opt.frozen_q_density;
    const double nu4 = quantum ? sys.hbar * sys.hbar / (4.0 * sys.m * sys.b) : 0.0;
    Fft fft(n);
    std::vector<double> divisor;
    if (nu4 > 0.0) {
        const auto ks = fft_wavenumbers(n, f.x.dx);
        divisor.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double k2 = ks[j] * ks[j];
            divisor[j] = 1.0 + dt * (D * k2 + nu4 * k2 * k2);
        }
    }
    std::vector<Complex> wr(n), wn(n);

    for (std::size_t s = 1; s <= n_max; ++s) {
        if (nu4 > 0.0) {
            const auto rhs = smoluchowski_rhs(sys, pot, f, variant, opt);
            for (std::size_t i = 0; i < n; ++i) {
                wr[i] = f.rho[i];
                wn[i] = rhs[i];
            }
            fft.forward(wr.data());
            fft.forward(wn.data());
            // (I - dt L) (rho' - rho) = dt N(rho) with proxy L = -(D k^2 + nu4 k^4);
            // stationary points of N are exact fixed points of the update
            for (std::size_t j = 0; j < n; ++j) wr[j] += dt * wn[j] / divisor[j];
            fft.inverse(wr.data());
            for (std::size_t i = 0; i < n; ++i) f.rho[i] = wr[i].real();
        } else {
            // drift part of the RHS only; diffusion goes implicit
            auto drift = smoluchowski_rhs(sys, pot, f, variant, opt);
            {
                // remove the explicit diffusion contribution
                std::vector<double> lap(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
                    lap[i] = (f.rho[ip] - 2.0 * f.rho[i] + f.rho[im]) / (f.x.dx * f.x.dx);
                }
                for (std::size_t i = 0; i < n; ++i) drift[i] -= D * lap[i];
            }
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = f.rho[i] + dt * drift[i];
            f.rho = a > 0.0 ? detail::solve_periodic_helmholtz(a, std::move(r)) : std::move(r);
        }

        double rho_min = 0.0;
        for (double v : f.rho) rho_min = std::min(rho_min, v);
        if (rho_min < -1e-10)
            throw std::runtime_error("evolve_to_stationary: negative density at step " +
                                     std::to_string(s));

        if (s % check_every == 0 || s == n_max) {
            const auto full = smoluchowski_rhs(sys, pot, f, variant, opt);
            double r2 = 0.0;
            for (double v : full) r2 += v * v;
            res.residual = std::sqrt(r2 * f.x.dx);
            res.residual_history.push_back(res.residual);
            res.n_steps = s;
            if (res.residual < tol) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

struct EffectivePotentialReport {
    std::vector<double> u_eff;         // on the grid
    double lambda_T = 0.0;
    double lambda_C = 0.0;
    // analytic coefficients, when the family admits them
    std::optional<double> cosine_factor;           // U_eff = factor * U
    std::optional<double> dw_constant;             // double-well constant term
    std::optional<double> dw_quadratic;            // coefficient of x^2
    std::optional<double> dw_quartic;              // coefficient of x^4
    std::optional<double> barrier_energy;          // E_a at the configured temperature
    std::optional<double> zero_barrier_kT;         // kB_T where E_a vanishes
    std::optional<double> free_diffusion_kT;       // kB_T where the cosine factor vanishes
};

// U_eff = U + lambda_T^2 lap U + lambda_C^2 lambda_T^2 lap^2 U, assembled
// from the analytic derivatives.
inline EffectivePotentialReport effective_potential(const PhysicalSystem& sys,
                                                    const PotentialModel& pot,
                                                    const UniformGrid& g) {
    EffectivePotentialReport rep;
    rep.lambda_T = thermal_wavelength(sys);
    rep.lambda_C = compton_wavelength(sys);
    const double lt2 = rep.lambda_T * rep.lambda_T;
    const double lc2 = rep.lambda_C * rep.lambda_C;
    rep.u_eff.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.point(i);
        rep.u_eff[i] = value(pot, x) + lt2 * laplacian(pot, x) + lc2 * lt2 * bilaplacian(pot, x);
    }
    if (const auto* c = std::get_if<Cosine>(&pot)) {
        const double q2 = c->q * c->q;
        rep.cosine_factor = 1.0 - (1.0 - lc2 * q2) * lt2 * q2;
        rep.free_diffusion_kT = lc2 * q2 * (1.0 - lc2 * q2) * sys.m * sys.c * sys.c;
    }
    if (const auto* d = std::get_if<DoubleWell>(&pot)) {
        rep.dw_constant = -4.0 * d->alpha * lt2 + 24.0 * d->beta * lc2 * lt2;
        rep.dw_quadratic = -2.0 * (d->alpha - 6.0 * d->beta * lt2);
        rep.dw_quartic = d->beta;
        const double t = d->alpha / d->beta - 6.0 * lt2;
        rep.barrier_energy = t > 0.0 ? d->beta * t * t : 0.0;
        rep.zero_barrier_kT = 3.0 * d->beta * sys.hbar * sys.hbar / (2.0 * d->alpha * sys.m);
    }
    return rep;
}

struct DoubleWellAnalysis {
    double barrier_energy;    // E_a = beta (alpha/beta - 6 lambda_T^2)^2
    double zero_barrier_kT;   // 3 beta hbar^2 / 2 alpha m
    // The barrier is quantum-suppressed but untouched by the relativistic
    // correction: lambda_C does not enter either number.
};

inline DoubleWellAnalysis double_well_analysis(const PhysicalSystem& sys, double alpha,
                                               double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::domain_error("double_well_analysis: need alpha, beta > 0");
    const double lt2 = sys.kB_T > 0.0 ? std::pow(thermal_wavelength(sys), 2) : 0.0;
    const double t = alpha / beta - 6.0 * lt2;
    return {t > 0.0 ? beta * t * t : 0.0,
            3.0 * beta * sys.hbar * sys.hbar / (2.0 * alpha * sys.m)};
}

struct CosineAnalysis {
    double suppression_factor;   // 1 - (1 - lc^2 q^2) lt^2 q^2
    double free_diffusion_kT;    // lc^2 q^2 (1 - lc^2 q^2) m c^2
    bool no_tunneling;           // q = 1/lambda_C within round-off
    bool outside_validity;       // lambda_C^2 q^2 > 1: beyond the expansion
};

inline CosineAnalysis cosine_analysis(const PhysicalSystem& sys, double q) {
    if (!(q > 0.0)) throw std::domain_error("cosine_analysis: need q > 0");
    const double lc = compton_wavelength(sys);
    const double lc2q2 = lc * lc * q * q;
    const double lt2 = sys.kB_T > 0.0 ? std::pow(thermal_wavelength(sys), 2) : 0.0;
    CosineAnalysis a;
    a.suppression_factor = 1.0 - (1.0 - lc2q2) * lt2 * q * q;
    a.free_diffusion_kT = lc2q2 * (1.0 - lc2q2) * sys.m * sys.c * sys.c;
    a.no_tunneling = std::abs(lc * q - 1.0) < 1e-12;
    a.outside_validity = lc2q2 > 1.0;
    return a;
}

// d_t rho = d_x{ rho cbrt(d_x[U + (1 - Q/2mc^2)Q + kB_T ln rho] / b3) };
// the cube root is the odd real branch sign(y)|y|^{1/3}, matching the odd
// friction law -b3 V^3.
inline std::vector<double> cubic_friction_rhs(const PhysicalSystem& sys, const PotentialModel& pot,
                                              const DensityField& f, SmolVariant variant,
                                              const SmolOptions& opt = {}) {
    if (!(sys.b3 > 0.0)) throw std::domain_error("cubic_friction_rhs: need b3 > 0");
    const std::size_t n = f.x.n;
    const double dx = f.x.dx;
    auto bracket = detail::smol_mu(sys, pot, f.x, f.rho, variant, opt);
    if (sys.kB_T > 0.0) {
        const double floor = density_floor(f.rho);
        for (std::size_t i = 0; i < n; ++i)
            bracket[i] += sys.kB_T * std::log(std::max(f.rho[i], floor));
    }
    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double rho_mid = 0.5 * (f.rho[i] + f.rho[j]);
        flux[i] = rho_mid * std::cbrt((bracket[j] - bracket[i]) / (dx * sys.b3));
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = (flux[i] - flux[(i + n - 1) % n]) / dx;
    return rhs;
}

}  // namespace rqbm
