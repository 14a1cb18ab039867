#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rqbm/constants.hpp"
#include "rqbm/fourier.hpp"
#include "rqbm/grid.hpp"
#include "rqbm/potentials.hpp"

namespace rqbm {

using Complex = std::complex<double>;

struct WaveField {
    UniformGrid x;                  // periodic
    std::vector<Complex> psi;
};

inline double wave_norm2(const WaveField& f) {
    double s = 0.0;
    for (const auto& z : f.psi) s += std::norm(z);
    return s * f.x.dx;
}

inline void normalize(WaveField& f) {
    const double n2 = wave_norm2(f);
    if (!(n2 > 0.0)) throw std::domain_error("normalize: zero wave field");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& z : f.psi) z *= s;
}

// Largest |psi_hat| at the Nyquist bin relative to the spectral peak.
// Guards the 4th-order kinetic term against unresolved content.
inline double nyquist_fraction(const WaveField& f) {
    Fft fft(f.x.n);
    std::vector<Complex> w = f.psi;
    fft.forward(w.data());
    double peak = 0.0;
    for (const auto& z : w) peak = std::max(peak, std::abs(z));
    const std::size_t ny = f.x.n / 2;
    return peak > 0.0 ? std::abs(w[ny]) / peak : 0.0;
}

// T(k) = hbar^2 k^2 / 2m - hbar^4 k^4 / 8 m^3 c^2, the p^4-truncated
// kinetic dispersion.
inline double kinetic_multiplier(const PhysicalSystem& sys, double k) {
    const double h2k2 = sys.hbar * sys.hbar * k * k;
    return h2k2 / (2.0 * sys.m) - h2k2 * h2k2 / (8.0 * sys.m * sys.m * sys.m * sys.c * sys.c);
}

// The truncated expansion turns over at k = 1/lambda_C = 2mc/hbar; a grid
// resolving that far is refused rather than silently mis-dispersed.
inline void check_kinetic_validity(const PhysicalSystem& sys, const UniformGrid& g) {
    const auto ks = fft_wavenumbers(g.n, g.dx);
    double kmax = 0.0;
    for (double k : ks) kmax = std::max(kmax, std::abs(k));
    const double k_turnover = 1.0 / compton_wavelength(sys);
    if (kmax >= k_turnover)
        throw std::domain_error(
            "grid resolves k >= 1/lambda_C where the truncated kinetic term is invalid "
            "(k_max = " + std::to_string(kmax) + ", 1/lambda_C = " + std::to_string(k_turnover) + ")");
}

// H_BF psi = -hbar^2 lap psi / 2m - hbar^4 lap^2 psi / 8 m^3 c^2 + U psi.
inline std::vector<Complex> apply_breit_fermi(const PhysicalSystem& sys, const PotentialModel& pot,
                                              const WaveField& f) {
    check_kinetic_validity(sys, f.x);
    const std::size_t n = f.x.n;
    Fft fft(n);
    std::vector<Complex> w = f.psi;
    fft.forward(w.data());
    const auto ks = fft_wavenumbers(n, f.x.dx);
    for (std::size_t j = 0; j < n; ++j) w[j] *= kinetic_multiplier(sys, ks[j]);
    fft.inverse(w.data());
    for (std::size_t i = 0; i < n; ++i) w[i] += value(pot, f.x.point(i)) * f.psi[i];
    return w;
}

// Strang splitting: half potential phase, exact kinetic phase in k-space,
// half potential phase. Unitary to round-off.
inline void schrodinger_evolve(const PhysicalSystem& sys, const PotentialModel& pot, WaveField& f,
                               double dt, std::size_t n_steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("schrodinger_evolve: dt must be > 0");
    if (n_steps == 0) return;
    check_kinetic_validity(sys, f.x);
    const std::size_t n = f.x.n;
    Fft fft(n);
    const auto ks = fft_wavenumbers(n, f.x.dx);

    std::vector<Complex> half_pot(n), full_kin(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = value(pot, f.x.point(i));
        half_pot[i] = std::polar(1.0, -0.5 * u * dt / sys.hbar);
    }
    for (std::size_t j = 0; j < n; ++j)
        full_kin[j] = std::polar(1.0, -kinetic_multiplier(sys, ks[j]) * dt / sys.hbar);

    for (std::size_t s = 0; s < n_steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= half_pot[i];
        fft.forward(f.psi.data());
        for (std::size_t j = 0; j < n; ++j) f.psi[j] *= full_kin[j];
        fft.inverse(f.psi.data());
        for (std::size_t i = 0; i < n; ++i) f.psi[i] *= half_pot[i];
    }
}

inline WaveField schrodinger_step(const PhysicalSystem& sys, const PotentialModel& pot,
                                  const WaveField& f, double dt) {
    WaveField out = f;
    schrodinger_evolve(sys, pot, out, dt, 1);
    return out;
}

namespace detail {
inline std::vector<Complex> spectral_derivative_c(const Fft& fft, const std::vector<Complex>& f,
                                                  double dx, int order) {
    const std::size_t n = fft.size();
    std::vector<Complex> w = f;
    fft.forward(w.data());
    const auto ks = fft_wavenumbers(n, dx);
    for (std::size_t j = 0; j < n; ++j) {
        Complex m = 1.0;
        for (int o = 0; o < order; ++o) m *= Complex(0.0, ks[j]);
        w[j] *= m;
    }
    if (n % 2 == 0 && order % 2 == 1) w[n / 2] = 0.0;
    fft.inverse(w.data());
    return w;
}
}  // namespace detail

// Probability flux with the lambda_C^2 relativistic correction. The
// expression is antisymmetric under conjugation, so the result is real up
// to round-off; a larger imaginary residue signals an internal error.
inline std::vector<double> probability_flux(const PhysicalSystem& sys, const WaveField& f) {
    const std::size_t n = f.x.n;
    Fft fft(n);
    const auto d1 = detail::spectral_derivative_c(fft, f.psi, f.x.dx, 1);
    const auto d2 = detail::spectral_derivative_c(fft, f.psi, f.x.dx, 2);
    const auto d3 = detail::spectral_derivative_c(fft, f.psi, f.x.dx, 3);
    const double lc = compton_wavelength(sys);
    const double lc2 = lc * lc;
    const Complex pref(0.0, 0.5 * sys.hbar / sys.m);

    std::vector<double> j(n);
    double max_imag = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex psi = f.psi[i];
        const Complex classical = psi * std::conj(d1[i]) - std::conj(psi) * d1[i];
        const Complex rel = std::conj(d1[i]) * d2[i] - std::conj(psi) * d3[i] +
                            psi * std::conj(d3[i]) - d1[i] * std::conj(d2[i]);
        const Complex val = pref * (classical + lc2 * rel);
        j[i] = val.real();
        max_imag = std::max(max_imag, std::abs(val.imag()));
        max_abs = std::max(max_abs, std::abs(val));
    }
    if (max_abs > 0.0 && max_imag > 1e-8 * max_abs)
        throw std::runtime_error("probability_flux: imaginary residue exceeds tolerance");
    return j;
}

// L2 norm of (rho(t+dt) - rho(t))/dt + d_x j evaluated at the half step.
inline double continuity_residual(const PhysicalSystem& sys, const PotentialModel& pot,
                                  const WaveField& f, double dt) {
    WaveField full = schrodinger_step(sys, pot, f, dt);
    WaveField mid = schrodinger_step(sys, pot, f, 0.5 * dt);
    const std::size_t n = f.x.n;
    const auto j = probability_flux(sys, mid);
    Fft fft(n);
    const auto djdx = spectral_derivative(fft, j, f.x.dx, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double drho = (std::norm(full.psi[i]) - std::norm(f.psi[i])) / dt;
        const double res = drho + djdx[i];
        s += res * res;
    }
    return std::sqrt(s * f.x.dx);
}

struct PolarDecomposition {
    std::vector<double> rho;
    std::vector<double> V;       // hbar Im(conj(psi) d_x psi) / (m rho), zero at floored nodes
    std::size_t n_floored = 0;   // nodes with rho below the phase floor
};

// rho = |psi|^2; V from the branch-free phase-gradient formula. Nodes with
// rho below 1e-12 * max(rho) have no usable phase and get V = 0.
inline PolarDecomposition polar_decompose(const PhysicalSystem& sys, const WaveField& f) {
    const std::size_t n = f.x.n;
    Fft fft(n);
    const auto d1 = detail::spectral_derivative_c(fft, f.psi, f.x.dx, 1);
    PolarDecomposition out;
    out.rho.resize(n);
    out.V.resize(n);
    double rho_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.rho[i] = std::norm(f.psi[i]);
        rho_max = std::max(rho_max, out.rho[i]);
    }
    const double floor = 1e-12 * rho_max;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.rho[i] > floor) {
            out.V[i] = sys.hbar * (std::conj(f.psi[i]) * d1[i]).imag() / (sys.m * out.rho[i]);
        } else {
            out.V[i] = 0.0;
            ++out.n_floored;
        }
    }
    return out;
}

// Gaussian wave packet exp(ik0 x) exp(-(x-x0)^2 / 4 sigma^2), normalized.
inline WaveField gaussian_packet(const UniformGrid& g, double x0, double k0, double sigma) {
    WaveField f{g, std::vector<Complex>(g.n)};
    for (std::size_t i = 0; i < g.n; ++i) {
        const double dx = g.point(i) - x0;
        f.psi[i] = std::polar(std::exp(-dx * dx / (4.0 * sigma * sigma)), k0 * g.point(i));
    }
    normalize(f);
    return f;
}

}  // namespace rqbm
