#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rqbm {

enum class UnitSystem { Natural, SI };

// Particle plus bath parameters. Natural units (m = c = hbar = kB = 1) are
// the default for all solvers; SI shows up only in the constants checks.
struct PhysicalSystem {
    double m = 1.0;      // rest mass
    double c = 1.0;      // speed of light
    double hbar = 1.0;   // reduced Planck constant
    double kB_T = 1.0;   // thermal energy k_B * T
    double b = 0.0;      // linear friction coefficient
    double b3 = 0.0;     // cubic friction coefficient
    UnitSystem unit_system = UnitSystem::Natural;

    void validate() const {
        if (!(m > 0.0)) throw std::domain_error("PhysicalSystem: m must be > 0");
        if (!(c > 0.0)) throw std::domain_error("PhysicalSystem: c must be > 0");
        if (!(hbar > 0.0)) throw std::domain_error("PhysicalSystem: hbar must be > 0");
        if (kB_T < 0.0) throw std::domain_error("PhysicalSystem: kB_T must be >= 0");
        if (b < 0.0) throw std::domain_error("PhysicalSystem: b must be >= 0");
        if (b3 < 0.0) throw std::domain_error("PhysicalSystem: b3 must be >= 0");
    }
};

// CODATA 2018 snapshot (SI), pinned 2022-05; >= 5 significant digits each.
struct CodataConstants {
    double hbar = 1.054571817e-34;  // J s
    double c = 299792458.0;         // m/s (exact)
    double kB = 1.380649e-23;       // J/K (exact)
    double G = 6.67430e-11;         // m^3 kg^-1 s^-2
    double g = 9.80665;             // m/s^2 (standard gravity)
    double m_e = 9.1093837015e-31;  // kg
    double r_e = 2.8179403262e-15;  // m (classical electron radius)
};

// lambda_C = hbar / 2mc (this convention, half the usual reduced value).
inline double compton_wavelength(const PhysicalSystem& sys) {
    if (!(sys.m > 0.0) || !(sys.c > 0.0)) throw std::domain_error("compton_wavelength: need m > 0 and c > 0");
    return sys.hbar / (2.0 * sys.m * sys.c);
}

// lambda_T = hbar / 2 sqrt(m kB T).
inline double thermal_wavelength(const PhysicalSystem& sys) {
    if (!(sys.m > 0.0)) throw std::domain_error("thermal_wavelength: need m > 0");
    if (!(sys.kB_T > 0.0)) throw std::domain_error("thermal_wavelength: need kB_T > 0");
    return sys.hbar / (2.0 * std::sqrt(sys.m * sys.kB_T));
}

// T_g = hbar g / 4 c kB.
inline double hawking_unruh_temperature(double g, double hbar, double c, double kB) {
    if (!(g > 0.0)) throw std::domain_error("hawking_unruh_temperature: need g > 0");
    return hbar * g / (4.0 * c * kB);
}

inline double hawking_unruh_temperature(double g, const CodataConstants& k = {}) {
    return hawking_unruh_temperature(g, k.hbar, k.c, k.kB);
}

// (T_g/T)^2: the relative growth of the quantum potential on the barometric
// density exp(-mgz/kB_T). kB defaults to 1 (natural units).
inline double barometric_relativistic_factor(const PhysicalSystem& sys, double g, double T,
                                             double kB = 1.0) {
    if (!(T > 0.0)) throw std::domain_error("barometric_relativistic_factor: need T > 0");
    const double Tg = hawking_unruh_temperature(g, sys.hbar, sys.c, kB);
    const double r = Tg / T;
    return r * r;
}

inline double photon_mass(double lambda, const CodataConstants& k = {}) {
    if (!(lambda > 0.0)) throw std::domain_error("photon_mass: need lambda > 0");
    return 2.0 * 3.14159265358979323846 * k.hbar / (lambda * k.c);
}

inline double schwarzschild_radius(double mass, const CodataConstants& k = {}) {
    return 2.0 * k.G * mass / (k.c * k.c);
}

// Wavelength below which the Schwarzschild radius of a photon exceeds its
// wavelength: sqrt(4 pi hbar G / c^3). Fixed point of R(lambda) = lambda.
inline double black_photon_threshold(const CodataConstants& k = {}) {
    return std::sqrt(4.0 * 3.14159265358979323846 * k.hbar * k.G / (k.c * k.c * k.c));
}

// Einstein relation D = kB T / b.
inline double diffusion_constant(const PhysicalSystem& sys) {
    if (!(sys.b > 0.0)) throw std::domain_error("diffusion_constant: need b > 0");
    return sys.kB_T / sys.b;
}

}  // namespace rqbm
