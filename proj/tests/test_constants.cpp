#include <catch2/catch_amalgamated.hpp>

#include "rqbm/constants.hpp"

using namespace rqbm;
using Catch::Approx;

TEST_CASE("compton wavelength") {
    CodataConstants k;
    PhysicalSystem electron;
    electron.m = k.m_e;
    electron.c = k.c;
    electron.hbar = k.hbar;
    electron.unit_system = UnitSystem::SI;

    const double lc = compton_wavelength(electron);
    CHECK(lc == Approx(1.9308e-13).epsilon(1e-3));  // about 2 milliangstrom
    CHECK(lc / k.r_e == Approx(68.5).epsilon(0.01));  // about 70 electron radii

    PhysicalSystem natural;
    CHECK(compton_wavelength(natural) == Approx(0.5));

    PhysicalSystem bad;
    bad.m = -1.0;
    CHECK_THROWS_AS(compton_wavelength(bad), std::domain_error);
}

TEST_CASE("thermal wavelength") {
    PhysicalSystem s;
    s.kB_T = 1.0;
    CHECK(thermal_wavelength(s) == Approx(0.5));
    s.kB_T = 4.0;
    CHECK(thermal_wavelength(s) == Approx(0.25));

    // electron at 300 K, against a separately keyed-in high-precision value
    CodataConstants k;
    PhysicalSystem e;
    e.m = k.m_e;
    e.hbar = k.hbar;
    e.kB_T = k.kB * 300.0;
    // hbar / (2 sqrt(m_e kB 300)) evaluated at 10-digit precision
    CHECK(thermal_wavelength(e) == Approx(8.584191522e-10).epsilon(1e-9));

    s.kB_T = 0.0;
    CHECK_THROWS_AS(thermal_wavelength(s), std::domain_error);
}

TEST_CASE("wavelengths decrease in m and kB_T") {
    PhysicalSystem a, b;
    a.m = 1.0;
    b.m = 2.0;
    a.kB_T = b.kB_T = 1.0;
    CHECK(compton_wavelength(b) < compton_wavelength(a));
    CHECK(thermal_wavelength(b) < thermal_wavelength(a));
    b.m = 1.0;
    b.kB_T = 3.0;
    CHECK(thermal_wavelength(b) < thermal_wavelength(a));
}

TEST_CASE("hawking-unruh temperature") {
    CHECK(hawking_unruh_temperature(9.81) == Approx(6.25e-20).epsilon(0.005));
    CHECK(hawking_unruh_temperature(2.0 * 9.81) ==
          Approx(2.0 * hawking_unruh_temperature(9.81)));
    CHECK(hawking_unruh_temperature(1.0) == Approx(hawking_unruh_temperature(9.81) / 9.81));
    CHECK_THROWS_AS(hawking_unruh_temperature(0.0), std::domain_error);
}

TEST_CASE("barometric relativistic factor") {
    PhysicalSystem s;  // natural units
    s.c = 10.0;
    const double Tg = hawking_unruh_temperature(1.0, s.hbar, s.c, 1.0);
    CHECK(barometric_relativistic_factor(s, 1.0, Tg) == Approx(1.0));
    CHECK(barometric_relativistic_factor(s, 1.0, 2.0 * Tg) == Approx(0.25));

    // equality with -Q/2mc^2 on the barometric density: with
    // m = g = kB = hbar = 1, T = 1 the decay rate is a = mg/kB_T = 1 and
    // Q of exp(-a z) is -hbar^2 a^2 / 8m = -1/8.
    const double a = 1.0;
    const double Q = -s.hbar * s.hbar * a * a / (8.0 * s.m);
    const double factor = -Q / (2.0 * s.m * s.c * s.c);
    CHECK(barometric_relativistic_factor(s, 1.0, 1.0) == Approx(factor).margin(1e-10));
}

TEST_CASE("black photon threshold") {
    CodataConstants k;
    const double th = black_photon_threshold(k);
    CHECK(th == Approx(5.7e-35).epsilon(0.02));
    CHECK(th / 5e-35 < 1.5);
    CHECK(5e-35 / th < 1.5);
    // fixed point R(lambda) = lambda
    CHECK(schwarzschild_radius(photon_mass(th, k), k) == Approx(th).epsilon(1e-10));
    // twice the threshold: R drops to half of lambda, not a black photon
    CHECK(schwarzschild_radius(photon_mass(2.0 * th, k), k) == Approx(th / 2.0).epsilon(1e-10));
    CHECK_THROWS_AS(photon_mass(0.0, k), std::domain_error);
}

TEST_CASE("diffusion constant") {
    PhysicalSystem s;
    s.kB_T = 1.0;
    s.b = 1.0;
    CHECK(diffusion_constant(s) == Approx(1.0));
    s.kB_T = 2.0;
    s.b = 4.0;
    CHECK(diffusion_constant(s) == Approx(0.5));
    s.kB_T = 0.0;
    CHECK(diffusion_constant(s) == Approx(0.0).margin(0.0));
    s.b = 0.0;
    CHECK_THROWS_AS(diffusion_constant(s), std::domain_error);
}
