#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rqbm/wavefunction.hpp"

using namespace rqbm;
using Catch::Approx;

TEST_CASE("strang evolution is unitary") {
    PhysicalSystem sys;
    sys.c = 100.0;
    PotentialModel pot = Harmonic{1.0};
    const auto g = periodic_grid(16.0, 128, -8.0);
    WaveField f = gaussian_packet(g, 1.0, 2.0, 0.6);
    schrodinger_evolve(sys, pot, f, 1e-3, 2000);
    CHECK(wave_norm2(f) == Approx(1.0).margin(1e-12));
}

TEST_CASE("coherent state returns after one oscillator period") {
    PhysicalSystem sys;
    sys.c = 1e6;  // effectively nonrelativistic
    PotentialModel pot = Harmonic{1.0};
    const auto g = periodic_grid(16.0, 128, -8.0);
    const auto f0 = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
    WaveField f = f0;
    const double dt = 1e-3;
    const auto n = static_cast<std::size_t>(std::llround(2.0 * M_PI / dt));
    schrodinger_evolve(sys, pot, f, dt, n);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) l1 += std::abs(std::norm(f.psi[i]) - std::norm(f0.psi[i]));
    CHECK(l1 * g.dx < 1e-5);
}

TEST_CASE("plane wave moves at the dispersion group velocity") {
    PhysicalSystem sys;
    sys.c = 100.0;
    const auto g = periodic_grid(2.0 * M_PI, 64);
    const double k = 4.0;
    WaveField f{g, std::vector<Complex>(g.n)};
    for (std::size_t i = 0; i < g.n; ++i) f.psi[i] = std::polar(1.0, k * g.point(i));
    normalize(f);
    const auto j = probability_flux(sys, f);
    const double rho = std::norm(f.psi[0]);
    const double lc = compton_wavelength(sys);
    const double expected = sys.hbar * k / sys.m * (1.0 - 2.0 * lc * lc * k * k);
    for (double jv : j) CHECK(jv / rho == Approx(expected).epsilon(1e-12));
}

TEST_CASE("grids resolving the dispersion turnover are refused") {
    PhysicalSystem sys;
    sys.c = 1.0;  // 1/lambda_C = 2
    const auto g = periodic_grid(2.0 * M_PI, 64);  // k_max = 32
    WaveField f = gaussian_packet(g, M_PI, 0.0, 0.5);
    CHECK_THROWS_AS(schrodinger_evolve(sys, PotentialModel{Free{}}, f, 1e-3, 1),
                    std::domain_error);
}

TEST_CASE("continuity residual shrinks at 2nd order in dt") {
    PhysicalSystem sys;
    sys.c = 100.0;
    PotentialModel pot = Harmonic{1.0};
    const auto g = periodic_grid(16.0, 256, -8.0);
    const auto f = gaussian_packet(g, 1.0, 1.0, 0.7);
    const double r1 = continuity_residual(sys, pot, f, 4e-4);
    const double r2 = continuity_residual(sys, pot, f, 2e-4);
    CHECK(r1 / r2 == Approx(4.0).margin(0.8));
}

TEST_CASE("polar decomposition of a boosted packet") {
    PhysicalSystem sys;
    const auto g = periodic_grid(32.0, 256, -16.0);
    const double k0 = 1.5;
    const auto f = gaussian_packet(g, 0.0, k0, 1.0);
    const auto pd = polar_decompose(sys, f);
    // near the center the velocity equals hbar k0 / m
    for (std::size_t i = g.n / 2 - 10; i < g.n / 2 + 10; ++i)
        CHECK(pd.V[i] == Approx(sys.hbar * k0 / sys.m).margin(1e-8));
    double mass = 0.0;
    for (double r : pd.rho) mass += r;
    CHECK(mass * g.dx == Approx(1.0).margin(1e-12));
}
