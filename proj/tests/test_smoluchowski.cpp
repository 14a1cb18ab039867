#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rqbm/smoluchowski.hpp"

using namespace rqbm;
using Catch::Approx;

namespace {

DensityField boltzmann_start(const PhysicalSystem& sys, const PotentialModel& pot,
                             const UniformGrid& g) {
    std::vector<double> rho(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        rho[i] = std::exp(-value(pot, g.point(i)) / sys.kB_T);
    normalize_density(g, rho);
    return {g, rho};
}

}  // namespace

TEST_CASE("rhs conserves mass to round-off") {
    PhysicalSystem sys;
    sys.b = 1.0;
    sys.kB_T = 0.5;
    PotentialModel pot = Harmonic{1.0};
    const auto g = periodic_grid(16.0, 64, -8.0);
    std::vector<double> rho(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        rho[i] = 1.0 + 0.3 * std::sin(2.0 * M_PI * g.point(i) / 16.0);
    normalize_density(g, rho);
    const auto rhs = smoluchowski_rhs(sys, pot, {g, rho}, SmolVariant::QuantumRelativistic);
    double mass = 0.0, sup = 0.0;
    for (double v : rhs) {
        mass += v;
        sup = std::max(sup, std::abs(v));
    }
    CHECK(std::abs(mass * g.dx) < 1e-13 * sup);
}

TEST_CASE("classical relaxation reaches the boltzmann density") {
    PhysicalSystem sys;
    sys.b = 1.0;
    sys.kB_T = 0.5;
    PotentialModel pot = Harmonic{1.0};
    const auto g = periodic_grid(16.0, 128, -8.0);
    DensityField f{g, std::vector<double>(g.n, 1.0 / 16.0)};
    const auto res = evolve_to_stationary(sys, pot, f, SmolVariant::Classical, 1e-4, 1e-10);
    REQUIRE(res.converged);
    const auto ref = boltzmann_start(sys, pot, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        sup = std::max(sup, std::abs(res.field.rho[i] - ref.rho[i]));
    CHECK(sup < 5e-3);  // pointwise Boltzmann is only an O(dx^2) image of the scheme
    // the scheme's own stationary condition: zero flux through every face,
    // i.e. rho_{i+1}/rho_i = (kT - dU/2)/(kT + dU/2), checked in the core
    double rho_max = 0.0;
    for (double r : res.field.rho) rho_max = std::max(rho_max, r);
    for (std::size_t i = 0; i + 1 < g.n; ++i) {
        if (res.field.rho[i] < 1e-3 * rho_max) continue;
        const double du = value(pot, g.point(i + 1)) - value(pot, g.point(i));
        const double expect = (sys.kB_T - 0.5 * du) / (sys.kB_T + 0.5 * du);
        CHECK(res.field.rho[i + 1] / res.field.rho[i] == Approx(expect).margin(1e-6));
    }
    CHECK(integrate(g, res.field.rho, true) == Approx(1.0).margin(1e-10));
}

TEST_CASE("quantum variants converge and differ by the relativistic correction") {
    PhysicalSystem sys;
    sys.b = 1.0;
    sys.kB_T = 0.5;
    sys.c = 10.0;
    // periodic potential keeps the density bounded away from the floor
    PotentialModel pot = Cosine{0.5, 1.0};
    const auto g = periodic_grid(2.0 * M_PI, 128);
    const auto f0 = boltzmann_start(sys, pot, g);
    const auto rel =
        evolve_to_stationary(sys, pot, f0, SmolVariant::QuantumRelativistic, 1e-3, 1e-10);
    const auto nonrel =
        evolve_to_stationary(sys, pot, f0, SmolVariant::QuantumNonrelativistic, 1e-3, 1e-10);
    REQUIRE(rel.converged);
    REQUIRE(nonrel.converged);
    double diff = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        diff = std::max(diff, std::abs(rel.field.rho[i] - nonrel.field.rho[i]));
    CHECK(diff > 1e-10);   // the correction is visible at c = 10 ...
    CHECK(diff < 1e-2);    // ... and small
}

TEST_CASE("effective potential report matches the closed forms") {
    PhysicalSystem sys;
    sys.c = 10.0;
    sys.kB_T = 1.0;
    const auto g = periodic_grid(M_PI, 64);
    const auto rep = effective_potential(sys, PotentialModel{Cosine{1.0, 2.0}}, g);
    REQUIRE(rep.cosine_factor);
    const double lt2 = rep.lambda_T * rep.lambda_T;
    const double lc2 = rep.lambda_C * rep.lambda_C;
    CHECK(*rep.cosine_factor == Approx(1.0 - (1.0 - lc2 * 4.0) * lt2 * 4.0).margin(1e-14));
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(rep.u_eff[i] ==
              Approx(*rep.cosine_factor * std::cos(2.0 * g.point(i))).margin(1e-12));
}

TEST_CASE("double well analysis pins the zero-barrier temperature") {
    PhysicalSystem sys;
    sys.kB_T = 5.0;
    const auto a = double_well_analysis(sys, 1.0, 1.0);
    CHECK(a.zero_barrier_kT == Approx(1.5));
    const double lt2 = std::pow(thermal_wavelength(sys), 2);
    const double t = 1.0 - 6.0 * lt2;
    CHECK(a.barrier_energy == Approx(t * t));
    PhysicalSystem hot = sys;
    hot.kB_T = 1.5;
    CHECK(double_well_analysis(hot, 1.0, 1.0).barrier_energy == Approx(0.0).margin(1e-12));
}

TEST_CASE("cubic friction rhs conserves mass and flips with the force") {
    PhysicalSystem sys;
    sys.b3 = 1.0;
    sys.kB_T = 0.0;
    const auto g = periodic_grid(4.0, 32, -2.0);
    DensityField f{g, std::vector<double>(g.n, 0.25)};
    const auto plus = cubic_friction_rhs(sys, PotentialModel{LinearGravity{1.0}}, f,
                                         SmolVariant::Classical);
    const auto minus = cubic_friction_rhs(sys, PotentialModel{LinearGravity{-1.0}}, f,
                                          SmolVariant::Classical);
    double mass = 0.0, sup = 0.0;
    for (double v : plus) {
        mass += v;
        sup = std::max(sup, std::abs(v));
    }
    CHECK(std::abs(mass * g.dx) < 1e-13 * sup);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(plus[i] == Approx(-minus[i]).margin(1e-12 * sup));
}
