#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rqbm/langevin.hpp"
#include "rqbm/quadrature.hpp"
#include "rqbm/rng.hpp"

using namespace rqbm;
using Catch::Approx;

TEST_CASE("dynamic mass") {
    PhysicalSystem s;
    CHECK(dynamic_mass(s, 0.0) == Approx(1.0));
    CHECK(dynamic_mass(s, std::sqrt(3.0)) == Approx(2.0));
    CHECK(dynamic_mass(s, -std::sqrt(3.0)) == Approx(2.0));  // even in p
    for (double p : {10.0, 25.0, 100.0}) {
        CHECK(dynamic_mass(s, p) >= s.m);
        CHECK(dynamic_mass(s, p) == Approx(p / s.c).epsilon(0.01));  // ultrarelativistic
    }
}

TEST_CASE("free relativistic flight") {
    PhysicalSystem s;  // b = kB_T = 0
    const double p0 = 2.0;
    ParticleState st{0.0, p0};
    const double dt = 0.01;
    for (int i = 0; i < 100; ++i) st = heun_step(s, Free{}, st, dt, 0.0);
    CHECK(st.p == Approx(p0).margin(1e-14));
    CHECK(st.r == Approx(p0 / dynamic_mass(s, p0) * 1.0).margin(1e-12));
}

TEST_CASE("dissipation: discrete energy decays with friction") {
    PhysicalSystem s;
    s.b = 1.0;  // kB_T = 0
    PotentialModel pot = Harmonic{1.0};
    ParticleState st{1.0, 0.5};
    double e_prev = relativistic_energy(s, pot, st.r, st.p);
    for (int i = 0; i < 2000; ++i) {
        st = heun_step(s, pot, st, 1e-3, 0.0);
        const double e = relativistic_energy(s, pot, st.r, st.p);
        CHECK(e <= e_prev + 1e-12);
        e_prev = e;
    }
}

TEST_CASE("relativistic oscillator conserves energy at order dt^2") {
    PhysicalSystem s;  // b = kB_T = 0
    PotentialModel pot = Harmonic{1.0};
    auto drift = [&](double dt) {
        ParticleState st{1.0, 0.0};
        const int n = static_cast<int>(std::round(10.0 / dt));
        const double e0 = relativistic_energy(s, pot, st.r, st.p);
        for (int i = 0; i < n; ++i) st = heun_step(s, pot, st, dt, 0.0);
        return std::abs(relativistic_energy(s, pot, st.r, st.p) - e0);
    };
    const double e1 = drift(4e-3), e2 = drift(2e-3);
    CHECK(e1 / e2 == Approx(4.0).epsilon(0.3));
}

TEST_CASE("ensemble determinism and trivial dynamics") {
    PhysicalSystem s;  // all forces zero
    EnsembleConfig cfg;
    cfg.n_particles = 7;
    cfg.dt = 0.01;
    cfg.n_steps = 50;
    cfg.seed = 99;
    cfg.init = {0.0, 1.5, 0.0, 0.0};
    const auto a = simulate_ensemble(s, Free{}, cfg);
    const auto b = simulate_ensemble(s, Free{}, cfg);
    REQUIRE(a.moments.size() == b.moments.size());
    for (std::size_t i = 0; i < a.moments.size(); ++i) {
        CHECK(a.moments[i].mean_p == b.moments[i].mean_p);  // bit identical
        CHECK(a.moments[i].mean_r == b.moments[i].mean_r);
        CHECK(a.moments[i].mean_p == Approx(1.5));          // constant velocity
        CHECK(a.moments[i].var_p == Approx(0.0).margin(1e-28));
    }
    const double v = 1.5 / dynamic_mass(s, 1.5);
    CHECK(a.moments.back().mean_r == Approx(v * 0.5).margin(1e-12));
}

TEST_CASE("juttner log density") {
    PhysicalSystem s;
    PotentialModel free = Free{};
    CHECK(juttner_log_density(s, free, 0.3, 0.0) == Approx(-1.0));  // -mc^2/kB_T

    // approach to the nonrelativistic Boltzmann exponent as c grows
    auto gap = [&](double c) {
        PhysicalSystem sc = s;
        sc.c = c;
        const double p = 1.3;
        const double nonrel = -(sc.m * c * c + p * p / (2.0 * sc.m)) / sc.kB_T;
        return std::abs(juttner_log_density(sc, free, 0.0, p) - nonrel);
    };
    CHECK(gap(10.0) / gap(100.0) == Approx(100.0).epsilon(0.05));

    PhysicalSystem s0 = s;
    s0.kB_T = 0.0;
    CHECK_THROWS_AS(juttner_log_density(s0, free, 0.0, 0.0), std::domain_error);
}

TEST_CASE("equilibrium second moment matches quadrature") {
    PhysicalSystem s;
    s.b = 1.0;
    s.kB_T = 1.0;
    // quadrature oracle: moments of exp(-sqrt(1+p^2))
    auto w = [](double p) { return std::exp(-(std::sqrt(1.0 + p * p) - 1.0)); };
    const double z = integrate_adaptive([&](double p) { return w(p); }, -60.0, 60.0);
    const double m2 = integrate_adaptive([&](double p) { return p * p * w(p); }, -60.0, 60.0) / z;
    const double m4 =
        integrate_adaptive([&](double p) { return p * p * p * p * w(p); }, -60.0, 60.0) / z;

    EnsembleConfig cfg;
    cfg.n_particles = 20000;
    cfg.dt = 2e-3;
    cfg.n_steps = 10000;  // t = 20, well past the O(1) relaxation time
    cfg.seed = 2024;
    cfg.record_every = 10000;
    const auto res = simulate_ensemble(s, Free{}, cfg);
    const double se = std::sqrt((m4 - m2 * m2) / static_cast<double>(cfg.n_particles));
    CHECK(std::abs(res.moments.back().mean_p2 - m2) < 3.0 * se);
}

TEST_CASE("weak order: coupled-path error halves with dt") {
    PhysicalSystem s;
    s.b = 1.0;
    s.kB_T = 0.5;
    PotentialModel pot = Harmonic{1.0};
    const double T = 2.0;
    const double dt_f = T / 2048.0;  // fine reference step
    const int n_traj = 400;

    double err1 = 0.0, err2 = 0.0;
    for (int tr = 0; tr < n_traj; ++tr) {
        Xoshiro256 rng(5150, tr);
        ZigguratNormal nrm;
        std::vector<double> fine(2048);
        for (auto& v : fine) v = nrm(rng);

        auto run = [&](std::size_t stride) {
            const std::size_t n = fine.size() / stride;
            std::vector<double> agg(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < stride; ++j) agg[i] += fine[i * stride + j];
                agg[i] /= std::sqrt(static_cast<double>(stride));
            }
            return simulate_path(s, Harmonic{1.0}, {1.0, 0.0}, dt_f * stride, agg);
        };

        const auto ref = run(1);
        err1 += std::abs(run(16).p - ref.p);
        err2 += std::abs(run(8).p - ref.p);
    }
    CHECK(err1 / err2 == Approx(2.0).epsilon(0.35));  // order >= 1 in dt
}

TEST_CASE("ensemble aborts on non-finite state") {
    PhysicalSystem s;  // deterministic
    EnsembleConfig cfg;
    cfg.n_particles = 2;
    cfg.dt = 1.0;
    cfg.n_steps = 2000;
    cfg.record_every = 10;
    cfg.init = {10.0, 0.0, 0.0, 0.0};
    // the speed limit keeps x bounded, so the momentum must ratchet all the
    // way to overflow before the moment accumulator can see it
    CHECK_THROWS_AS(simulate_ensemble(s, Harmonic{1e305}, cfg), std::runtime_error);
}
