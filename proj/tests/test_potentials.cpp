#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rqbm/fourier.hpp"
#include "rqbm/potentials.hpp"

using namespace rqbm;
using Catch::Approx;

TEST_CASE("closed-form values and derivatives") {
    PotentialModel dw = DoubleWell{1.0, 1.0};
    CHECK(value(dw, 0.0) == 0.0);
    CHECK(laplacian(dw, 0.0) == Approx(-4.0));
    CHECK(bilaplacian(dw, 0.0) == Approx(24.0));

    PotentialModel cos2 = Cosine{1.0, 2.0};
    CHECK(value(cos2, 0.0) == Approx(1.0));
    CHECK(laplacian(cos2, 0.0) == Approx(-4.0));
    CHECK(bilaplacian(cos2, 0.0) == Approx(16.0));

    PotentialModel free = Free{};
    for (double x : {-1.3, 0.0, 2.7}) {
        CHECK(value(free, x) == 0.0);
        CHECK(grad(free, x) == 0.0);
        CHECK(laplacian(free, x) == 0.0);
        CHECK(bilaplacian(free, x) == 0.0);
    }
}

TEST_CASE("finite differences reproduce the derivative chain") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    const std::vector<PotentialModel> pots = {Free{}, Harmonic{1.7}, Cosine{0.8, 1.3},
                                              DoubleWell{1.2, 0.9}, LinearGravity{2.0}};
    const double h = 1e-4;
    for (const auto& pot : pots) {
        for (int trial = 0; trial < 20; ++trial) {
            const double x = xs(gen);
            const double fd1 = (value(pot, x + h) - value(pot, x - h)) / (2.0 * h);
            CHECK(fd1 == Approx(grad(pot, x)).margin(50.0 * h * h));
            const double fd2 = (grad(pot, x + h) - grad(pot, x - h)) / (2.0 * h);
            CHECK(fd2 == Approx(laplacian(pot, x)).margin(50.0 * h * h));
            // bilaplacian via second difference of the laplacian
            const double fd4 =
                (laplacian(pot, x + h) - 2.0 * laplacian(pot, x) + laplacian(pot, x - h)) / (h * h);
            CHECK(fd4 == Approx(bilaplacian(pot, x)).margin(1e-2));
        }
    }
}

TEST_CASE("cosine periodicity") {
    PotentialModel c = Cosine{0.7, 2.5};
    const double period = 2.0 * M_PI / 2.5;
    for (double x : {-3.0, 0.1, 1.9}) CHECK(value(c, x) == Approx(value(c, x + period)).margin(1e-12));
}

TEST_CASE("sampling on grids") {
    const auto g = periodic_grid(2.0 * M_PI, 64, -M_PI);
    CHECK(sample_values(PotentialModel{Free{}}, g) == std::vector<double>(64, 0.0));

    UniformGrid g3{-1.0, 1.0, 3};
    const auto h = sample_values(PotentialModel{Harmonic{1.0}}, g3);
    CHECK(h[0] == Approx(0.5));
    CHECK(h[1] == Approx(0.0).margin(1e-15));
    CHECK(h[2] == Approx(0.5));

    // spectral differentiation of sampled cosine matches the analytic gradient
    PotentialModel c = Cosine{1.0, 2.0};
    const auto vals = sample_values(c, g);
    Fft fft(g.n);
    const auto d = spectral_derivative(fft, vals, g.dx, 1);
    const auto dref = sample_grad(c, g);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(d[i] == Approx(dref[i]).margin(1e-10));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(PotentialModel{Harmonic{-1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PotentialModel{Cosine{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PotentialModel{DoubleWell{0.0, 1.0}}), std::invalid_argument);
    CHECK_NOTHROW(validate(PotentialModel{DoubleWell{1.0, 2.0}}));
}
