#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rqbm/fourier.hpp"
#include "rqbm/grid.hpp"

using namespace rqbm;
using Catch::Approx;

TEST_CASE("fft round trip") {
    Fft fft(48);
    std::vector<Complex> v(48);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(std::sin(0.3 * i), std::cos(0.11 * i));
    auto w = v;
    fft.forward(w.data());
    fft.inverse(w.data());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w[i] - v[i]) < 1e-13);
}

TEST_CASE("spectral derivative of trig fields") {
    const auto g = periodic_grid(2.0 * M_PI, 64);
    Fft fft(g.n);
    std::vector<double> f(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f[i] = std::sin(3.0 * g.point(i));
    const auto d1 = spectral_derivative(fft, f, g.dx, 1);
    const auto d2 = spectral_derivative(fft, f, g.dx, 2);
    const auto d4 = spectral_derivative(fft, f, g.dx, 4);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(d1[i] == Approx(3.0 * std::cos(3.0 * g.point(i))).margin(1e-10));
        CHECK(d2[i] == Approx(-9.0 * std::sin(3.0 * g.point(i))).margin(1e-10));
        CHECK(d4[i] == Approx(81.0 * std::sin(3.0 * g.point(i))).margin(1e-8));
    }
}

TEST_CASE("wavenumber layout") {
    const auto k = fft_wavenumbers(8, 2.0 * M_PI / 8.0);
    CHECK(k[0] == 0.0);
    CHECK(k[1] == Approx(1.0));
    CHECK(k[4] == Approx(4.0));
    CHECK(k[5] == Approx(-3.0));
    CHECK(k[7] == Approx(-1.0));
}

TEST_CASE("strided batch transform matches per-row transforms") {
    const std::size_t nx = 16, np = 8;
    std::vector<Complex> a(nx * np);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = Complex(std::cos(0.2 * i), 0.05 * i);

    // along p (contiguous rows)
    auto b = a;
    FftMany rows(np, nx, 1, np);
    rows.forward(b.data());
    Fft f_np(np);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        std::vector<Complex> row(a.begin() + ix * np, a.begin() + (ix + 1) * np);
        f_np.forward(row.data());
        for (std::size_t ip = 0; ip < np; ++ip) CHECK(std::abs(b[ix * np + ip] - row[ip]) < 1e-12);
    }

    // along x (stride np)
    auto c = a;
    FftMany cols(nx, np, np, 1);
    cols.forward(c.data());
    Fft f_nx(nx);
    for (std::size_t ip = 0; ip < np; ++ip) {
        std::vector<Complex> col(nx);
        for (std::size_t ix = 0; ix < nx; ++ix) col[ix] = a[ix * np + ip];
        f_nx.forward(col.data());
        for (std::size_t ix = 0; ix < nx; ++ix) CHECK(std::abs(c[ix * np + ip] - col[ix]) < 1e-12);
    }
}
