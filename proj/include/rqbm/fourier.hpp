#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rqbm {

using Complex = std::complex<double>;

// Thin RAII wrapper around FFTW complex transforms of a fixed length.
// Inverse is normalized by 1/n. Plans are built once per object with
// FFTW_ESTIMATE so construction is cheap and input-independent.
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n), buf_(n) {
        if (n == 0) throw std::invalid_argument("Fft: zero length");
        auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* data) const {
        auto* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(fwd_, d, d);
    }

    void inverse(std::complex<double>* data) const {
        auto* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(inv_, d, d);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) data[i] *= s;
    }

  private:
    std::size_t n_;
    std::vector<std::complex<double>> buf_;  // scratch used only for planning
    fftw_plan fwd_;
    fftw_plan inv_;
};

// Batched strided transforms over one axis of a 2D row-major array,
// executed in place. `stride` is the element step within one transform,
// `dist` the step between consecutive transforms.
class FftMany {
  public:
    FftMany(std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist)
        : n_(n), howmany_(howmany), buf_(n * howmany) {
        auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
        const int ni = static_cast<int>(n);
        fwd_ = fftw_plan_many_dft(1, &ni, static_cast<int>(howmany), b, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), b, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), FFTW_FORWARD,
                                  FFTW_ESTIMATE);
        inv_ = fftw_plan_many_dft(1, &ni, static_cast<int>(howmany), b, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), b, nullptr,
                                  static_cast<int>(stride), static_cast<int>(dist), FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    ~FftMany() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    FftMany(const FftMany&) = delete;
    FftMany& operator=(const FftMany&) = delete;

    void forward(std::complex<double>* data) const {
        auto* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(fwd_, d, d);
    }

    // Unnormalized; caller divides by n once per round trip.
    void inverse_raw(std::complex<double>* data) const {
        auto* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(inv_, d, d);
    }

    std::size_t transform_length() const { return n_; }
    std::size_t total_size() const { return n_ * howmany_; }

  private:
    std::size_t n_;
    std::size_t howmany_;
    std::vector<std::complex<double>> buf_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

// Conjugate-variable values in FFT bin order: 2*pi*j/(n*dx), j = 0..n/2, then negative.
inline std::vector<double> fft_wavenumbers(std::size_t n, double dx) {
    std::vector<double> k(n);
    const double dk = 2.0 * 3.14159265358979323846 / (static_cast<double>(n) * dx);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long>(j);
        const long half = static_cast<long>(n) / 2;
        k[j] = dk * static_cast<double>(jj <= half ? jj : jj - static_cast<long>(n));
    }
    return k;
}

// d^order/dx^order of a real periodic field by multiplication with (ik)^order.
inline std::vector<double> spectral_derivative(const Fft& fft, const std::vector<double>& f,
                                               double dx, int order) {
    const std::size_t n = fft.size();
    if (f.size() != n) throw std::invalid_argument("spectral_derivative: size mismatch");
    std::vector<std::complex<double>> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = f[i];
    fft.forward(w.data());
    const auto k = fft_wavenumbers(n, dx);
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> ik(0.0, k[j]);
        std::complex<double> m = 1.0;
        for (int o = 0; o < order; ++o) m *= ik;
        w[j] *= m;
    }
    // Nyquist bin has no well-defined sign for odd derivatives; zero it.
    if (n % 2 == 0 && order % 2 == 1) w[n / 2] = 0.0;
    fft.inverse(w.data());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
    return out;
}

}  // namespace rqbm
