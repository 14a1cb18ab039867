#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqbm/constants.hpp"
#include "rqbm/fourier.hpp"
#include "rqbm/grid.hpp"
#include "rqbm/langevin.hpp"
#include "rqbm/potentials.hpp"

namespace rqbm {

// W(x, p) on a periodic x grid and a bounded p grid, row-major W[ix*np + ip].
// The field is clamped to zero outside [-P, P]; the span must be wide enough
// that the boundary values are negligible.
struct PhaseSpaceField {
    UniformGrid x;  // periodic
    UniformGrid p;  // bounded, symmetric
    std::vector<double> W;

    double& at(std::size_t ix, std::size_t ip) { return W[ix * p.n + ip]; }
    double at(std::size_t ix, std::size_t ip) const { return W[ix * p.n + ip]; }
};

enum class PhaseSpaceMode { Kramers, WignerKramers, WignerLiouville };

inline double phase_space_mass(const PhaseSpaceField& f) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < f.x.n; ++ix)
        for (std::size_t ip = 0; ip < f.p.n; ++ip)
            s += trapezoid_weight(f.p, ip, false) * f.at(ix, ip);
    return s * f.x.dx * f.p.dx;
}

inline void normalize(PhaseSpaceField& f) {
    const double mass = phase_space_mass(f);
    if (!(mass > 0.0)) throw std::domain_error("normalize: nonpositive phase-space mass");
    for (double& w : f.W) w /= mass;
}

// Grid-sampled Boltzmann-Juttner density exp(-E/kB_T), normalized.
inline PhaseSpaceField juttner_field(const PhysicalSystem& sys, const PotentialModel& pot,
                                     const UniformGrid& xg, const UniformGrid& pg) {
    PhaseSpaceField f{xg, pg, std::vector<double>(xg.n * pg.n)};
    // subtract the rest energy so the exponent is O(1)
    const double e0 = relativistic_energy(sys, pot, xg.point(0), 0.0);
    for (std::size_t ix = 0; ix < xg.n; ++ix)
        for (std::size_t ip = 0; ip < pg.n; ++ip)
            f.at(ix, ip) = std::exp(
                -(relativistic_energy(sys, pot, xg.point(ix), pg.point(ip)) - e0) / sys.kB_T);
    normalize(f);
    return f;
}

inline PhaseSpaceField gaussian_phase_space(const UniformGrid& xg, const UniformGrid& pg,
                                            double x0, double p0, double sx, double sp) {
    PhaseSpaceField f{xg, pg, std::vector<double>(xg.n * pg.n)};
    for (std::size_t ix = 0; ix < xg.n; ++ix) {
        const double ex = std::exp(-0.5 * std::pow((xg.point(ix) - x0) / sx, 2));
        for (std::size_t ip = 0; ip < pg.n; ++ip)
            f.at(ix, ip) = ex * std::exp(-0.5 * std::pow((pg.point(ip) - p0) / sp, 2));
    }
    normalize(f);
    return f;
}

// Evaluates the right-hand sides of the kinetic equations. Owns the FFT
// plans and scratch buffers so repeated evaluations are cheap.
class PhaseSpaceSolver {
  public:
    PhaseSpaceSolver(const PhysicalSystem& sys, const PotentialModel& pot, const UniformGrid& xg,
                     const UniformGrid& pg)
        : sys_(sys), pot_(pot), xg_(xg), pg_(pg),
          fft_x_(xg.n, pg.n, pg.n, 1), fft_p_(pg.n, xg.n, 1, pg.n),
          buf_(xg.n * pg.n) {
        sys.validate();
        validate(pot);
        kx_ = fft_wavenumbers(xg_.n, xg_.dx);
        force_ = sample_grad(pot, xg_);
        vel_.resize(pg_.n);
        for (std::size_t ip = 0; ip < pg_.n; ++ip) {
            const double p = pg_.point(ip);
            vel_[ip] = p / dynamic_mass(sys_, p);
        }
        // Quantum-term multiplier in the p-conjugate variable s:
        // [U(x - hbar s/2) - U(x + hbar s/2)] / (i hbar). The sign is pinned
        // by the requirement that a quadratic U reproduces the classical
        // force term d_xU d_pW exactly.
        const auto s_vals = fft_wavenumbers(pg_.n, pg_.dx);
        theta_.resize(xg_.n * pg_.n);
        for (std::size_t ix = 0; ix < xg_.n; ++ix) {
            const double x = xg_.point(ix);
            for (std::size_t is = 0; is < pg_.n; ++is) {
                const double sh = 0.5 * sys_.hbar * s_vals[is];
                const double du = value(pot, x - sh) - value(pot, x + sh);
                theta_[ix * pg_.n + is] = Complex(0.0, -du / sys_.hbar);  // du / (i hbar)
            }
        }
    }

    const UniformGrid& x_grid() const { return xg_; }
    const UniformGrid& p_grid() const { return pg_; }

    // -(p/M) d_xW + d_xU d_pW + b d_p(pW/M + kB_T d_pW)
    std::vector<double> kramers_rhs(const PhaseSpaceField& f) const {
        std::vector<double> rhs = streaming_term(f);
        add_classical_force(f, rhs);
        add_friction(f, rhs);
        return rhs;
    }

    // The nonlocal potential term of the quantum kinetic equation alone.
    std::vector<double> wigner_quantum_term(const PhaseSpaceField& f) const {
        std::vector<double> out(f.W.size(), 0.0);
        add_quantum_force(f, out);
        return out;
    }

    std::vector<double> rhs(const PhaseSpaceField& f, PhaseSpaceMode mode) const {
        std::vector<double> r = streaming_term(f);
        if (mode == PhaseSpaceMode::Kramers)
            add_classical_force(f, r);
        else
            add_quantum_force(f, r);
        if (mode != PhaseSpaceMode::WignerLiouville) add_friction(f, r);
        return r;
    }

    // Advertised RK4 stability bound, safety 0.4.
    double max_stable_dt(PhaseSpaceMode mode) const {
        const double safety = 0.4;
        double vmax = 0.0;
        for (double v : vel_) vmax = std::max(vmax, std::abs(v));
        double fmax = 0.0;
        for (double fo : force_) fmax = std::max(fmax, std::abs(fo));
        double dt = safety * xg_.dx / std::max(vmax, 1e-300);
        if (fmax > 0.0) dt = std::min(dt, safety * pg_.dx / fmax);
        if (mode != PhaseSpaceMode::WignerLiouville && sys_.b * sys_.kB_T > 0.0)
            dt = std::min(dt, safety * pg_.dx * pg_.dx / (sys_.b * sys_.kB_T));
        return dt;
    }

    std::vector<PhaseSpaceField> evolve(const PhaseSpaceField& f0, double dt, std::size_t n_steps,
                                        PhaseSpaceMode mode, std::size_t snapshot_every = 0) const {
        if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
        const double dt_max = max_stable_dt(mode);
        if (dt > dt_max)
            throw std::invalid_argument("evolve: dt = " + std::to_string(dt) +
                                        " exceeds the stability bound " + std::to_string(dt_max));
        std::vector<PhaseSpaceField> snaps;
        PhaseSpaceField f = f0;
        const std::size_t n = f.W.size();
        std::vector<double> w1(n), w2(n);
        PhaseSpaceField tmp = f;
        for (std::size_t s = 0; s < n_steps; ++s) {
            const auto k1 = rhs(f, mode);
            for (std::size_t i = 0; i < n; ++i) tmp.W[i] = f.W[i] + 0.5 * dt * k1[i];
            const auto k2 = rhs(tmp, mode);
            for (std::size_t i = 0; i < n; ++i) tmp.W[i] = f.W[i] + 0.5 * dt * k2[i];
            const auto k3 = rhs(tmp, mode);
            for (std::size_t i = 0; i < n; ++i) tmp.W[i] = f.W[i] + dt * k3[i];
            const auto k4 = rhs(tmp, mode);
            for (std::size_t i = 0; i < n; ++i)
                f.W[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (snapshot_every > 0 && (s + 1) % snapshot_every == 0) snaps.push_back(f);
        }
        if (snapshot_every == 0 || n_steps % std::max<std::size_t>(snapshot_every, 1) != 0 ||
            n_steps == 0)
            snaps.push_back(f);
        return snaps;
    }

  private:
    std::vector<double> streaming_term(const PhaseSpaceField& f) const {
        // spectral d_x along columns, times -p/M
        const std::size_t nx = xg_.n, np = pg_.n;
        for (std::size_t i = 0; i < nx * np; ++i) buf_[i] = f.W[i];
        fft_x_.forward(buf_.data());
        for (std::size_t ix = 0; ix < nx; ++ix) {
            Complex ik(0.0, kx_[ix]);
            if (nx % 2 == 0 && ix == nx / 2) ik = 0.0;  // Nyquist
            for (std::size_t ip = 0; ip < np; ++ip) buf_[ix * np + ip] *= ik;
        }
        fft_x_.inverse_raw(buf_.data());
        std::vector<double> out(nx * np);
        const double inv_n = 1.0 / static_cast<double>(nx);
        for (std::size_t ix = 0; ix < nx; ++ix)
            for (std::size_t ip = 0; ip < np; ++ip)
                out[ix * np + ip] = -vel_[ip] * buf_[ix * np + ip].real() * inv_n;
        return out;
    }

    // centered difference in p with zero ghost values outside [-P, P]
    static double dp_centered(const PhaseSpaceField& f, std::size_t ix, std::size_t ip,
                              double inv_2dp) {
        const double up = ip + 1 < f.p.n ? f.at(ix, ip + 1) : 0.0;
        const double dn = ip > 0 ? f.at(ix, ip - 1) : 0.0;
        return (up - dn) * inv_2dp;
    }

    void add_classical_force(const PhaseSpaceField& f, std::vector<double>& rhs) const {
        const double inv_2dp = 0.5 / pg_.dx;
        for (std::size_t ix = 0; ix < xg_.n; ++ix)
            for (std::size_t ip = 0; ip < pg_.n; ++ip)
                rhs[ix * pg_.n + ip] += force_[ix] * dp_centered(f, ix, ip, inv_2dp);
    }

    void add_quantum_force(const PhaseSpaceField& f, std::vector<double>& rhs) const {
        const std::size_t nx = xg_.n, np = pg_.n;
        for (std::size_t i = 0; i < nx * np; ++i) buf_[i] = f.W[i];
        fft_p_.forward(buf_.data());
        for (std::size_t i = 0; i < nx * np; ++i) buf_[i] *= theta_[i];
        fft_p_.inverse_raw(buf_.data());
        const double inv_n = 1.0 / static_cast<double>(np);
        double max_imag = 0.0, max_abs = 0.0;
        for (std::size_t i = 0; i < nx * np; ++i) {
            const Complex v = buf_[i] * inv_n;
            rhs[i] += v.real();
            max_imag = std::max(max_imag, std::abs(v.imag()));
            max_abs = std::max(max_abs, std::abs(v));
        }
        if (max_abs > 0.0 && max_imag > 1e-8 * max_abs)
            throw std::runtime_error("wigner_quantum_term: imaginary residue exceeds tolerance");
    }

    void add_friction(const PhaseSpaceField& f, std::vector<double>& rhs) const {
        if (sys_.b == 0.0) return;
        const std::size_t np = pg_.n;
        const double inv_2dp = 0.5 / pg_.dx;
        std::vector<double> g(np);
        for (std::size_t ix = 0; ix < xg_.n; ++ix) {
            for (std::size_t ip = 0; ip < np; ++ip)
                g[ip] = vel_[ip] * f.at(ix, ip) + sys_.kB_T * dp_centered(f, ix, ip, inv_2dp);
            for (std::size_t ip = 0; ip < np; ++ip) {
                const double up = ip + 1 < np ? g[ip + 1] : 0.0;
                const double dn = ip > 0 ? g[ip - 1] : 0.0;
                rhs[ix * np + ip] += sys_.b * (up - dn) * inv_2dp;
            }
        }
    }

    PhysicalSystem sys_;
    PotentialModel pot_;
    UniformGrid xg_, pg_;
    FftMany fft_x_, fft_p_;
    mutable std::vector<Complex> buf_;
    std::vector<double> kx_, force_, vel_;
    std::vector<Complex> theta_;
};

inline std::vector<double> kramers_rhs(const PhysicalSystem& sys, const PotentialModel& pot,
                                       const PhaseSpaceField& f) {
    return PhaseSpaceSolver(sys, pot, f.x, f.p).kramers_rhs(f);
}

inline std::vector<double> wigner_quantum_term(const PhysicalSystem& sys, const PotentialModel& pot,
                                               const PhaseSpaceField& f) {
    return PhaseSpaceSolver(sys, pot, f.x, f.p).wigner_quantum_term(f);
}

// rho(x) = int W dp (trapezoid).
inline std::vector<double> marginal_x(const PhaseSpaceField& f) {
    std::vector<double> rho(f.x.n, 0.0);
    for (std::size_t ix = 0; ix < f.x.n; ++ix)
        for (std::size_t ip = 0; ip < f.p.n; ++ip)
            rho[ix] += trapezoid_weight(f.p, ip, false) * f.at(ix, ip);
    for (double& r : rho) r *= f.p.dx;
    return rho;
}

inline std::vector<double> marginal_p(const PhaseSpaceField& f) {
    std::vector<double> g(f.p.n, 0.0);
    for (std::size_t ix = 0; ix < f.x.n; ++ix)
        for (std::size_t ip = 0; ip < f.p.n; ++ip) g[ip] += f.at(ix, ip);
    for (double& v : g) v *= f.x.dx;
    return g;
}

// j(x) = int (p/M) W dp.
inline std::vector<double> flux_x(const PhysicalSystem& sys, const PhaseSpaceField& f) {
    std::vector<double> j(f.x.n, 0.0);
    for (std::size_t ip = 0; ip < f.p.n; ++ip) {
        const double p = f.p.point(ip);
        const double w = trapezoid_weight(f.p, ip, false) * p / dynamic_mass(sys, p);
        for (std::size_t ix = 0; ix < f.x.n; ++ix) j[ix] += w * f.at(ix, ip);
    }
    for (double& v : j) v *= f.p.dx;
    return j;
}

}  // namespace rqbm
