#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqbm/constants.hpp"
#include "rqbm/potentials.hpp"
#include "rqbm/rng.hpp"

namespace rqbm {

struct ParticleState {
    double r = 0.0;
    double p = 0.0;
};

// Initial distribution: delta when a sigma is zero, Gaussian otherwise.
struct InitSpec {
    double r0 = 0.0;
    double p0 = 0.0;
    double sigma_r = 0.0;
    double sigma_p = 0.0;
};

struct EnsembleConfig {
    std::size_t n_particles = 1;
    double dt = 1e-3;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    InitSpec init;
    std::size_t record_every = 1;  // moment-record stride in steps
    bool keep_final_samples = true;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("EnsembleConfig: dt must be > 0");
        if (n_particles < 1) throw std::invalid_argument("EnsembleConfig: n_particles >= 1");
        if (record_every < 1) throw std::invalid_argument("EnsembleConfig: record_every >= 1");
    }
};

struct MomentRecord {
    double t;
    double mean_r;
    double mean_p;
    double mean_p2;
    double var_p;
};

struct EnsembleResult {
    std::vector<MomentRecord> moments;
    std::vector<ParticleState> final_states;
};

// M = sqrt(m^2 + p^2/c^2) >= m, even in p.
inline double dynamic_mass(const PhysicalSystem& sys, double p) {
    return std::sqrt(sys.m * sys.m + p * p / (sys.c * sys.c));
}

inline double relativistic_energy(const PhysicalSystem& sys, const PotentialModel& pot, double r,
                                  double p) {
    const double c2 = sys.c * sys.c;
    return std::sqrt(sys.m * sys.m * c2 * c2 + c2 * p * p) + value(pot, r);
}

// log W_BJ = -E/kB_T, unnormalized.
inline double juttner_log_density(const PhysicalSystem& sys, const PotentialModel& pot, double r,
                                  double p) {
    if (!(sys.kB_T > 0.0)) throw std::domain_error("juttner_log_density: need kB_T > 0");
    return -relativistic_energy(sys, pot, r, p) / sys.kB_T;
}

// One stochastic-Heun update. `noise` is a standard normal deviate; the
// increment sqrt(2 b kB_T dt) * noise is the unique amplitude matching the
// Klein-Kramers momentum diffusion coefficient b kB_T.
template <typename Pot>
ParticleState heun_step(const PhysicalSystem& sys, const Pot& pot, ParticleState s, double dt,
                        double noise) {
    const double dw = std::sqrt(2.0 * sys.b * sys.kB_T * dt) * noise;
    const double v0 = s.p / dynamic_mass(sys, s.p);
    const double ar0 = v0;
    const double ap0 = -grad(pot, s.r) - sys.b * v0;
    const double rp = s.r + dt * ar0;
    const double pp = s.p + dt * ap0 + dw;
    const double v1 = pp / dynamic_mass(sys, pp);
    const double ar1 = v1;
    const double ap1 = -grad(pot, rp) - sys.b * v1;
    return {s.r + 0.5 * dt * (ar0 + ar1), s.p + 0.5 * dt * (ap0 + ap1) + dw};
}

inline ParticleState heun_step(const PhysicalSystem& sys, const PotentialModel& pot,
                               ParticleState s, double dt, double noise) {
    return std::visit([&](const auto& p) { return heun_step(sys, p, s, dt, noise); }, pot);
}

// Single trajectory with caller-supplied noise deviates (one per step).
// Used by the convergence harness, which couples coarse and fine paths.
template <typename Pot>
ParticleState simulate_path(const PhysicalSystem& sys, const Pot& pot, ParticleState s, double dt,
                            std::span<const double> noise) {
    for (double n : noise) s = heun_step(sys, pot, s, dt, n);
    return s;
}

namespace detail {

// Hot loop of the ensemble simulator, kept free of calls and throws so it
// vectorizes.
template <typename Pot>
void heun_block(const Pot& pot, double* __restrict r, double* __restrict p,
                const double* __restrict dw, std::size_t n, double dt, double b, double m2,
                double inv_c2) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v0 = p[i] / std::sqrt(m2 + p[i] * p[i] * inv_c2);
        const double ap0 = -grad(pot, r[i]) - b * v0;
        const double rp = r[i] + dt * v0;
        const double pp = p[i] + dt * ap0 + dw[i];
        const double v1 = pp / std::sqrt(m2 + pp * pp * inv_c2);
        const double ap1 = -grad(pot, rp) - b * v1;
        r[i] += 0.5 * dt * (v0 + v1);
        p[i] += 0.5 * dt * (ap0 + ap1) + dw[i];
    }
}

// Particles advance in cache-resident blocks; the per-step loop over a block
// vectorizes while the ziggurat draws stay scalar. Moment sums accumulate in
// a fixed order, so the result is a pure function of (sys, pot, cfg).
template <typename Pot>
EnsembleResult simulate_ensemble_typed(const PhysicalSystem& sys, const Pot& pot,
                                       const EnsembleConfig& cfg) {
    cfg.validate();
    sys.validate();

    const std::size_t n_rec = cfg.n_steps / cfg.record_every + 1;
    std::vector<double> sum_r(n_rec, 0.0), sum_p(n_rec, 0.0), sum_p2(n_rec, 0.0);

    EnsembleResult out;
    if (cfg.keep_final_samples) out.final_states.resize(cfg.n_particles);

    constexpr std::size_t kBlock = 1024;
    const double amp = std::sqrt(2.0 * sys.b * sys.kB_T * cfg.dt);
    const double inv_c2 = 1.0 / (sys.c * sys.c);
    const double m2 = sys.m * sys.m;
    ZigguratNormal normal;

    std::vector<double> r(kBlock), p(kBlock), dw(kBlock);
    std::vector<Xoshiro256> rng(kBlock);

    for (std::size_t base = 0; base < cfg.n_particles; base += kBlock) {
        const std::size_t nb = std::min(kBlock, cfg.n_particles - base);
        for (std::size_t i = 0; i < nb; ++i) {
            rng[i] = Xoshiro256(cfg.seed, base + i);
            r[i] = cfg.init.r0 + (cfg.init.sigma_r > 0.0 ? cfg.init.sigma_r * normal(rng[i]) : 0.0);
            p[i] = cfg.init.p0 + (cfg.init.sigma_p > 0.0 ? cfg.init.sigma_p * normal(rng[i]) : 0.0);
        }

        auto record = [&](std::size_t slot, std::size_t step) {
            double sr = 0.0, sp = 0.0, sp2 = 0.0;
            for (std::size_t i = 0; i < nb; ++i) {
                sr += r[i];
                sp += p[i];
                sp2 += p[i] * p[i];
            }
            if (!std::isfinite(sr) || !std::isfinite(sp2))
                throw std::runtime_error("simulate_ensemble: non-finite state at step " +
                                         std::to_string(step));
            sum_r[slot] += sr;
            sum_p[slot] += sp;
            sum_p2[slot] += sp2;
        };

        record(0, 0);
        for (std::size_t step = 1; step <= cfg.n_steps; ++step) {
            if (amp > 0.0) {
                for (std::size_t i = 0; i < nb; ++i) dw[i] = amp * normal(rng[i]);
            } else {
                for (std::size_t i = 0; i < nb; ++i) dw[i] = 0.0;
            }
            heun_block(pot, r.data(), p.data(), dw.data(), nb, cfg.dt, sys.b, m2, inv_c2);
            if (step % cfg.record_every == 0) record(step / cfg.record_every, step);
        }

        if (cfg.keep_final_samples)
            for (std::size_t i = 0; i < nb; ++i) out.final_states[base + i] = {r[i], p[i]};
    }

    const double inv_n = 1.0 / static_cast<double>(cfg.n_particles);
    out.moments.resize(n_rec);
    for (std::size_t s = 0; s < n_rec; ++s) {
        const double mr = sum_r[s] * inv_n;
        const double mp = sum_p[s] * inv_n;
        const double mp2 = sum_p2[s] * inv_n;
        out.moments[s] = {static_cast<double>(s * cfg.record_every) * cfg.dt, mr, mp, mp2,
                          mp2 - mp * mp};
    }
    return out;
}

}  // namespace detail

inline EnsembleResult simulate_ensemble(const PhysicalSystem& sys, const PotentialModel& pot,
                                        const EnsembleConfig& cfg) {
    validate(pot);
    return std::visit(
        [&](const auto& p) { return detail::simulate_ensemble_typed(sys, p, cfg); }, pot);
}

}  // namespace rqbm
