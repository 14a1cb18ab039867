#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "rqbm/config.hpp"
#include "rqbm/constants.hpp"
#include "rqbm/csv.hpp"
#include "rqbm/langevin.hpp"
#include "rqbm/madelung.hpp"
#include "rqbm/phase_space.hpp"
#include "rqbm/smoluchowski.hpp"
#include "rqbm/wavefunction.hpp"

namespace rqbm {

inline UniformGrid make_x_grid(const XGridSpec& s) {
    return periodic_grid(s.length, s.n, s.x0);
}

// name, value, unit rows behind `rqbm constants`.
struct ConstantRow {
    std::string name;
    double value;
    std::string unit;
};

inline std::vector<ConstantRow> derived_constants() {
    CodataConstants k;
    PhysicalSystem electron;
    electron.m = k.m_e;
    electron.c = k.c;
    electron.hbar = k.hbar;
    electron.unit_system = UnitSystem::SI;
    const double lc_e = compton_wavelength(electron);
    PhysicalSystem electron300 = electron;
    electron300.kB_T = k.kB * 300.0;
    const double th = black_photon_threshold(k);
    return {
        {"compton_wavelength_electron", lc_e, "m"},
        {"compton_over_classical_radius", lc_e / k.r_e, "1"},
        {"thermal_wavelength_electron_300K", thermal_wavelength(electron300), "m"},
        {"hawking_unruh_temperature_earth", hawking_unruh_temperature(k.g), "K"},
        {"black_photon_threshold", th, "m"},
        {"black_photon_mass", photon_mass(th, k), "kg"},
        {"schwarzschild_radius_at_threshold", schwarzschild_radius(photon_mass(th, k), k), "m"},
    };
}

inline void run_constants(const std::filesystem::path& out_dir, std::FILE* echo = stdout) {
    const auto rows = derived_constants();
    if (echo) {
        std::fprintf(echo, "name,value,unit\n");
        for (const auto& r : rows)
            std::fprintf(echo, "%s,%s,%s\n", r.name.c_str(), csv_number(r.value).c_str(),
                         r.unit.c_str());
    }
    if (!out_dir.empty()) {
        std::FILE* f = std::fopen((out_dir / "constants.csv").string().c_str(), "w");
        if (!f) throw std::runtime_error("cannot write constants.csv");
        std::fprintf(f, "name,value,unit\n");
        for (const auto& r : rows)
            std::fprintf(f, "%s,%s,%s\n", r.name.c_str(), csv_number(r.value).c_str(),
                         r.unit.c_str());
        std::fclose(f);
    }
}

inline void run_langevin(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto res = simulate_ensemble(cfg.system, cfg.potential, cfg.ensemble);
    CsvWriter moments(out_dir / "moments.csv", {"t", "mean_r", "mean_p", "mean_p2", "var_p"});
    for (const auto& m : res.moments) moments.row({m.t, m.mean_r, m.mean_p, m.mean_p2, m.var_p});
    CsvWriter samples(out_dir / "final_samples.csv", {"r", "p"});
    for (const auto& s : res.final_states) samples.row({s.r, s.p});
}

inline PhaseSpaceField make_phase_space_init(const RunConfig& cfg, const UniformGrid& xg,
                                             const UniformGrid& pg) {
    if (cfg.init.type == "juttner") return juttner_field(cfg.system, cfg.potential, xg, pg);
    if (cfg.init.type == "gaussian_phase_space")
        return gaussian_phase_space(xg, pg, cfg.init.x0, cfg.init.p0, cfg.init.sigma_x,
                                    cfg.init.sigma_p);
    throw ConfigError("init: unknown phase-space type \"" + cfg.init.type + "\"");
}

inline void write_phase_space(const PhaseSpaceField& f, const std::filesystem::path& path) {
    CsvWriter w(path, {"x", "p", "W"});
    for (std::size_t ix = 0; ix < f.x.n; ++ix)
        for (std::size_t ip = 0; ip < f.p.n; ++ip)
            w.row({f.x.point(ix), f.p.point(ip), f.at(ix, ip)});
}

inline void run_phase_space(const RunConfig& cfg, const std::filesystem::path& out_dir,
                            bool wigner) {
    PhaseSpaceMode mode = PhaseSpaceMode::Kramers;
    if (wigner) {
        if (cfg.mode == "wigner_liouville")
            mode = PhaseSpaceMode::WignerLiouville;
        else if (cfg.mode.empty() || cfg.mode == "wigner_kramers")
            mode = PhaseSpaceMode::WignerKramers;
        else
            throw ConfigError("mode: expected wigner_kramers or wigner_liouville, got \"" +
                              cfg.mode + "\"");
    }
    const auto xg = periodic_grid(cfg.phase_grid.x_length, cfg.phase_grid.nx, cfg.phase_grid.x0);
    const auto pg = bounded_grid(cfg.phase_grid.p_span, cfg.phase_grid.np);
    PhaseSpaceSolver solver(cfg.system, cfg.potential, xg, pg);
    const auto f0 = make_phase_space_init(cfg, xg, pg);
    const double dt = cfg.evolution.dt > 0.0 ? cfg.evolution.dt : solver.max_stable_dt(mode);
    const auto snaps = solver.evolve(f0, dt, cfg.evolution.n_steps, mode,
                                     cfg.evolution.snapshot_every);
    const std::size_t stride =
        cfg.evolution.snapshot_every > 0 ? cfg.evolution.snapshot_every : cfg.evolution.n_steps;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const std::size_t step = cfg.evolution.snapshot_every > 0 ? (i + 1) * stride
                                                                  : cfg.evolution.n_steps;
        write_phase_space(snaps[i], out_dir / ("W_t" + std::to_string(step) + ".csv"));
    }
    const auto& last = snaps.back();
    const auto rho = marginal_x(last);
    const auto j = flux_x(cfg.system, last);
    CsvWriter mx(out_dir / "marginal_x.csv", {"x", "rho", "j"});
    for (std::size_t ix = 0; ix < xg.n; ++ix) mx.row({xg.point(ix), rho[ix], j[ix]});
    const auto gp = marginal_p(last);
    CsvWriter mp(out_dir / "marginal_p.csv", {"p", "density"});
    for (std::size_t ip = 0; ip < pg.n; ++ip) mp.row({pg.point(ip), gp[ip]});
}

inline WaveField make_wave_init(const RunConfig& cfg, const UniformGrid& g) {
    if (cfg.init.type == "gaussian_packet")
        return gaussian_packet(g, cfg.init.x0, cfg.init.k0, cfg.init.sigma);
    if (cfg.init.type == "plane_wave") {
        const double L = periodic_length(g);
        const double k = std::round(cfg.init.k * L / (2.0 * M_PI)) * 2.0 * M_PI / L;
        WaveField f{g, std::vector<Complex>(g.n)};
        for (std::size_t i = 0; i < g.n; ++i) f.psi[i] = std::polar(1.0, k * g.point(i));
        normalize(f);
        return f;
    }
    throw ConfigError("init: unknown wave type \"" + cfg.init.type + "\"");
}

inline void write_wave(const PhysicalSystem& sys, const WaveField& f,
                       const std::filesystem::path& path) {
    const auto j = probability_flux(sys, f);
    CsvWriter w(path, {"x", "re_psi", "im_psi", "rho", "j"});
    for (std::size_t i = 0; i < f.x.n; ++i)
        w.row({f.x.point(i), f.psi[i].real(), f.psi[i].imag(), std::norm(f.psi[i]), j[i]});
}

inline void run_schrodinger(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto g = make_x_grid(cfg.grid);
    WaveField f = make_wave_init(cfg, g);
    if (!(cfg.evolution.dt > 0.0) && cfg.evolution.n_steps > 0)
        throw ConfigError("evolution: dt must be > 0 for schrodinger");
    const std::size_t stride = cfg.evolution.snapshot_every;
    if (cfg.evolution.n_steps == 0) {
        write_wave(cfg.system, f, out_dir / "psi_t0.csv");
        return;
    }
    std::size_t done = 0;
    while (done < cfg.evolution.n_steps) {
        const std::size_t chunk =
            stride > 0 ? std::min(stride, cfg.evolution.n_steps - done) : cfg.evolution.n_steps;
        schrodinger_evolve(cfg.system, cfg.potential, f, cfg.evolution.dt, chunk);
        done += chunk;
        write_wave(cfg.system, f, out_dir / ("psi_t" + std::to_string(done) + ".csv"));
    }
}

inline std::vector<double> make_density_init(const RunConfig& cfg, const UniformGrid& g) {
    std::vector<double> rho(g.n);
    if (cfg.init.type == "gaussian_density" || cfg.init.type == "gaussian_packet") {
        const double s2 = cfg.init.type == "gaussian_packet"
                              ? 2.0 * cfg.init.sigma * cfg.init.sigma  // |psi|^2 width
                              : cfg.init.sigma * cfg.init.sigma;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double d = g.point(i) - cfg.init.x0;
            rho[i] = std::exp(-d * d / (2.0 * s2));
        }
    } else if (cfg.init.type == "exponential_density") {
        for (std::size_t i = 0; i < g.n; ++i)
            rho[i] = std::exp(-cfg.init.a * (g.point(i) - cfg.init.x0));
    } else if (cfg.init.type == "uniform") {
        for (double& r : rho) r = 1.0;
    } else if (cfg.init.type == "boltzmann") {
        if (!(cfg.system.kB_T > 0.0)) throw ConfigError("init: boltzmann needs kB_T > 0");
        double umin = value(cfg.potential, g.point(0));
        for (std::size_t i = 1; i < g.n; ++i)
            umin = std::min(umin, value(cfg.potential, g.point(i)));
        for (std::size_t i = 0; i < g.n; ++i)
            rho[i] = std::exp(-(value(cfg.potential, g.point(i)) - umin) / cfg.system.kB_T);
    } else {
        throw ConfigError("init: unknown density type \"" + cfg.init.type + "\"");
    }
    normalize_density(g, rho);
    return rho;
}

inline void run_madelung(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto g = make_x_grid(cfg.grid);
    HydroRegime regime;
    if (cfg.mode.empty() || cfg.mode == "quantum_relativistic")
        regime = HydroRegime::QuantumRelativistic;
    else if (cfg.mode == "classical")
        regime = HydroRegime::Classical;
    else
        throw ConfigError("mode: expected quantum_relativistic or classical, got \"" + cfg.mode +
                          "\"");
    HydroFields f{g, make_density_init(cfg, g), std::vector<double>(g.n, 0.0)};
    if (cfg.init.type == "gaussian_packet" && cfg.init.k0 != 0.0)
        for (double& v : f.V) v = cfg.system.hbar * cfg.init.k0 / cfg.system.m;

    HydroEvolveOptions opt;
    opt.form = cfg.mu_form == "exact" ? MuForm::Exact : MuForm::QExpressed;
    auto dump = [&](const HydroFields& h, std::size_t step) {
        CsvWriter w(out_dir / ("hydro_t" + std::to_string(step) + ".csv"), {"x", "rho", "V"});
        for (std::size_t i = 0; i < g.n; ++i) w.row({g.point(i), h.rho[i], h.V[i]});
    };
    if (cfg.evolution.n_steps == 0) {
        dump(f, 0);
        return;
    }
    if (!(cfg.evolution.dt > 0.0)) throw ConfigError("evolution: dt must be > 0 for madelung");
    const std::size_t stride = cfg.evolution.snapshot_every;
    std::size_t done = 0;
    while (done < cfg.evolution.n_steps) {
        const std::size_t chunk =
            stride > 0 ? std::min(stride, cfg.evolution.n_steps - done) : cfg.evolution.n_steps;
        const auto res = hydro_evolve(cfg.system, cfg.potential, f, cfg.evolution.dt, chunk,
                                      regime, opt);
        f = res.fields;
        done += chunk;
        dump(f, done);
    }
}

inline SmolVariant parse_smol_variant(const std::string& mode) {
    if (mode.empty() || mode == "quantum_relativistic") return SmolVariant::QuantumRelativistic;
    if (mode == "quantum_nonrelativistic") return SmolVariant::QuantumNonrelativistic;
    if (mode == "classical") return SmolVariant::Classical;
    throw ConfigError("mode: unknown smoluchowski variant \"" + mode + "\"");
}

inline void run_smoluchowski(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto g = make_x_grid(cfg.grid);
    DensityField f{g, make_density_init(cfg, g)};
    const SmolVariant variant = parse_smol_variant(cfg.mode);
    SmolOptions opt;
    opt.form = cfg.mu_form == "exact" ? MuForm::Exact : MuForm::QExpressed;
    if (!(cfg.evolution.dt > 0.0)) throw ConfigError("evolution: dt must be > 0 for smoluchowski");
    const auto res = evolve_to_stationary(cfg.system, cfg.potential, f, variant, cfg.evolution.dt,
                                          cfg.evolution.tol, cfg.evolution.n_max, opt);
    CsvWriter w(out_dir / ("rho_t" + std::to_string(res.n_steps) + ".csv"), {"x", "rho"});
    for (std::size_t i = 0; i < g.n; ++i) w.row({g.point(i), res.field.rho[i]});
    CsvWriter rep(out_dir / "report.csv", {"residual", "n_steps", "converged"});
    rep.row({res.residual, static_cast<double>(res.n_steps), res.converged ? 1.0 : 0.0});
    if (!res.converged)
        throw std::runtime_error("smoluchowski: not stationary after " +
                                 std::to_string(res.n_steps) +
                                 " steps, residual " + csv_number(res.residual));
}

inline void run_effpot(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto g = make_x_grid(cfg.grid);
    const auto rep = effective_potential(cfg.system, cfg.potential, g);
    CsvWriter w(out_dir / "u_eff.csv", {"x", "U", "U_eff"});
    for (std::size_t i = 0; i < g.n; ++i)
        w.row({g.point(i), value(cfg.potential, g.point(i)), rep.u_eff[i]});

    std::FILE* f = std::fopen((out_dir / "report.csv").string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write report.csv");
    std::fprintf(f, "name,value\n");
    auto put = [&](const char* name, double v) {
        std::fprintf(f, "%s,%s\n", name, csv_number(v).c_str());
    };
    put("lambda_T", rep.lambda_T);
    put("lambda_C", rep.lambda_C);
    if (rep.cosine_factor) put("cosine_factor", *rep.cosine_factor);
    if (rep.free_diffusion_kT) put("free_diffusion_kT", *rep.free_diffusion_kT);
    if (rep.dw_constant) put("dw_constant", *rep.dw_constant);
    if (rep.dw_quadratic) put("dw_quadratic", *rep.dw_quadratic);
    if (rep.dw_quartic) put("dw_quartic", *rep.dw_quartic);
    if (rep.barrier_energy) put("barrier_energy", *rep.barrier_energy);
    if (rep.zero_barrier_kT) put("zero_barrier_kT", *rep.zero_barrier_kT);
    std::fclose(f);
}

}  // namespace rqbm
