#pragma once

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rqbm/constants.hpp"
#include "rqbm/langevin.hpp"
#include "rqbm/potentials.hpp"

namespace rqbm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

struct PhaseGridSpec {
    double x_length = 2.0 * 3.14159265358979323846;
    double x0 = 0.0;
    std::size_t nx = 128;
    double p_span = 8.0;
    std::size_t np = 128;
};

struct XGridSpec {
    double length = 2.0 * 3.14159265358979323846;
    double x0 = 0.0;
    std::size_t n = 128;
};

struct EvolutionSpec {
    double dt = 0.0;  // 0 means "choose from the stability bound" where one exists
    std::size_t n_steps = 0;
    std::size_t snapshot_every = 0;  // 0: final state only
    double tol = 1e-8;               // stationary solvers
    std::size_t n_max = 200000;
};

// Initial condition across the field solvers; which fields matter depends on
// `type` (gaussian_packet, plane_wave, gaussian_density, exponential_density,
// boltzmann, uniform, juttner, gaussian_phase_space).
struct InitFieldSpec {
    std::string type = "gaussian_packet";
    double x0 = 0.0;
    double p0 = 0.0;
    double k0 = 0.0;
    double sigma = 1.0;    // packet / density width
    double sigma_x = 1.0;  // phase-space widths
    double sigma_p = 1.0;
    double k = 1.0;  // plane-wave wavenumber
    double a = 1.0;  // exponential decay rate
};

struct RunConfig {
    int schema_version = kConfigSchemaVersion;
    std::string subcommand;
    PhysicalSystem system;
    PotentialModel potential = Free{};
    EnsembleConfig ensemble;    // langevin
    PhaseGridSpec phase_grid;   // kramers / wigner
    XGridSpec grid;             // schrodinger / madelung / smoluchowski / effpot
    EvolutionSpec evolution;
    InitFieldSpec init;
    std::string mode;  // wigner mode / madelung regime / smoluchowski variant
    std::string mu_form = "q_expressed";
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

inline PhysicalSystem parse_system(const json& j) {
    check_keys(j, {"m", "c", "hbar", "kB_T", "b", "b3"}, "system");
    PhysicalSystem s;
    read_if(j, "m", s.m, "system");
    read_if(j, "c", s.c, "system");
    read_if(j, "hbar", s.hbar, "system");
    read_if(j, "kB_T", s.kB_T, "system");
    read_if(j, "b", s.b, "system");
    read_if(j, "b3", s.b3, "system");
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
    return s;
}

inline PotentialModel parse_potential(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("potential: expected an object with a \"type\" key");
    const std::string type = j.at("type").get<std::string>();
    PotentialModel pot;
    if (type == "free") {
        check_keys(j, {"type"}, "potential");
        pot = Free{};
    } else if (type == "harmonic") {
        check_keys(j, {"type", "k"}, "potential");
        Harmonic h;
        read_if(j, "k", h.k, "potential");
        pot = h;
    } else if (type == "cosine") {
        check_keys(j, {"type", "U0", "q"}, "potential");
        Cosine c;
        read_if(j, "U0", c.U0, "potential");
        read_if(j, "q", c.q, "potential");
        pot = c;
    } else if (type == "double_well") {
        check_keys(j, {"type", "alpha", "beta"}, "potential");
        DoubleWell d;
        read_if(j, "alpha", d.alpha, "potential");
        read_if(j, "beta", d.beta, "potential");
        pot = d;
    } else if (type == "linear_gravity") {
        check_keys(j, {"type", "mg"}, "potential");
        LinearGravity g;
        read_if(j, "mg", g.mg, "potential");
        pot = g;
    } else {
        throw ConfigError("potential: unknown type \"" + type + "\"");
    }
    try {
        validate(pot);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    }
    return pot;
}

inline EnsembleConfig parse_ensemble(const json& j) {
    check_keys(j, {"n_particles", "dt", "n_steps", "seed", "record_every", "init"}, "ensemble");
    EnsembleConfig c;
    read_if(j, "n_particles", c.n_particles, "ensemble");
    read_if(j, "dt", c.dt, "ensemble");
    read_if(j, "n_steps", c.n_steps, "ensemble");
    read_if(j, "seed", c.seed, "ensemble");
    read_if(j, "record_every", c.record_every, "ensemble");
    if (j.contains("init")) {
        const json& ji = j.at("init");
        check_keys(ji, {"r0", "p0", "sigma_r", "sigma_p"}, "ensemble.init");
        read_if(ji, "r0", c.init.r0, "ensemble.init");
        read_if(ji, "p0", c.init.p0, "ensemble.init");
        read_if(ji, "sigma_r", c.init.sigma_r, "ensemble.init");
        read_if(ji, "sigma_p", c.init.sigma_p, "ensemble.init");
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("ensemble: ") + e.what());
    }
    return c;
}

inline PhaseGridSpec parse_phase_grid(const json& j) {
    check_keys(j, {"x_length", "x0", "nx", "p_span", "np"}, "grid");
    PhaseGridSpec g;
    read_if(j, "x_length", g.x_length, "grid");
    read_if(j, "x0", g.x0, "grid");
    read_if(j, "nx", g.nx, "grid");
    read_if(j, "p_span", g.p_span, "grid");
    read_if(j, "np", g.np, "grid");
    if (!(g.x_length > 0.0) || !(g.p_span > 0.0) || g.nx < 2 || g.np < 2)
        throw ConfigError("grid: need positive extents and at least 2 points per axis");
    return g;
}

inline XGridSpec parse_x_grid(const json& j) {
    check_keys(j, {"length", "x0", "n"}, "grid");
    XGridSpec g;
    read_if(j, "length", g.length, "grid");
    read_if(j, "x0", g.x0, "grid");
    read_if(j, "n", g.n, "grid");
    if (!(g.length > 0.0) || g.n < 2)
        throw ConfigError("grid: need length > 0 and n >= 2");
    return g;
}

inline EvolutionSpec parse_evolution(const json& j) {
    check_keys(j, {"dt", "n_steps", "snapshot_every", "tol", "n_max"}, "evolution");
    EvolutionSpec e;
    read_if(j, "dt", e.dt, "evolution");
    read_if(j, "n_steps", e.n_steps, "evolution");
    read_if(j, "snapshot_every", e.snapshot_every, "evolution");
    read_if(j, "tol", e.tol, "evolution");
    read_if(j, "n_max", e.n_max, "evolution");
    if (e.dt < 0.0) throw ConfigError("evolution: dt must be >= 0");
    if (!(e.tol > 0.0)) throw ConfigError("evolution: tol must be > 0");
    return e;
}

inline InitFieldSpec parse_init(const json& j) {
    check_keys(j, {"type", "x0", "p0", "k0", "sigma", "sigma_x", "sigma_p", "k", "a"}, "init");
    InitFieldSpec s;
    read_if(j, "type", s.type, "init");
    read_if(j, "x0", s.x0, "init");
    read_if(j, "p0", s.p0, "init");
    read_if(j, "k0", s.k0, "init");
    read_if(j, "sigma", s.sigma, "init");
    read_if(j, "sigma_x", s.sigma_x, "init");
    read_if(j, "sigma_p", s.sigma_p, "init");
    read_if(j, "k", s.k, "init");
    read_if(j, "a", s.a, "init");
    return s;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, const std::string& subcommand) {
    detail::check_keys(j,
                       {"schema_version", "subcommand", "system", "potential", "ensemble", "grid",
                        "evolution", "init", "mode", "mu_form"},
                       "config");
    RunConfig c;
    c.subcommand = subcommand;
    detail::read_if(j, "schema_version", c.schema_version, "config");
    if (c.schema_version != kConfigSchemaVersion)
        throw ConfigError("config: unsupported schema_version " +
                          std::to_string(c.schema_version));
    if (j.contains("subcommand")) {
        const std::string sc = j.at("subcommand").get<std::string>();
        if (sc != subcommand)
            throw ConfigError("config: file is for subcommand \"" + sc + "\", not \"" +
                              subcommand + "\"");
    }
    if (j.contains("system")) c.system = detail::parse_system(j.at("system"));
    if (j.contains("potential")) c.potential = detail::parse_potential(j.at("potential"));
    if (j.contains("ensemble")) c.ensemble = detail::parse_ensemble(j.at("ensemble"));
    if (j.contains("grid")) {
        if (subcommand == "kramers" || subcommand == "wigner")
            c.phase_grid = detail::parse_phase_grid(j.at("grid"));
        else
            c.grid = detail::parse_x_grid(j.at("grid"));
    }
    if (j.contains("evolution")) c.evolution = detail::parse_evolution(j.at("evolution"));
    if (j.contains("init")) c.init = detail::parse_init(j.at("init"));
    detail::read_if(j, "mode", c.mode, "config");
    detail::read_if(j, "mu_form", c.mu_form, "config");
    if (c.mu_form != "q_expressed" && c.mu_form != "exact")
        throw ConfigError("config: mu_form must be \"q_expressed\" or \"exact\"");
    return c;
}

inline RunConfig load_config(const std::string& path, const std::string& subcommand) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j, subcommand);
}

inline std::vector<std::string> preset_names() {
    return {"juttner_equilibrium",  "moyal_harmonic",        "planewave_flux",
            "double_well_barrier",  "cosine_tunneling",      "barometric_factor",
            "c_infinity_reduction", "cubic_friction_stationary"};
}

// Pinned configurations backing the acceptance checks; each one is an
// ordinary run config for its subcommand.
inline RunConfig preset(const std::string& name) {
    RunConfig c;
    if (name == "juttner_equilibrium") {
        c.subcommand = "langevin";
        c.system.b = 1.0;  // m = c = kB_T = 1 already
        c.potential = Free{};
        c.ensemble.n_particles = 200000;
        c.ensemble.dt = 1e-3;
        c.ensemble.n_steps = 50000;  // t = 50
        c.ensemble.seed = 20240817;
        c.ensemble.record_every = 1000;
    } else if (name == "moyal_harmonic") {
        c.subcommand = "wigner";
        c.system.b = 0.0;
        c.system.kB_T = 0.0;
        c.potential = Harmonic{1.0};
        c.phase_grid = {16.0, -8.0, 64, 6.0, 128};
        c.evolution.dt = 0.0;  // stability-bound choice
        c.evolution.n_steps = 0;
        c.mode = "wigner_liouville";
        c.init = {"gaussian_phase_space", 1.0, 0.0, 0.0, 1.0, 0.7071067811865476,
                  0.7071067811865476, 1.0, 1.0};
    } else if (name == "planewave_flux") {
        c.subcommand = "schrodinger";
        c.system.c = 100.0;
        c.system.kB_T = 0.0;
        c.potential = Free{};
        c.grid = {2.0 * 3.14159265358979323846, 0.0, 64};
        c.evolution.dt = 1e-3;
        c.evolution.n_steps = 0;
        c.init.type = "plane_wave";
        c.init.k = 3.0;
    } else if (name == "double_well_barrier") {
        c.subcommand = "effpot";
        c.system.kB_T = 5.0;  // lambda_T^2 = 0.05
        c.potential = DoubleWell{1.0, 1.0};
        c.grid = {4.0, -2.0, 201};
    } else if (name == "cosine_tunneling") {
        c.subcommand = "effpot";
        c.system.c = 10.0;
        c.system.kB_T = 1.0;
        c.potential = Cosine{1.0, 2.0};
        c.grid = {3.14159265358979323846, 0.0, 128};
    } else if (name == "barometric_factor") {
        c.subcommand = "madelung";
        c.system.c = 10.0;
        c.system.b = 1.0;
        c.potential = LinearGravity{1.0};
        c.grid = {20.0, 0.0, 200};
        c.evolution.dt = 1e-4;
        c.evolution.n_steps = 0;
        c.mode = "quantum_relativistic";
        c.init.type = "exponential_density";
        c.init.a = 1.0;
    } else if (name == "c_infinity_reduction") {
        c.subcommand = "smoluchowski";
        c.system.c = 40.0;
        c.system.kB_T = 0.5;
        c.system.b = 1.0;
        // periodic potential: the density stays bounded away from zero, so
        // the quantum drift never touches the density floor
        c.potential = Cosine{0.5, 1.0};
        c.grid = {2.0 * 3.14159265358979323846, 0.0, 128};
        c.evolution.dt = 1e-3;
        c.evolution.tol = 1e-10;
        c.mode = "quantum_relativistic";
        c.init.type = "boltzmann";
    } else if (name == "cubic_friction_stationary") {
        c.subcommand = "smoluchowski";
        c.system.c = 10.0;
        c.system.kB_T = 0.5;
        c.system.b = 1.0;
        c.system.b3 = 1.0;
        c.potential = Cosine{0.5, 1.0};
        c.grid = {2.0 * 3.14159265358979323846, 0.0, 128};
        c.evolution.dt = 1e-3;
        c.evolution.tol = 1e-10;
        c.mode = "quantum_relativistic";
        c.init.type = "boltzmann";
    } else {
        std::string msg = "unknown preset \"" + name + "\"; valid presets:";
        for (const auto& p : preset_names()) msg += " " + p;
        throw ConfigError(msg);
    }
    return c;
}

}  // namespace rqbm
