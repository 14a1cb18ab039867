#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "rqbm/config.hpp"
#include "rqbm/runner.hpp"
#include "rqbm/validate.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config;
    std::string preset;
    std::string out = ".";
};

void add_common(CLI::App* sub, CommonOpts& o) {
    auto* cfg = sub->add_option("--config", o.config, "JSON run configuration");
    auto* pre = sub->add_option("--preset", o.preset, "named built-in configuration");
    sub->add_option("--out", o.out, "output directory (created if missing)");
    cfg->excludes(pre);
}

rqbm::RunConfig resolve_config(const CommonOpts& o, const std::string& subcommand) {
    if (!o.preset.empty()) {
        rqbm::RunConfig c = rqbm::preset(o.preset);
        if (c.subcommand != subcommand)
            throw rqbm::ConfigError("preset \"" + o.preset + "\" belongs to subcommand \"" +
                                    c.subcommand + "\", not \"" + subcommand + "\"");
        return c;
    }
    if (!o.config.empty()) return rqbm::load_config(o.config, subcommand);
    throw rqbm::ConfigError(subcommand + ": need --config or --preset");
}

fs::path ensure_out(const CommonOpts& o) {
    fs::path p(o.out);
    fs::create_directories(p);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic quantum Brownian motion toolbox"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "cap on worker threads (does not affect results)")
        ->check(CLI::Range(1, 1 << 16));

    CommonOpts c_const, c_lang, c_kram, c_wig, c_schr, c_made, c_smol, c_eff;
    std::string validate_only;

    auto* s_const = app.add_subcommand("constants", "derived physical constants");
    s_const->add_option("--out", c_const.out, "output directory");

    auto* s_lang = app.add_subcommand("langevin", "stochastic ensemble simulation");
    add_common(s_lang, c_lang);
    auto* s_kram = app.add_subcommand("kramers", "classical phase-space evolution");
    add_common(s_kram, c_kram);
    auto* s_wig = app.add_subcommand("wigner", "quantum phase-space evolution");
    add_common(s_wig, c_wig);
    auto* s_schr = app.add_subcommand("schrodinger", "wave-function evolution");
    add_common(s_schr, c_schr);
    auto* s_made = app.add_subcommand("madelung", "hydrodynamic evolution");
    add_common(s_made, c_made);
    auto* s_smol = app.add_subcommand("smoluchowski", "overdamped density relaxation");
    add_common(s_smol, c_smol);
    auto* s_eff = app.add_subcommand("effpot", "effective potential report");
    add_common(s_eff, c_eff);
    auto* s_val = app.add_subcommand("validate", "run the built-in physics checks");
    auto* v_only = s_val->add_option("--only", validate_only, "comma-separated check numbers");
    s_val->add_flag("--all", "run every check (the default)")->excludes(v_only);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // bad command line is a configuration error
    }
    (void)threads;  // every solver runs single-threaded; any positive cap is honored

    try {
        if (s_const->parsed()) {
            std::filesystem::path out;
            if (s_const->count("--out")) {
                out = c_const.out;
                std::filesystem::create_directories(out);
            }
            rqbm::run_constants(out);
        } else if (s_lang->parsed()) {
            rqbm::run_langevin(resolve_config(c_lang, "langevin"), ensure_out(c_lang));
        } else if (s_kram->parsed()) {
            rqbm::run_phase_space(resolve_config(c_kram, "kramers"), ensure_out(c_kram), false);
        } else if (s_wig->parsed()) {
            rqbm::run_phase_space(resolve_config(c_wig, "wigner"), ensure_out(c_wig), true);
        } else if (s_schr->parsed()) {
            rqbm::run_schrodinger(resolve_config(c_schr, "schrodinger"), ensure_out(c_schr));
        } else if (s_made->parsed()) {
            rqbm::run_madelung(resolve_config(c_made, "madelung"), ensure_out(c_made));
        } else if (s_smol->parsed()) {
            rqbm::run_smoluchowski(resolve_config(c_smol, "smoluchowski"), ensure_out(c_smol));
        } else if (s_eff->parsed()) {
            rqbm::run_effpot(resolve_config(c_eff, "effpot"), ensure_out(c_eff));
        } else if (s_val->parsed()) {
            std::vector<int> ids;
            if (validate_only.empty()) {
                for (int id = 1; id <= rqbm::kNumChecks; ++id) ids.push_back(id);
            } else {
                std::size_t pos = 0;
                while (pos <= validate_only.size()) {
                    const std::size_t comma = validate_only.find(',', pos);
                    const std::string tok = validate_only.substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos);
                    const int id = std::atoi(tok.c_str());
                    if (id < 1 || id > rqbm::kNumChecks)
                        throw rqbm::ConfigError("validate: bad check id \"" + tok + "\"");
                    ids.push_back(id);
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            }
            bool all_pass = true;
            for (int id : ids) {
                const auto r = rqbm::run_check(id);
                std::printf("[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                            r.detail.c_str());
                std::fflush(stdout);
                if (!r.pass) all_pass = false;
            }
            if (!all_pass) return 2;
        }
    } catch (const rqbm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
