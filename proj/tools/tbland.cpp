#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "tblandscape/experiment.hpp"

namespace {

constexpr int kUsage = 64;

struct Flags {
    std::map<std::string, std::string> values;
    bool dual = false;
    std::string config;
};

void add_run_flags(CLI::App& cmd, Flags& f) {
    const std::pair<const char*, const char*> opts[] = {
        {"dim", "lattice dimension d"},
        {"size", "side length K"},
        {"bc", "periodic | dirichlet"},
        {"potential", "bernoulli:LOW,HIGH,P_LOW | uniform:VMAX | constant:C | file:PATH"},
        {"seed", "random seed"},
        {"vmax", "recorded V_max for constant or file potentials"},
        {"delta", "well threshold margin"},
        {"alpha", "fixed decay rate (default: calibrated per eigenpair)"},
        {"c-abs", "global value for the decay constant C (default: measured)"},
        {"eigs", "eigenpairs: 1,4,12 | 3-8 | lowest:K | highest:K"},
        {"tol", "landscape solver tolerance (max-norm residual)"},
        {"eig-tol", "eigenpair residual tolerance"},
        {"out", "output directory"},
        {"name", "run name recorded in the report"},
    };
    for (const auto& [key, help] : opts) {
        cmd.add_option_function<std::string>(
            std::string("--") + key, [&f, k = std::string(key)](const std::string& v) { f.values[k] = v; }, help);
    }
    cmd.add_flag("--dual", f.dual, "use the dual landscape for the selected (high) eigenpairs");
    cmd.add_option("--config", f.config, "file of 'key = value' lines; flags take precedence")->check(CLI::ExistingFile);
}

tbl::ExperimentConfig build_config(tbl::ExperimentConfig cfg, const Flags& f) {
    if (!f.config.empty()) {
        for (const auto& [k, v] : tbl::read_config_file(f.config)) tbl::apply_setting(cfg, k, v);
    }
    for (const auto& [k, v] : f.values) tbl::apply_setting(cfg, k, v);
    if (f.dual) cfg.dual = true;
    return cfg;
}

void summarize(const tbl::ExperimentResult& r) {
    std::size_t hard = 0, failed = 0;
    for (const auto& c : r.checks) {
        if (!c.hard) continue;
        ++hard;
        if (!c.passed) {
            ++failed;
            std::fprintf(stderr, "FAIL %s", c.name.c_str());
            if (c.ordinal) std::fprintf(stderr, " [%zu]", *c.ordinal);
            std::fprintf(stderr, ": lhs=%.6e rhs=%.6e %s\n", c.lhs, c.rhs, c.note.c_str());
        }
    }
    for (const auto& p : r.pairs) {
        std::printf("  mu_%zu = %.10f  residual %.2e  alpha %.4f  wells %zu (%d components)  containment %.3f\n",
                    p.pair.ordinal, p.pair.mu, p.pair.residual, p.alpha, p.well_sites, p.components, p.containment);
    }
    std::printf("%s: %zu hard checks, %zu failed -> %s\n", r.config.name.c_str(), hard, failed,
                r.config.out.string().c_str());
    if (r.error) std::fprintf(stderr, "error: %s\n", r.error->c_str());
}

int execute(const tbl::ExperimentConfig& cfg, bool suite) {
    const tbl::ExperimentResult r = suite ? tbl::run_verify_suite(cfg) : tbl::run_experiment(cfg);
    summarize(r);
    return r.exit_status();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localization landscape experiments on tight-binding lattices"};
    app.require_subcommand(1);

    Flags run_flags, preset_flags, verify_flags;
    CLI::App* run = app.add_subcommand("run", "run one configured experiment");
    add_run_flags(*run, run_flags);

    std::string preset_name;
    CLI::App* preset = app.add_subcommand("preset", "run a named preset (flags override preset fields)");
    preset->add_option("preset", preset_name, "preset name (see list-presets)")->required();
    add_run_flags(*preset, preset_flags);

    CLI::App* verify = app.add_subcommand("verify", "run the property suite on small instances");
    add_run_flags(*verify, verify_flags);

    CLI::App* list = app.add_subcommand("list-presets", "print the available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*list) {
            for (const auto& p : tbl::presets()) std::printf("%-28s %s\n", p.name.c_str(), p.description.c_str());
            return 0;
        }
        if (*run) return execute(build_config({}, run_flags), false);
        if (*verify) {
            tbl::ExperimentConfig base;
            base.name = "verify";
            base.seed = 7;
            base.out = "out/verify";
            return execute(build_config(base, verify_flags), true);
        }
        const tbl::Preset& p = tbl::find_preset(preset_name);
        int status = 0;
        for (tbl::ExperimentConfig cfg : p.runs) {
            cfg.out = p.runs.size() > 1 ? std::filesystem::path("out") / p.name / cfg.name
                                        : std::filesystem::path("out") / p.name;
            const auto overridden = build_config(cfg, preset_flags);
            tbl::ExperimentConfig final_cfg = overridden;
            if (preset_flags.values.count("out") && p.runs.size() > 1) final_cfg.out = overridden.out / cfg.name;
            status = std::max(status, execute(final_cfg, p.suite));
        }
        return status;
    } catch (const tbl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == tbl::ErrorCode::InvalidConfig ? kUsage : 2;
    }
}
