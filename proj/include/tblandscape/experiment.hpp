#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tblandscape/random_media.hpp"
#include "tblandscape/spectral.hpp"
#include "tblandscape/verify.hpp"

namespace tbl {

/// Everything one run needs. Each field has a `key = value` spelling shared by
/// the command line (`--key value`) and config files.
struct ExperimentConfig {
    std::string name = "run";
    int dim = 1;
    int size = 300;
    Boundary bc = Boundary::Dirichlet;
    PotentialKind potential = Bernoulli{};
    std::uint64_t seed = 0;
    /// Overrides the recorded V_max of constant and file potentials.
    std::optional<double> vmax;
    double delta = 0.01;
    /// Fixed decay rate; calibrated per eigenpair when absent.
    std::optional<double> alpha;
    /// Global value for the constant C; measured per eigenpair when absent.
    std::optional<double> c_abs;
    std::string eigs = "1";
    bool dual = false;
    double tol = 1e-10;
    double eig_tol = 1e-8;
    std::filesystem::path out = "out";
};

/// Applies one setting; throws InvalidConfig for unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Keys accepted by apply_setting, in documentation order.
const std::vector<std::string>& setting_keys();

/// Reads `key = value` lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Statically checkable preconditions (geometry, tolerances, odd periodic dual, ...).
void validate(const ExperimentConfig& cfg);

/// "1,4,12", "3-8", "lowest:5", "highest:2".
Selection parse_selection(const std::string& text);

struct Preset {
    std::string name;
    std::string description;
    /// One or more runs; multi-run presets write into subdirectories named after each run.
    std::vector<ExperimentConfig> runs;
    /// The preset runs the small-instance property suite instead of a pipeline.
    bool suite = false;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

struct PairSummary {
    Eigenpair pair;
    double alpha = 0.0;
    double c_abs = 0.0;
    double c0 = 0.0;
    std::size_t well_sites = 0;
    int components = 0;
    double containment = 0.0;
    std::optional<double> slope;
    bool hypothesis_met = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<CheckResult> checks;
    std::vector<PairSummary> pairs;
    std::map<std::string, double> timings;
    std::optional<std::string> error;
    double v_max = 0.0;
    std::size_t sites = 0;

    bool hard_checks_passed() const;
    /// 0: all hard checks passed, 1: a hard check failed, 2: module error.
    int exit_status() const;
};

/// Runs the full pipeline and writes field.csv, eigenpairs.csv and report.json
/// into cfg.out. Module errors are caught and recorded in the result and report.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Small-instance checks of every identity, inequality and oracle; writes report.json.
ExperimentResult run_verify_suite(const ExperimentConfig& cfg);

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

std::string report_json(const ExperimentResult& result);

}  // namespace tbl
