#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tblandscape/error.hpp"
#include "tblandscape/experiment.hpp"

using namespace tbl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tbl_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small(const std::string& name) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.size = 60;
    cfg.seed = 3;
    cfg.eigs = "1,2";
    cfg.out = scratch(name);
    return cfg;
}

}  // namespace

TEST_CASE("presets") {
    const auto& all = presets();
    CHECK(all.size() >= 6);
    std::set<std::string> names;
    for (const auto& p : all) {
        CAPTURE(p.name);
        names.insert(p.name);
        CHECK(!p.runs.empty());
        for (const auto& r : p.runs) CHECK_NOTHROW(validate(r));
        CHECK(&find_preset(p.name) == &p);
    }
    CHECK(names.size() == all.size());
    CHECK_THROWS_AS(find_preset("nope"), Error);

    const Preset& sep = find_preset("fig-separation");
    REQUIRE(sep.runs.size() == 2);
    ExperimentConfig a = sep.runs[0], b = sep.runs[1];
    CHECK(describe(a.potential) != describe(b.potential));
    a.name = b.name;
    a.potential = b.potential;
    CHECK(a.dim == b.dim);
    CHECK(a.size == b.size);
    CHECK(a.bc == b.bc);
    CHECK(a.seed == b.seed);
    CHECK(a.eigs == b.eigs);
    CHECK(a.delta == b.delta);
}

TEST_CASE("settings and config files") {
    ExperimentConfig cfg;
    apply_setting(cfg, "dim", "2");
    apply_setting(cfg, "eig_tol", "1e-9");
    apply_setting(cfg, "c-abs", "0.5");
    apply_setting(cfg, "bc", "periodic");
    apply_setting(cfg, "dual", "true");
    CHECK(cfg.dim == 2);
    CHECK(cfg.eig_tol == 1e-9);
    CHECK(cfg.c_abs == 0.5);
    CHECK(cfg.bc == Boundary::Periodic);
    CHECK(cfg.dual);
    CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "size", "ten"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "delta", "0.1x"), Error);
    for (const auto& k : setting_keys()) CHECK(!k.empty());

    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "run.cfg");
        out << "# comment\nsize = 40\n  seed=9   # trailing\n\neigs = lowest:3\n";
    }
    const auto kv = read_config_file(dir / "run.cfg");
    REQUIRE(kv.size() == 3);
    CHECK(kv[1].first == "seed");
    CHECK(kv[1].second == "9");

    // file first, then flags
    ExperimentConfig c2;
    for (const auto& [k, v] : kv) apply_setting(c2, k, v);
    apply_setting(c2, "seed", "11");
    CHECK(c2.size == 40);
    CHECK(c2.seed == 11);
    CHECK(c2.eigs == "lowest:3");

    {
        std::ofstream out(dir / "bad.cfg");
        out << "size 40\n";
    }
    CHECK_THROWS_AS(read_config_file(dir / "bad.cfg"), Error);
}

TEST_CASE("selection parsing") {
    CHECK(parse_selection("1,4,12").resolve(300) == std::vector<std::size_t>{1, 4, 12});
    CHECK(parse_selection("3-5").resolve(300) == std::vector<std::size_t>{3, 4, 5});
    CHECK(parse_selection("lowest:2").resolve(10) == std::vector<std::size_t>{1, 2});
    CHECK(parse_selection("highest:2").resolve(10) == std::vector<std::size_t>{9, 10});
    CHECK_THROWS_AS(parse_selection(""), Error);
    CHECK_THROWS_AS(parse_selection("0"), Error);
    CHECK_THROWS_AS(parse_selection("middle:3"), Error);
    CHECK_THROWS_AS(parse_selection("lowest:0"), Error);
}

TEST_CASE("validation") {
    ExperimentConfig cfg = small("validate");
    CHECK_NOTHROW(validate(cfg));
    ExperimentConfig odd = cfg;
    odd.bc = Boundary::Periodic;
    odd.size = 61;
    odd.dual = true;
    CHECK_THROWS_AS(validate(odd), Error);
    odd.bc = Boundary::Dirichlet;
    CHECK_NOTHROW(validate(odd));
    ExperimentConfig bad = cfg;
    bad.delta = 0.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = cfg;
    bad.potential = Constant{0.0};
    bad.bc = Boundary::Periodic;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = cfg;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("run writes outputs deterministically") {
    const ExperimentConfig cfg = small("run");
    const ExperimentResult r = run_experiment(cfg);
    REQUIRE(!r.error);
    CHECK(r.exit_status() == 0);
    CHECK(r.pairs.size() == 2);
    CHECK(first_line(cfg.out / "eigenpairs.csv") == "ordinal,mu,residual");
    CHECK(first_line(cfg.out / "field.csv") == "linear_index,coord_1,v,u,w_eff,w_mu,h,component_label,phi_1,phi_2");

    const auto j = nlohmann::json::parse(slurp(cfg.out / "report.json"));
    CHECK(j["status"] == "passed");
    CHECK(j["failed"] == false);
    CHECK(j["metadata"]["sites"] == 60);
    CHECK(j["eigenpairs"].size() == 2);
    CHECK(!j["checks"].empty());

    const std::string field = slurp(cfg.out / "field.csv");
    ExperimentConfig again = cfg;
    again.out = scratch("run_again");
    REQUIRE(!run_experiment(again).error);
    CHECK(slurp(again.out / "field.csv") == field);
    CHECK(slurp(again.out / "eigenpairs.csv") == slurp(cfg.out / "eigenpairs.csv"));
}

TEST_CASE("dual run") {
    ExperimentConfig cfg = small("dual");
    cfg.eigs = "highest:2";
    cfg.dual = true;
    const ExperimentResult r = run_experiment(cfg);
    REQUIRE(!r.error);
    CHECK(r.exit_status() == 0);
    bool saw_dual = false;
    for (const auto& c : r.checks) saw_dual = saw_dual || c.name.rfind("dual_", 0) == 0;
    CHECK(saw_dual);
}

TEST_CASE("errors are recorded") {
    ExperimentConfig cfg = small("error");
    cfg.eigs = "61";
    const ExperimentResult r = run_experiment(cfg);
    CHECK(r.error);
    CHECK(r.exit_status() == 2);
    const auto j = nlohmann::json::parse(slurp(cfg.out / "report.json"));
    CHECK(j["status"] == "error");
    CHECK(j["failed"] == true);
    CHECK(j["error"].is_string());
}

TEST_CASE("verify suite") {
    ExperimentConfig cfg;
    cfg.seed = 7;
    cfg.out = scratch("suite");
    const ExperimentResult r = run_verify_suite(cfg);
    CHECK(!r.error);
    CHECK(r.hard_checks_passed());
    CHECK(r.checks.size() > 50);
    CHECK(fs::exists(cfg.out / "report.json"));
}
