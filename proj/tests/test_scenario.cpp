#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "radkin/errors.hpp"
#include "radkin/scenario.hpp"

using namespace radkin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("radkin-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> problems_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(RADKIN_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal cold-oscillation config takes the documented defaults") {
    const Scenario s = parse_config("scenario: cold-oscillation\n");
    CHECK(s.kind == ScenarioKind::cold_oscillation);
    CHECK(s.integer("grid.nz") == 256);
    CHECK(s.integer("grid.nv") == 256);
    CHECK(s.number("physics.omega_p_tau") == 1e-3);
    CHECK(s.integer("physics.order") == 1);
}

TEST_CASE("out-of-range tau names the key and the interval") {
    const auto p = problems_of("scenario: runaway\nphysics:\n  omega_p_tau: 0.5\n");
    REQUIRE(p.size() == 1);
    CHECK(mentions(p, "physics.omega_p_tau"));
    CHECK(mentions(p, "(0, 0.1]"));
}

TEST_CASE("dispersion-scan tau list") {
    const Scenario s = parse_config("scenario: dispersion-scan\nscan:\n  tau: [1e-4, 1e-3, 1e-2]\n");
    CHECK(s.numbers("scan.tau") == std::vector<double>{1e-4, 1e-3, 1e-2});
}

TEST_CASE("every problem is reported, not just the first") {
    const auto p = problems_of(
        "scenario: cold-oscillation\n"
        "grid:\n  nz: 4\n  nv: many\n"
        "physics:\n  order: 3\n  omega_tau: 0.01\n");
    CHECK(p.size() == 4);
    CHECK(mentions(p, "grid.nz"));
    CHECK(mentions(p, "grid.nv"));
    CHECK(mentions(p, "physics.order"));
    CHECK(mentions(p, "unknown key 'physics.omega_tau'"));
}

TEST_CASE("scenario name errors") {
    CHECK(mentions(problems_of("grid:\n  nz: 8\n"), "missing required key 'scenario'"));
    CHECK(mentions(problems_of("scenario: two-stream\n"), "unknown scenario 'two-stream'"));
    CHECK(mentions(problems_of("scenario: [runaway\n"), "malformed"));
}

TEST_CASE("overrides are applied before validation") {
    const Scenario s = parse_config("scenario: cold-oscillation\n", {"grid.nz=64", "run.scheme=van-leer", "init.amplitude=2e-4"});
    CHECK(s.integer("grid.nz") == 64);
    CHECK(s.text("run.scheme") == "van-leer");
    CHECK(s.number("init.amplitude") == 2e-4);
    CHECK(mentions(problems_of("scenario: cold-oscillation\n", {"grid.nz=2"}), "grid.nz"));
    CHECK(mentions(problems_of("scenario: cold-oscillation\n", {"nonsense"}), "key=value"));
    const Scenario switched = parse_config("scenario: runaway\n", {"scenario=dispersion-scan"});
    CHECK(switched.kind == ScenarioKind::dispersion_scan);
}

TEST_CASE("serialize round-trips every scenario kind") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"scenario: runaway\n", {"physics.omega_p_tau=0.0123456789012345", "particle.a0=[0.1, 0.2, 0.3]"}},
        {"scenario: pusher-compare\n", {"pusher.methods=[tau-series]", "field.kind=plane-wave"}},
        {"scenario: cold-oscillation\n", {"run.periods=2.5", "run.snapshot=true", "output.dir=out dir"}},
        {"scenario: dispersion-scan\n", {"scan.k=[0, 0.1]", "background.kind=maxwellian"}},
        {"scenario: entropy-budget\n", {"entropy.stencil=3.3e-5"}},
    };
    for (const auto& [text, overrides] : cases) {
        const Scenario s = parse_config(text, overrides);
        CHECK(parse_config(serialize(s)) == s);
    }
}

TEST_CASE("runaway scenario writes its artifacts and reports 1/tau") {
    const fs::path out = scratch("runaway");
    const RunResult r = run_scenario(parse_config("scenario: runaway\n"), out);
    CHECK(fs::exists(out / "config.yaml"));
    CHECK(fs::exists(out / "trajectory.csv"));
    CHECK(fs::exists(out / "diagnostics.jsonl"));
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["relative_error"].get<double>() < 0.01);
    CHECK(r.summary.find("runaway") == 0);
    CHECK(parse_config(slurp(out / "config.yaml")) == parse_config("scenario: runaway\n"));
}

TEST_CASE("dispersion-scan scenario reproduces the three-root structure") {
    const fs::path out = scratch("scan");
    run_scenario(parse_config("scenario: dispersion-scan\n"), out);
    std::istringstream csv(slurp(out / "roots.csv"));
    std::string line;
    std::getline(csv, line);
    int physical = 0;
    int runaway = 0;
    while (std::getline(csv, line)) {
        physical += line.find(",physical,") != std::string::npos;
        runaway += line.find(",runaway,") != std::string::npos;
    }
    CHECK(physical == 6);
    CHECK(runaway == 3);
}

TEST_CASE("cold-oscillation runs are deterministic") {
    const std::vector<std::string> small = {"grid.nz=32", "grid.nv=64", "init.k=0.5", "run.periods=2",
                                            "run.dt=0.05", "physics.omega_p_tau=0.01", "run.diagnostics_every=5"};
    const Scenario s = parse_config("scenario: cold-oscillation\n", small);
    const fs::path a = scratch("cold-a");
    const fs::path b = scratch("cold-b");
    run_scenario(s, a);
    run_scenario(s, b);
    const std::string da = slurp(a / "diagnostics.jsonl");
    CHECK(!da.empty());
    CHECK(da == slurp(b / "diagnostics.jsonl"));
    CHECK(slurp(a / "field_energy.csv") == slurp(b / "field_energy.csv"));
    std::istringstream lines(da);
    std::string first;
    std::getline(lines, first);
    const auto j = nlohmann::json::parse(first);
    for (const char* key : {"t", "field_energy", "kinetic_energy", "N_tot", "J1_mode_amplitude", "entropy"})
        CHECK(j.contains(key));
}

TEST_CASE("pusher-compare and entropy-budget scenarios run") {
    const fs::path p = scratch("pusher");
    run_scenario(parse_config("scenario: pusher-compare\n", {"run.lambda_end=0.5"}), p);
    CHECK(fs::exists(p / "trajectory_landau-lifshitz.csv"));
    CHECK(fs::exists(p / "trajectory_dirac-asymptotic.csv"));
    const auto summary = nlohmann::json::parse(slurp(p / "summary.json"));
    CHECK(summary["sup_velocity_difference"]["tau-series"].get<double>() < 1e-12);

    const fs::path e = scratch("entropy");
    run_scenario(parse_config("scenario: entropy-budget\n", {"run.periods=0.5"}), e);
    CHECK(fs::exists(e / "entropy_budget.csv"));
}

TEST_CASE("CLI exit codes") {
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    std::ofstream(dir / "good.yaml") << "scenario: dispersion-scan\nscan:\n  tau: [1e-3]\n";
    std::ofstream(dir / "bad.yaml") << "scenario: runaway\nphysics:\n  omega_p_tau: 0.5\n";
    std::ofstream(dir / "unstable.yaml") << "scenario: cold-oscillation\ngrid:\n  nz: 16\n  nv: 64\nrun:\n  dt: 100\n";
    CHECK(run_cli("validate " + (dir / "good.yaml").string()) == 0);
    CHECK(run_cli("validate " + (dir / "bad.yaml").string()) == 2);
    CHECK(run_cli("run " + (dir / "good.yaml").string() + " --out " + (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "roots.csv"));
    CHECK(run_cli("run " + (dir / "unstable.yaml").string() + " --out " + (dir / "unstable").string()) == 3);
    CHECK(run_cli("run " + (dir / "good.yaml").string() + " --override scan.tau=[2.0]") == 2);
    CHECK(run_cli("scan --tau 1e-3 --out " + (dir / "scan").string()) == 0);
    CHECK(fs::exists(dir / "scan" / "roots.csv"));
}
