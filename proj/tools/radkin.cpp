#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "radkin/errors.hpp"
#include "radkin/scenario.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

std::string yaml_list(const std::vector<double>& xs) {
    std::ostringstream s;
    s.precision(17);
    s << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    s << ']';
    return s.str();
}

int report_config_error(const radkin::ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& p : e.problems()) std::cerr << "  - " << p << '\n';
    return kConfigExit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radkin: radiation-reaction kinetics scenarios"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "run a scenario from a YAML configuration file");
    run->add_option("config", config, "scenario configuration file")->required();
    run->add_option("--out", out, "output directory (overrides output.dir)");
    run->add_option("--override", overrides, "key=value override, value parsed as YAML")->take_all();

    auto* validate = app.add_subcommand("validate", "check a configuration file and print the resolved scenario");
    validate->add_option("config", config, "scenario configuration file")->required();
    validate->add_option("--override", overrides, "key=value override")->take_all();

    std::vector<double> ks{0.0};
    std::vector<double> taus{1e-4, 1e-3, 1e-2};
    std::string background = "cold";
    double v_th = 1e-3;
    auto* scan = app.add_subcommand("scan", "dispersion sweep over k and omega_p tau");
    scan->add_option("--k", ks, "wavenumbers")->take_all();
    scan->add_option("--tau", taus, "values of omega_p tau")->take_all();
    scan->add_option("--background", background, "cold | maxwellian");
    scan->add_option("--v-th", v_th, "Maxwellian thermal velocity");
    scan->add_option("--out", out, "output directory");

    CLI11_PARSE(app, argc, argv);

    radkin::Scenario scenario;
    try {
        if (*scan) {
            std::ostringstream doc;
            doc.precision(17);
            doc << "scenario: dispersion-scan\nscan:\n  k: " << yaml_list(ks) << "\n  tau: " << yaml_list(taus)
                << "\nbackground:\n  kind: " << background << "\n  v_th: " << v_th << '\n';
            scenario = radkin::parse_config(doc.str());
        } else {
            scenario = radkin::load_config(config, overrides);
        }
    } catch (const radkin::ConfigError& e) {
        return report_config_error(e);
    }

    if (*validate) {
        std::cout << radkin::serialize(scenario);
        return 0;
    }

    try {
        const radkin::RunResult result = radkin::run_scenario(scenario, out);
        std::cout << result.summary << '\n' << "output: " << result.output_dir.string() << '\n';
    } catch (const radkin::ConfigError& e) {
        return report_config_error(e);
    } catch (const radkin::NumericalError& e) {
        std::cerr << "scenario " << radkin::to_string(scenario.kind) << " failed: " << e.what() << '\n';
        return kNumericalExit;
    } catch (const std::exception& e) {
        std::cerr << "scenario " << radkin::to_string(scenario.kind) << " could not run: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
