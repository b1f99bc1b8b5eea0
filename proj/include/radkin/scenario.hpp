#pragma once

// Scenario configuration and the runner behind the radkin CLI. A scenario is
// a YAML document with a `scenario:` name and nested sections; every key has
// a type, a default and a range, and unknown keys are rejected. The schema
// tables in scenario.cpp are the single source of truth (README lists them).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace radkin {

enum class ScenarioKind { runaway, pusher_compare, cold_oscillation, dispersion_scan, entropy_budget };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from(const std::string& name);

using ConfigValue = std::variant<long long, double, bool, std::string, std::vector<double>, std::vector<std::string>>;

struct Scenario {
    ScenarioKind kind = ScenarioKind::runaway;
    std::map<std::string, ConfigValue> params;  // dotted keys, all schema keys present

    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::vector<double>& numbers(const std::string& key) const;
    const std::vector<std::string>& words(const std::string& key) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class ValueType { integer, number, flag, text, numbers, words };

struct SchemaEntry {
    std::string key;
    ValueType type;
    ConfigValue fallback;
    std::string description;
    // Returns an error message for an out-of-range value, empty if valid.
    std::string (*check)(const ConfigValue&) = nullptr;
};

const std::vector<SchemaEntry>& schema(ScenarioKind kind);

/// Parses and validates a document, applying `key=value` overrides first.
/// Throws ConfigError listing every problem found.
Scenario parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

Scenario load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// YAML text that parses back to the same Scenario.
std::string serialize(const Scenario& s);

struct RunResult {
    std::filesystem::path output_dir;
    std::string summary;  // headline line
};

/// Runs the scenario and writes config.yaml, diagnostics.jsonl, CSV files
/// and summary.json into the output directory (`out` when non-empty,
/// otherwise output.dir). Numerical failures propagate as NumericalError.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out = {});

}  // namespace radkin
