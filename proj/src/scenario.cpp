#include "radkin/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "radkin/dispersion.hpp"
#include "radkin/entropy.hpp"
#include "radkin/errors.hpp"
#include "radkin/field.hpp"
#include "radkin/numerics.hpp"
#include "radkin/pushers.hpp"
#include "radkin/vlasov.hpp"

namespace radkin {

namespace {

constexpr double kMaxTau = 0.1;

const std::vector<std::pair<ScenarioKind, std::string>>& kind_names() {
    static const std::vector<std::pair<ScenarioKind, std::string>> names = {
        {ScenarioKind::runaway, "runaway"},
        {ScenarioKind::pusher_compare, "pusher-compare"},
        {ScenarioKind::cold_oscillation, "cold-oscillation"},
        {ScenarioKind::dispersion_scan, "dispersion-scan"},
        {ScenarioKind::entropy_budget, "entropy-budget"},
    };
    return names;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- range checks -------------------------------------------------------

std::string tau_closed(const ConfigValue& v) {
    const double x = std::get<double>(v);
    return x >= 0.0 && x <= kMaxTau ? "" : "= " + fmt(x) + " is outside the allowed interval [0, 0.1]";
}

std::string tau_open(const ConfigValue& v) {
    const double x = std::get<double>(v);
    return x > 0.0 && x <= kMaxTau ? "" : "= " + fmt(x) + " is outside the allowed interval (0, 0.1]";
}

std::string tau_list(const ConfigValue& v) {
    const auto& xs = std::get<std::vector<double>>(v);
    if (xs.empty()) return "must not be empty";
    for (double x : xs)
        if (!(x >= 0.0 && x <= kMaxTau)) return "contains " + fmt(x) + ", outside the allowed interval [0, 0.1]";
    return "";
}

std::string k_list(const ConfigValue& v) {
    const auto& xs = std::get<std::vector<double>>(v);
    if (xs.empty()) return "must not be empty";
    for (double x : xs)
        if (!(x >= 0.0)) return "contains " + fmt(x) + ", wavenumbers must be >= 0";
    return "";
}

std::string positive(const ConfigValue& v) {
    const double x = std::get<double>(v);
    return x > 0.0 ? "" : "= " + fmt(x) + " must be positive";
}

std::string unit_fraction(const ConfigValue& v) {
    const double x = std::get<double>(v);
    return x >= 0.0 && x < 1.0 ? "" : "= " + fmt(x) + " is outside the allowed interval [0, 1)";
}

std::string horizon(const ConfigValue& v) {
    const double x = std::get<double>(v);
    return x >= 5.0 ? "" : "= " + fmt(x) + " must be >= 5 (in units of tau)";
}

std::string order(const ConfigValue& v) {
    const long long n = std::get<long long>(v);
    return n >= 0 && n <= 2 ? "" : "= " + std::to_string(n) + " must be one of {0, 1, 2}";
}

std::string grid_count(const ConfigValue& v) {
    const long long n = std::get<long long>(v);
    return n >= 8 && n <= (1 << 16) ? "" : "= " + std::to_string(n) + " must lie in [8, 65536]";
}

std::string at_least_one(const ConfigValue& v) {
    const long long n = std::get<long long>(v);
    return n >= 1 ? "" : "= " + std::to_string(n) + " must be >= 1";
}

std::string vec3(const ConfigValue& v) {
    return std::get<std::vector<double>>(v).size() == 3 ? "" : "must have exactly 3 components";
}

std::string nonzero_vec3(const ConfigValue& v) {
    const auto& x = std::get<std::vector<double>>(v);
    if (x.size() != 3) return "must have exactly 3 components";
    return x[0] != 0.0 || x[1] != 0.0 || x[2] != 0.0 ? "" : "must not be the zero vector";
}

std::string one_of(const std::string& value, std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (value == a) return "";
        list += list.empty() ? a : std::string(", ") + a;
    }
    return "= '" + value + "' must be one of {" + list + "}";
}

std::string scheme_name(const ConfigValue& v) {
    return one_of(std::get<std::string>(v), {"lax-wendroff", "van-leer"});
}

std::string field_kind(const ConfigValue& v) {
    return one_of(std::get<std::string>(v), {"none", "uniform-electric", "uniform-magnetic", "plane-wave"});
}

std::string background_kind(const ConfigValue& v) {
    return one_of(std::get<std::string>(v), {"cold", "maxwellian"});
}

std::string method_list(const ConfigValue& v) {
    const auto& xs = std::get<std::vector<std::string>>(v);
    if (xs.empty()) return "must not be empty";
    for (const auto& x : xs) {
        const std::string e = one_of(x, {"landau-lifshitz", "tau-series", "dirac-asymptotic", "lorentz-dirac"});
        if (!e.empty()) return "entry " + e;
    }
    return "";
}

using V = std::vector<double>;
using W = std::vector<std::string>;

std::vector<SchemaEntry> with_output(std::vector<SchemaEntry> entries) {
    entries.push_back({"output.dir", ValueType::text, std::string(), "output directory (default radkin-out/<scenario>)"});
    return entries;
}

const std::vector<SchemaEntry>& runaway_schema() {
    static const auto s = with_output({
        {"physics.omega_p_tau", ValueType::number, 1e-2, "radiation time tau in units of 1/omega_p", tau_open},
        {"particle.v0", ValueType::numbers, V{0.0, 0.0, 0.0}, "initial reduced velocity", vec3},
        {"particle.a0", ValueType::numbers, V{1.0, 0.0, 0.0}, "initial reduced acceleration", nonzero_vec3},
        {"run.lambda_end_tau", ValueType::number, 5.0, "proper-time span in units of tau", positive},
        {"run.step_tau", ValueType::number, 1e-3, "RK4 step in units of tau", positive},
        {"pusher.tolerance", ValueType::number, 1e-10, "constraint tolerance", positive},
    });
    return s;
}

const std::vector<SchemaEntry>& pusher_schema() {
    static const auto s = with_output({
        {"physics.omega_p_tau", ValueType::number, 1e-2, "radiation time tau", tau_open},
        {"physics.q_over_m", ValueType::number, -1.0, "charge to mass ratio"},
        {"field.kind", ValueType::text, std::string("uniform-magnetic"), "none | uniform-electric | uniform-magnetic | plane-wave", field_kind},
        {"field.vector", ValueType::numbers, V{0.0, 0.0, 1.0}, "E or B of the uniform field models", vec3},
        {"field.amplitude", ValueType::number, 0.1, "plane-wave amplitude"},
        {"field.wavevector", ValueType::numbers, V{0.0, 0.0, 1.0}, "plane-wave wavevector", nonzero_vec3},
        {"field.polarization", ValueType::numbers, V{1.0, 0.0, 0.0}, "plane-wave polarization", nonzero_vec3},
        {"particle.v0", ValueType::numbers, V{0.5, 0.0, 0.0}, "initial reduced velocity", vec3},
        {"run.lambda_end", ValueType::number, 3.0, "proper-time span", positive},
        {"run.step", ValueType::number, 1e-3, "integrator step", positive},
        {"pusher.methods", ValueType::words, W{"landau-lifshitz", "tau-series", "dirac-asymptotic"}, "pushers to run", method_list},
        {"pusher.series_order", ValueType::integer, 1LL, "tau-series truncation order", order},
        {"pusher.horizon_tau", ValueType::number, 10.0, "dirac-asymptotic horizon in units of tau", horizon},
        {"pusher.tolerance", ValueType::number, 1e-10, "tolerance", positive},
    });
    return s;
}

std::vector<SchemaEntry> plasma_entries(double tau, long long nz, long long nv, double k, double amplitude,
                                        double periods, long long every) {
    return {
        {"physics.omega_p_tau", ValueType::number, tau, "radiation time tau in units of 1/omega_p", tau_closed},
        {"physics.order", ValueType::integer, 1LL, "truncation order N of the acceleration series", order},
        {"grid.nz", ValueType::integer, nz, "cells in z", grid_count},
        {"grid.nv", ValueType::integer, nv, "cells in v_z", grid_count},
        {"grid.v_max", ValueType::number, 0.5, "velocity box half width", positive},
        {"init.k", ValueType::number, k, "wavenumber of the density perturbation; box length 2 pi/k", positive},
        {"init.amplitude", ValueType::number, amplitude, "relative density perturbation", unit_fraction},
        {"init.width_cells", ValueType::number, 3.0, "Gaussian velocity width in cells", positive},
        {"run.dt", ValueType::number, 0.025, "time step in 1/omega_p", positive},
        {"run.periods", ValueType::number, periods, "plasma periods to run", positive},
        {"run.diagnostics_every", ValueType::integer, every, "steps between diagnostics records", at_least_one},
        {"run.scheme", ValueType::text, std::string("lax-wendroff"), "lax-wendroff | van-leer", scheme_name},
    };
}

const std::vector<SchemaEntry>& cold_schema() {
    static const auto s = [] {
        auto e = plasma_entries(1e-3, 256, 256, 0.1, 1e-4, 20.0, 1);
        e.push_back({"run.snapshot", ValueType::flag, false, "write the final distribution as CSV"});
        return with_output(std::move(e));
    }();
    return s;
}

const std::vector<SchemaEntry>& entropy_schema() {
    static const auto s = [] {
        auto e = plasma_entries(1e-2, 64, 128, 0.5, 0.05, 2.0, 10);
        e.push_back({"entropy.stencil", ValueType::number, 1e-4, "transverse velocity stencil spacing", positive});
        return with_output(std::move(e));
    }();
    return s;
}

const std::vector<SchemaEntry>& scan_schema() {
    static const auto s = with_output({
        {"scan.k", ValueType::numbers, V{0.0}, "wavenumbers", k_list},
        {"scan.tau", ValueType::numbers, V{1e-4, 1e-3, 1e-2}, "values of omega_p tau", tau_list},
        {"background.kind", ValueType::text, std::string("cold"), "cold | maxwellian", background_kind},
        {"background.v_th", ValueType::number, 1e-3, "Maxwellian thermal velocity", positive},
        {"background.nodes", ValueType::integer, 64LL, "Gauss-Legendre nodes per axis", grid_count},
    });
    return s;
}

// ---- YAML helpers -------------------------------------------------------

void flatten(const YAML::Node& node, const std::string& prefix, std::vector<std::pair<std::string, YAML::Node>>& out) {
    for (const auto& kv : node) {
        const std::string key = prefix.empty() ? kv.first.as<std::string>() : prefix + "." + kv.first.as<std::string>();
        if (kv.second.IsMap())
            flatten(kv.second, key, out);
        else
            out.emplace_back(key, kv.second);
    }
}

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value) {
    if (i + 1 == parts.size()) {
        node[parts[i]] = value;
        return;
    }
    if (!node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
    set_path(node[parts[i]], parts, i + 1, value);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

const char* type_name(ValueType t) {
    switch (t) {
        case ValueType::integer: return "an integer";
        case ValueType::number: return "a number";
        case ValueType::flag: return "a boolean";
        case ValueType::text: return "a string";
        case ValueType::numbers: return "a list of numbers";
        case ValueType::words: return "a list of strings";
    }
    return "a value";
}

std::optional<ConfigValue> convert(const YAML::Node& n, ValueType t) {
    try {
        switch (t) {
            case ValueType::integer:
                if (!n.IsScalar()) return std::nullopt;
                return n.as<long long>();
            case ValueType::number:
                if (!n.IsScalar()) return std::nullopt;
                return n.as<double>();
            case ValueType::flag:
                if (!n.IsScalar()) return std::nullopt;
                return n.as<bool>();
            case ValueType::text:
                if (n.IsNull()) return std::string();
                if (!n.IsScalar()) return std::nullopt;
                return n.as<std::string>();
            case ValueType::numbers: {
                if (!n.IsSequence()) return std::nullopt;
                std::vector<double> xs;
                for (const auto& e : n) xs.push_back(e.as<double>());
                return xs;
            }
            case ValueType::words: {
                if (!n.IsSequence()) return std::nullopt;
                std::vector<std::string> xs;
                for (const auto& e : n) xs.push_back(e.as<std::string>());
                return xs;
            }
        }
    } catch (const YAML::Exception&) {
    }
    return std::nullopt;
}

// Shortest text that reads back as the same double.
std::string shortest(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

YAML::Node to_node(const ConfigValue& v) {
    YAML::Node n;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<std::string>>) {
                n = YAML::Node(YAML::NodeType::Sequence);
                for (const auto& e : x) {
                    if constexpr (std::is_same_v<T, std::vector<double>>)
                        n.push_back(shortest(e));
                    else
                        n.push_back(e);
                }
                n.SetStyle(YAML::EmitterStyle::Flow);
            } else if constexpr (std::is_same_v<T, double>) {
                n = shortest(x);
            } else {
                n = x;
            }
        },
        v);
    return n;
}

template <class T>
const T& get(const Scenario& s, const std::string& key) {
    const auto it = s.params.find(key);
    if (it == s.params.end()) throw std::out_of_range("scenario has no key '" + key + "'");
    const T* p = std::get_if<T>(&it->second);
    if (!p) throw std::invalid_argument("scenario key '" + key + "' has a different type");
    return *p;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    for (const auto& [k, n] : kind_names())
        if (k == kind) return n;
    return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from(const std::string& name) {
    for (const auto& [k, n] : kind_names())
        if (n == name) return k;
    return std::nullopt;
}

double Scenario::number(const std::string& key) const { return get<double>(*this, key); }
long long Scenario::integer(const std::string& key) const { return get<long long>(*this, key); }
bool Scenario::flag(const std::string& key) const { return get<bool>(*this, key); }
const std::string& Scenario::text(const std::string& key) const { return get<std::string>(*this, key); }
const std::vector<double>& Scenario::numbers(const std::string& key) const {
    return get<std::vector<double>>(*this, key);
}
const std::vector<std::string>& Scenario::words(const std::string& key) const {
    return get<std::vector<std::string>>(*this, key);
}

const std::vector<SchemaEntry>& schema(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::runaway: return runaway_schema();
        case ScenarioKind::pusher_compare: return pusher_schema();
        case ScenarioKind::cold_oscillation: return cold_schema();
        case ScenarioKind::dispersion_scan: return scan_schema();
        case ScenarioKind::entropy_budget: return entropy_schema();
    }
    return runaway_schema();
}

Scenario parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError({std::string("malformed document: ") + e.what()});
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) throw ConfigError({"the document must be a mapping with a 'scenario' key"});

    std::vector<std::string> problems;
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0) {
            problems.push_back("override '" + ov + "' is not of the form key=value");
            continue;
        }
        const auto parts = split(ov.substr(0, eq), '.');
        if (std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); })) {
            problems.push_back("override '" + ov + "' has an empty key segment");
            continue;
        }
        try {
            set_path(root, parts, 0, YAML::Load(ov.substr(eq + 1)));
        } catch (const YAML::Exception& e) {
            problems.push_back("override '" + ov + "': " + e.what());
        }
    }

    const YAML::Node name = root["scenario"];
    if (!name || !name.IsScalar()) {
        problems.push_back("missing required key 'scenario'");
        throw ConfigError(problems);
    }
    const auto kind = scenario_kind_from(name.as<std::string>());
    if (!kind) {
        std::string list;
        for (const auto& [k, n] : kind_names()) list += (list.empty() ? "" : ", ") + n;
        problems.push_back("unknown scenario '" + name.as<std::string>() + "' (expected one of " + list + ")");
        throw ConfigError(problems);
    }

    Scenario s;
    s.kind = *kind;
    const auto& entries = schema(*kind);
    for (const auto& e : entries) s.params[e.key] = e.fallback;

    std::vector<std::pair<std::string, YAML::Node>> leaves;
    flatten(root, "", leaves);
    for (const auto& [key, node] : leaves) {
        if (key == "scenario") continue;
        const auto it = std::find_if(entries.begin(), entries.end(), [&](const SchemaEntry& e) { return e.key == key; });
        if (it == entries.end()) {
            problems.push_back("unknown key '" + key + "' for scenario " + to_string(*kind));
            continue;
        }
        auto value = convert(node, it->type);
        if (!value && it->type == ValueType::number) {
            // integers are acceptable where a number is expected
            if (auto i = convert(node, ValueType::integer)) value = static_cast<double>(std::get<long long>(*i));
        }
        if (!value) {
            problems.push_back("key '" + key + "' must be " + type_name(it->type));
            continue;
        }
        if (it->check) {
            const std::string err = it->check(*value);
            if (!err.empty()) {
                problems.push_back("key '" + key + "' " + err);
                continue;
            }
        }
        s.params[key] = *value;
    }
    if (!problems.empty()) throw ConfigError(problems);
    return s;
}

Scenario load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string serialize(const Scenario& s) {
    YAML::Node root(YAML::NodeType::Map);
    root["scenario"] = to_string(s.kind);
    for (const auto& e : schema(s.kind)) set_path(root, split(e.key, '.'), 0, to_node(s.params.at(e.key)));
    YAML::Emitter out;
    out << root;
    return std::string(out.c_str()) + "\n";
}

// ---- runners --------------------------------------------------------------

namespace {

struct Output {
    std::filesystem::path dir;
    std::ofstream diagnostics;

    Output(const Scenario& s, const std::filesystem::path& requested) {
        dir = !requested.empty() ? requested
              : !s.text("output.dir").empty() ? std::filesystem::path(s.text("output.dir"))
                                               : std::filesystem::path("radkin-out") / to_string(s.kind);
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "config.yaml") << serialize(s);
        diagnostics.open(dir / "diagnostics.jsonl");
    }

    void record(const nlohmann::json& j) { diagnostics << j.dump() << '\n'; }

    std::ofstream file(const std::string& name) const { return std::ofstream(dir / name); }

    RunResult finish(nlohmann::json summary, const std::string& line) {
        summary["summary"] = line;
        file("summary.json") << summary.dump(2) << '\n';
        return {dir, line};
    }
};

Vec3 vec(const std::vector<double>& x) { return {{x[0], x[1], x[2]}}; }

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RunResult run_runaway(const Scenario& s, Output& out) {
    const double tau = s.number("physics.omega_p_tau");
    ReducedState init;
    init.v = vec(s.numbers("particle.v0"));
    init.a = vec(s.numbers("particle.a0"));
    PusherConfig cfg;
    cfg.step = s.number("run.step_tau") * tau;
    cfg.tolerance = s.number("pusher.tolerance");
    const double lambda_end = s.number("run.lambda_end_tau") * tau;
    const Trajectory traj = push_lorentz_dirac(init, UniformElectric{}, tau, -1.0, cfg, lambda_end);
    {
        auto f = out.file("trajectory.csv");
        write_trajectory_csv(f, traj);
    }
    for (const auto& smp : traj.samples) {
        const FourVector acc = smp.state.acceleration();
        out.record({{"lambda", smp.lambda}, {"proper_acceleration", std::sqrt(minkowski_dot(acc, acc))}});
    }
    const double rate = fitted_acceleration_rate(traj, 0.0, lambda_end);
    const double rel = std::abs(rate * tau - 1.0);
    const std::string line = "runaway: fitted growth rate " + fmt(rate) + " vs 1/tau " + fmt(1.0 / tau) +
                             " (relative error " + fmt(rel) + ")";
    return out.finish({{"scenario", "runaway"}, {"tau", tau}, {"fitted_rate", rate}, {"expected_rate", 1.0 / tau},
                       {"relative_error", rel}},
                      line);
}

FieldModel field_model(const Scenario& s) {
    const std::string& kind = s.text("field.kind");
    if (kind == "uniform-electric") return UniformElectric{vec(s.numbers("field.vector"))};
    if (kind == "uniform-magnetic") return UniformMagnetic{vec(s.numbers("field.vector"))};
    if (kind == "plane-wave") {
        PlaneWave w;
        w.amplitude = s.number("field.amplitude");
        w.wavevector = vec(s.numbers("field.wavevector"));
        w.polarization = vec(s.numbers("field.polarization"));
        return w;
    }
    return UniformElectric{};
}

RunResult run_pusher_compare(const Scenario& s, Output& out) {
    const double tau = s.number("physics.omega_p_tau");
    const double qm = s.number("physics.q_over_m");
    const FieldModel model = field_model(s);
    PusherConfig cfg;
    cfg.step = s.number("run.step");
    cfg.tolerance = s.number("pusher.tolerance");
    cfg.series_order = static_cast<int>(s.integer("pusher.series_order"));
    cfg.horizon = s.number("pusher.horizon_tau") * tau;
    const double lambda_end = s.number("run.lambda_end");
    const FourVector x0{};
    const Vec3 v0 = vec(s.numbers("particle.v0"));

    std::vector<std::pair<std::string, Trajectory>> runs;
    for (const auto& m : s.words("pusher.methods")) {
        Trajectory t;
        if (m == "landau-lifshitz") {
            t = push_landau_lifshitz(x0, v0, model, tau, qm, cfg, lambda_end);
        } else if (m == "tau-series") {
            t = push_tau_series(x0, v0, model, tau, qm, cfg, lambda_end);
        } else if (m == "dirac-asymptotic") {
            t = push_dirac_asymptotic(x0, v0, model, tau, qm, cfg, lambda_end);
        } else {
            ReducedState init;
            init.x = x0;
            init.v = v0;
            init.a = landau_lifshitz_acceleration(v0, field_at(model, x0), tau, qm);
            t = push_lorentz_dirac(init, model, tau, qm, cfg, lambda_end);
        }
        auto f = out.file("trajectory_" + m + ".csv");
        write_trajectory_csv(f, t);
        runs.emplace_back(m, std::move(t));
    }
    const auto ref = std::find_if(runs.begin(), runs.end(), [](const auto& r) { return r.first == "landau-lifshitz"; });
    const Trajectory& base = ref != runs.end() ? ref->second : runs.front().second;
    const std::string base_name = ref != runs.end() ? ref->first : runs.front().first;

    nlohmann::json summary = {{"scenario", "pusher-compare"}, {"tau", tau}, {"reference", base_name}};
    std::string line = "pusher-compare: sup |v - v_" + base_name + "|:";
    for (const auto& [name, t] : runs) {
        double sup = 0.0;
        const std::size_t n = std::min(t.samples.size(), base.samples.size());
        for (std::size_t i = 0; i < n; ++i)
            sup = std::max(sup, norm(t.samples[i].state.v - base.samples[i].state.v));
        const Vec3 vf = t.samples.back().state.v;
        out.record({{"method", name},
                    {"samples", t.samples.size()},
                    {"final_v", {vf[0], vf[1], vf[2]}},
                    {"sup_velocity_difference", sup}});
        summary["sup_velocity_difference"][name] = sup;
        line += " " + name + " " + fmt(sup);
    }
    return out.finish(summary, line);
}

struct PlasmaSetup {
    PlasmaState state;
    double dt;
    long long steps;
    long long every;
};

PlasmaSetup plasma_setup(const Scenario& s) {
    PlasmaParams p;
    p.tau = s.number("physics.omega_p_tau");
    p.order = static_cast<int>(s.integer("physics.order"));
    p.scheme = s.text("run.scheme") == "van-leer" ? AdvectionScheme::VanLeer : AdvectionScheme::LaxWendroffPositive;
    QuietStart q;
    q.nz = static_cast<int>(s.integer("grid.nz"));
    q.nv = static_cast<int>(s.integer("grid.nv"));
    q.v_max = s.number("grid.v_max");
    q.length = 2.0 * std::numbers::pi / s.number("init.k");
    q.v_width = s.number("init.width_cells") * 2.0 * q.v_max / q.nv;
    q.amplitude = s.number("init.amplitude");
    PlasmaSetup setup{quiet_start(q, p), s.number("run.dt"), 0, s.integer("run.diagnostics_every")};
    const double period = 2.0 * std::numbers::pi / p.omega_p();
    setup.steps = std::llround(s.number("run.periods") * period / setup.dt);
    return setup;
}

nlohmann::json diagnostics_json(const Diagnostics& d) {
    return {{"t", d.t},
            {"field_energy", d.field_energy},
            {"kinetic_energy", d.kinetic_energy},
            {"N_tot", d.n_tot},
            {"J1_mode_amplitude", d.j1_mode_amplitude},
            {"entropy", d.entropy}};
}

// Fitted exponential rate of the local maxima of y(t), each refined by a
// parabola through the three samples around it in ln y.
double envelope_rate(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> px;
    std::vector<double> py;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i - 1] <= 0.0 || y[i + 1] <= 0.0) continue;
        const double a = std::log(y[i - 1]);
        const double b = std::log(y[i]);
        const double c = std::log(y[i + 1]);
        const double curv = a - 2.0 * b + c;
        const double shift = curv != 0.0 ? 0.5 * (a - c) / curv : 0.0;
        const double h = t[i + 1] - t[i];
        px.push_back(t[i] + shift * h);
        py.push_back(b - 0.25 * (a - c) * shift);
    }
    if (px.size() < 2) throw NumericalError("fewer than two field-energy maxima; run longer");
    return -fit_line(px, py).slope;
}

RunResult run_cold_oscillation(const Scenario& s, Output& out) {
    PlasmaSetup setup = plasma_setup(s);
    PlasmaState& st = setup.state;
    const double tau = st.params.tau;
    const Diagnostics d0 = diagnostics(st);
    const double e0 = d0.field_energy + d0.kinetic_energy;
    std::vector<double> ts{d0.t};
    std::vector<double> fe{d0.field_energy};
    double max_dev = 0.0;
    auto series = out.file("field_energy.csv");
    series << "t,field_energy,kinetic_energy,total_energy\n";
    auto row = [&](const Diagnostics& d) {
        series << csv_number(d.t) << ',' << csv_number(d.field_energy) << ',' << csv_number(d.kinetic_energy) << ','
               << csv_number(d.field_energy + d.kinetic_energy) << '\n';
    };
    row(d0);
    out.record(diagnostics_json(d0));
    for (long long n = 1; n <= setup.steps; ++n) {
        advance(st, setup.dt);
        const Diagnostics d = diagnostics(st);
        if (n % setup.every == 0 || n == setup.steps) out.record(diagnostics_json(d));
        ts.push_back(d.t);
        fe.push_back(d.field_energy);
        max_dev = std::max(max_dev, std::abs(d.field_energy + d.kinetic_energy - e0) / e0);
        row(d);
    }
    if (s.flag("run.snapshot")) {
        auto f = out.file("distribution.csv");
        f << "z,v,g\n";
        const auto lay = st.g.layout();
        for (int i = 0; i < lay.nz; ++i)
            for (int j = 0; j < lay.nv; ++j)
                f << csv_number(st.g.grid.z.node(i)) << ',' << csv_number(st.g.grid.v[2].node(j)) << ','
                  << csv_number(st.g.values[static_cast<std::size_t>(i) * lay.nv + j]) << '\n';
    }
    const double rate = envelope_rate(ts, fe);
    const double expected = st.params.omega_p() * st.params.omega_p() * tau;
    std::string line = "cold-oscillation: fitted field-energy decay rate " + fmt(rate) + " vs omega_p^2 tau " +
                       fmt(expected);
    if (expected > 0.0) line += " (relative error " + fmt(std::abs(rate / expected - 1.0)) + ")";
    line += "; max relative energy deviation " + fmt(max_dev);
    return out.finish({{"scenario", "cold-oscillation"},
                       {"tau", tau},
                       {"fitted_rate", rate},
                       {"expected_rate", expected},
                       {"max_relative_energy_deviation", max_dev},
                       {"boundary_loss", st.boundary_loss}},
                      line);
}

RunResult run_dispersion_scan(const Scenario& s, Output& out) {
    const Background bg = s.text("background.kind") == "maxwellian"
                              ? Background::maxwellian(1.0, s.number("background.v_th"),
                                                       static_cast<int>(s.integer("background.nodes")))
                              : Background::cold(1.0);
    const auto roots = dispersion_scan(s.numbers("scan.k"), s.numbers("scan.tau"), bg);
    {
        auto f = out.file("roots.csv");
        write_scan_csv(f, roots);
    }
    int counts[3] = {0, 0, 0};
    for (const auto& r : roots) {
        ++counts[static_cast<int>(r.classification)];
        out.record({{"k", r.k},
                    {"tau", r.tau},
                    {"re_omega", r.omega.real()},
                    {"im_omega", r.omega.imag()},
                    {"classification", to_string(r.classification)},
                    {"residual", r.residual},
                    {"near_singular", r.near_singular},
                    {"continuation_slope", continuation_slope(r)}});
    }
    const std::string line = "dispersion-scan: " + std::to_string(roots.size()) + " roots (" +
                             std::to_string(counts[0]) + " physical, " + std::to_string(counts[1]) + " runaway, " +
                             std::to_string(counts[2]) + " ambiguous)";
    return out.finish({{"scenario", "dispersion-scan"},
                       {"roots", roots.size()},
                       {"physical", counts[0]},
                       {"runaway", counts[1]},
                       {"ambiguous", counts[2]}},
                      line);
}

RunResult run_entropy_budget(const Scenario& s, Output& out) {
    PlasmaSetup setup = plasma_setup(s);
    PlasmaState& st = setup.state;
    const double tau = st.params.tau;
    const double h = s.number("entropy.stencil");
    const PlasmaParams& p = st.params;
    const FourVector j_ext{{-p.charge * p.n0, 0.0, 0.0, 0.0}};
    // The first-order form is evaluated on a τ = 0 companion run from the
    // same initial state.
    PlasmaState st0 = st;
    st0.params.tau = 0.0;
    st0.params.order = 0;
    reconstruct_accel(st0);
    auto csv = out.file("entropy_budget.csv");
    csv << "t,S_total,dS_dt_exact,tau_dS_dt_first_order,self_term,ext_term,field_term\n";
    double sum_exact = 0.0;
    double sum_first = 0.0;
    int records = 0;
    auto report = [&] {
        const FieldGrid fg = field_grid(st0);
        std::vector<Tensor4> F;
        for (const auto& f : fg.at_z) F.push_back(f.F);
        EntropyReport r = entropy_rate_first_order(st0.g, F, j_ext, p.charge, p.mass);
        r.S_total = entropy_total(st.g);
        r.dS_dt_exact = entropy_rate_exact(st.g, transverse_accel(st, 1, h));
        const double first = tau * r.dS_dt_first_order;
        nlohmann::json j = diagnostics_json(diagnostics(st));
        j["S_total"] = r.S_total;
        j["dS_dt_exact"] = r.dS_dt_exact;
        j["dS_dt_first_order"] = r.dS_dt_first_order;
        j["self_term"] = r.self_term;
        j["ext_term"] = r.ext_term;
        j["field_term"] = r.field_term;
        out.record(j);
        csv << csv_number(st.t) << ',' << csv_number(r.S_total) << ',' << csv_number(r.dS_dt_exact) << ','
            << csv_number(first) << ',' << csv_number(r.self_term) << ',' << csv_number(r.ext_term) << ','
            << csv_number(r.field_term) << '\n';
        sum_exact += r.dS_dt_exact;
        sum_first += first;
        ++records;
    };
    report();
    for (long long n = 1; n <= setup.steps; ++n) {
        advance(st, setup.dt);
        advance(st0, setup.dt);
        if (n % setup.every == 0 || n == setup.steps) report();
    }
    const double mean_exact = sum_exact / records;
    const double mean_first = sum_first / records;
    const std::string line = "entropy-budget: mean dS/dt exact " + fmt(mean_exact) + " vs tau * first-order " +
                             fmt(mean_first) + " over " + std::to_string(records) + " records";
    return out.finish({{"scenario", "entropy-budget"},
                       {"tau", tau},
                       {"mean_dS_dt_exact", mean_exact},
                       {"mean_tau_dS_dt_first_order", mean_first},
                       {"records", records}},
                      line);
}

}  // namespace

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
    Output out(s, out_dir);
    switch (s.kind) {
        case ScenarioKind::runaway: return run_runaway(s, out);
        case ScenarioKind::pusher_compare: return run_pusher_compare(s, out);
        case ScenarioKind::cold_oscillation: return run_cold_oscillation(s, out);
        case ScenarioKind::dispersion_scan: return run_dispersion_scan(s, out);
        case ScenarioKind::entropy_budget: return run_entropy_budget(s, out);
    }
    throw std::logic_error("unhandled scenario kind");
}

}  // namespace radkin
