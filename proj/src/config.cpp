#include "curveflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "curveflow/io.hpp"
#include "curveflow/presets.hpp"

namespace curveflow {

namespace {

using nlohmann::json;

void fail(const std::string& message) { throw std::invalid_argument("config: " + message); }

void check_keys(const json& object, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : object.items()) {
        (void)value;
        if (!allowed.contains(key)) fail("unknown key \"" + key + "\" in " + where);
    }
}

double get_number(const json& object, const char* key, double fallback) {
    if (!object.contains(key) || object[key].is_null()) return fallback;
    if (!object[key].is_number()) fail(std::string("\"") + key + "\" must be a number");
    return object[key].get<double>();
}

std::size_t get_size(const json& object, const char* key, std::size_t fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number_unsigned())
        fail(std::string("\"") + key + "\" must be a non-negative integer");
    return object[key].get<std::size_t>();
}

bool get_bool(const json& object, const char* key, bool fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_boolean()) fail(std::string("\"") + key + "\" must be a boolean");
    return object[key].get<bool>();
}

std::string get_string(const json& object, const char* key, const std::string& fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_string()) fail(std::string("\"") + key + "\" must be a string");
    return object[key].get<std::string>();
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& error) {
        fail(std::string("not valid JSON: ") + error.what());
    }
    if (!root.is_object()) fail("top level must be a JSON object");
    check_keys(root, "top level",
               {"initial", "solver", "flow", "fixed_dt", "analysis", "output", "tolerances",
                "seed"});

    ScenarioConfig config;

    if (root.contains("initial")) {
        const json& initial = root["initial"];
        if (!initial.is_object()) fail("\"initial\" must be an object");
        check_keys(initial, "initial",
                   {"preset", "file", "radius", "a", "b", "amplitude", "modes", "h0",
                    "cos_coeffs", "n", "m"});
        config.initial.preset = get_string(initial, "preset", "");
        config.initial.file = get_string(initial, "file", "");
        if (config.initial.preset.empty() && config.initial.file.empty())
            fail("\"initial\" needs a \"preset\" name or a \"file\" path");
        if (!config.initial.preset.empty() && !config.initial.file.empty())
            fail("\"initial\" takes either \"preset\" or \"file\", not both");
        config.initial.radius = get_number(initial, "radius", config.initial.radius);
        config.initial.a = get_number(initial, "a", config.initial.a);
        config.initial.b = get_number(initial, "b", config.initial.b);
        config.initial.amplitude = get_number(initial, "amplitude", config.initial.amplitude);
        if (initial.contains("modes")) {
            if (!initial["modes"].is_number_integer()) fail("\"modes\" must be an integer");
            config.initial.modes = initial["modes"].get<int>();
        }
        config.initial.h0 = get_number(initial, "h0", config.initial.h0);
        if (initial.contains("cos_coeffs")) {
            if (!initial["cos_coeffs"].is_array()) fail("\"cos_coeffs\" must be an array");
            for (const json& c : initial["cos_coeffs"]) {
                if (!c.is_number()) fail("\"cos_coeffs\" entries must be numbers");
                config.initial.cos_coeffs.push_back(c.get<double>());
            }
        }
        config.initial.n = get_size(initial, "n", config.initial.n);
        config.initial.m = get_size(initial, "m", config.initial.m);
    }

    config.solver = get_string(root, "solver", config.solver);
    if (config.solver != "auto" && config.solver != "polygon" && config.solver != "theta" &&
        config.solver != "hybrid")
        fail("\"solver\" must be one of auto, polygon, theta, hybrid");

    if (root.contains("flow")) {
        const json& flow = root["flow"];
        if (!flow.is_object()) fail("\"flow\" must be an object");
        check_keys(flow, "flow",
                   {"sigma1", "sigma2", "cfl", "resample_interval", "area_floor", "k_cap",
                    "t_cap"});
        config.flow.sigma1 = get_number(flow, "sigma1", config.flow.sigma1);
        config.flow.sigma2 = get_number(flow, "sigma2", config.flow.sigma2);
        config.flow.cfl_factor = get_number(flow, "cfl", config.flow.cfl_factor);
        config.flow.resample_interval =
            get_size(flow, "resample_interval", config.flow.resample_interval);
        config.flow.area_floor = get_number(flow, "area_floor", config.flow.area_floor);
        config.flow.k_cap = get_number(flow, "k_cap", config.flow.k_cap);
        config.flow.t_cap = get_number(flow, "t_cap", config.flow.t_cap);
    }
    validate(config.flow);
    config.fixed_dt = get_number(root, "fixed_dt", config.fixed_dt);
    if (config.fixed_dt < 0.0 || !std::isfinite(config.fixed_dt))
        fail("\"fixed_dt\" must be finite and non-negative");

    if (root.contains("analysis")) {
        const json& analysis = root["analysis"];
        if (!analysis.is_object()) fail("\"analysis\" must be an object");
        check_keys(analysis, "analysis",
                   {"identities", "rescaling", "entropy", "concentration", "rho", "eps1",
                    "concentration_stride"});
        config.analysis.identities = get_bool(analysis, "identities", config.analysis.identities);
        config.analysis.rescaling = get_bool(analysis, "rescaling", config.analysis.rescaling);
        config.analysis.entropy = get_bool(analysis, "entropy", config.analysis.entropy);
        config.analysis.concentration =
            get_bool(analysis, "concentration", config.analysis.concentration);
        config.analysis.rho = get_number(analysis, "rho", config.analysis.rho);
        config.analysis.eps1 = get_number(analysis, "eps1", config.analysis.eps1);
        config.analysis.concentration_stride =
            get_size(analysis, "concentration_stride", config.analysis.concentration_stride);
        if (config.analysis.rho <= 0.0) fail("\"rho\" must be positive");
        if (config.analysis.eps1 <= 0.0) fail("\"eps1\" must be positive");
        if (config.analysis.concentration_stride == 0)
            fail("\"concentration_stride\" must be positive");
    }

    if (root.contains("output")) {
        const json& output = root["output"];
        if (!output.is_object()) fail("\"output\" must be an object");
        check_keys(output, "output", {"dir", "snapshot_interval", "record_interval", "svg"});
        config.output.dir = get_string(output, "dir", config.output.dir);
        config.output.snapshot_interval =
            get_size(output, "snapshot_interval", config.output.snapshot_interval);
        config.output.record_interval =
            get_size(output, "record_interval", config.output.record_interval);
        config.output.svg = get_bool(output, "svg", config.output.svg);
        if (config.output.snapshot_interval == 0) fail("\"snapshot_interval\" must be positive");
        if (config.output.record_interval == 0) fail("\"record_interval\" must be positive");
    }

    if (root.contains("tolerances")) {
        const json& tol = root["tolerances"];
        if (!tol.is_object()) fail("\"tolerances\" must be an object");
        check_keys(tol, "tolerances", {"identity", "area_pct", "roundness", "limit_shape"});
        config.tolerances.identity = get_number(tol, "identity", config.tolerances.identity);
        config.tolerances.area_pct = get_number(tol, "area_pct", config.tolerances.area_pct);
        config.tolerances.roundness = get_number(tol, "roundness", config.tolerances.roundness);
        config.tolerances.limit_shape =
            get_number(tol, "limit_shape", config.tolerances.limit_shape);
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) fail("\"seed\" must be a non-negative integer");
        config.seed = root["seed"].get<std::uint64_t>();
    }
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.good()) fail("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string dump_config(const ScenarioConfig& config) {
    std::ostringstream out;
    out << "{\n  \"initial\": {";
    if (!config.initial.preset.empty())
        out << "\"preset\": \"" << config.initial.preset << "\"";
    else
        out << "\"file\": \"" << config.initial.file << "\"";
    out << ", \"radius\": " << json_number(config.initial.radius)
        << ", \"a\": " << json_number(config.initial.a)
        << ", \"b\": " << json_number(config.initial.b)
        << ", \"amplitude\": " << json_number(config.initial.amplitude)
        << ", \"modes\": " << config.initial.modes
        << ", \"h0\": " << json_number(config.initial.h0) << ", \"cos_coeffs\": [";
    for (std::size_t i = 0; i < config.initial.cos_coeffs.size(); ++i)
        out << (i ? ", " : "") << json_number(config.initial.cos_coeffs[i]);
    out << "], \"n\": " << config.initial.n << ", \"m\": " << config.initial.m << "},\n"
        << "  \"solver\": \"" << config.solver << "\",\n"
        << "  \"flow\": {\"sigma1\": " << json_number(config.flow.sigma1)
        << ", \"sigma2\": " << json_number(config.flow.sigma2)
        << ", \"cfl\": " << json_number(config.flow.cfl_factor)
        << ", \"resample_interval\": " << config.flow.resample_interval
        << ", \"area_floor\": " << json_number(config.flow.area_floor)
        << ", \"k_cap\": " << json_number(config.flow.k_cap)
        << ", \"t_cap\": " << json_number(config.flow.t_cap) << "},\n"
        << "  \"fixed_dt\": " << json_number(config.fixed_dt) << ",\n"
        << "  \"analysis\": {\"identities\": " << (config.analysis.identities ? "true" : "false")
        << ", \"rescaling\": " << (config.analysis.rescaling ? "true" : "false")
        << ", \"entropy\": " << (config.analysis.entropy ? "true" : "false")
        << ", \"concentration\": " << (config.analysis.concentration ? "true" : "false")
        << ", \"rho\": " << json_number(config.analysis.rho)
        << ", \"eps1\": " << json_number(config.analysis.eps1)
        << ", \"concentration_stride\": " << config.analysis.concentration_stride << "},\n"
        << "  \"output\": {\"dir\": \"" << config.output.dir
        << "\", \"snapshot_interval\": " << config.output.snapshot_interval
        << ", \"record_interval\": " << config.output.record_interval
        << ", \"svg\": " << (config.output.svg ? "true" : "false") << "},\n"
        << "  \"tolerances\": {\"identity\": " << json_number(config.tolerances.identity)
        << ", \"area_pct\": " << json_number(config.tolerances.area_pct)
        << ", \"roundness\": " << json_number(config.tolerances.roundness)
        << ", \"limit_shape\": " << json_number(config.tolerances.limit_shape) << "},\n"
        << "  \"seed\": " << config.seed << "\n}\n";
    return out.str();
}

InitialData build_initial(const InitialSpec& spec, std::uint64_t seed) {
    InitialData data;
    if (!spec.file.empty()) {
        data.curve = read_curve_file(spec.file);
        return data;
    }
    if (spec.preset == "circle") {
        data.curve = circle_curve(spec.radius, spec.n);
        data.profile = circle_profile(spec.radius, spec.m);
        // theta = 0 means tangent (1, 0), the bottom point of the circle.
        data.anchor = {0.0, -spec.radius};
        data.has_profile = true;
        return data;
    }
    if (spec.preset == "ellipse") {
        data.curve = ellipse_curve(spec.a, spec.b, spec.n);
        data.profile = ellipse_profile(spec.a, spec.b, spec.m);
        data.anchor = ellipse_anchor(spec.a, spec.b);
        data.has_profile = true;
        return data;
    }
    if (spec.preset == "flower") {
        data.curve = flower_curve(spec.radius, spec.amplitude, spec.modes, spec.n);
        return data;
    }
    if (spec.preset == "wobble") {
        data.curve = wobble_curve(spec.radius, spec.amplitude, spec.modes, seed, spec.n);
        return data;
    }
    if (spec.preset == "support_oval") {
        data.curve = support_oval(spec.h0, spec.cos_coeffs, spec.n);
        return data;
    }
    throw std::invalid_argument("config: unknown preset \"" + spec.preset + "\"");
}

}  // namespace curveflow
