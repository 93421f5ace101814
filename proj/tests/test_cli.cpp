#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "curveflow/config.hpp"
#include "curveflow/io.hpp"
#include "curveflow/presets.hpp"
#include "curveflow/profile.hpp"

using namespace curveflow;

namespace {

namespace fs = std::filesystem;

const fs::path& scratch_root() {
    static const fs::path root = [] {
        const fs::path dir = fs::temp_directory_path() / "curveflow_cli_tests";
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }();
    return root;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    REQUIRE(out.good());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t line_count(const fs::path& path) {
    std::ifstream in(path);
    std::size_t count = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++count;
    return count;
}

int run_cli(const std::string& args) {
    const std::string command =
        std::string(CURVEFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_shell(const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check_key_order(const std::string& line, const std::vector<std::string>& keys) {
    std::size_t last = 0;
    for (const std::string& key : keys) {
        const std::size_t at = line.find("\"" + key + "\":");
        CHECK(at != std::string::npos);
        CHECK(at >= last);
        last = at;
    }
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("json number rendering") {
    CHECK(json_number(1.5) == "1.5");
    CHECK(json_number(0.0) == "0");
    CHECK(json_number(kNaN) == "null");
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "null");
    // 17 significant digits make the decimal round trip exact.
    const double value = 1.0 / 3.0;
    CHECK(std::stod(json_number(value)) == value);
}

TEST_CASE("curve files round trip exactly") {
    const SampledCurve curve = wobble_curve(1.0, 0.1, 5, 42, 64);
    const fs::path dir = scratch_root() / "io";
    fs::create_directories(dir);

    write_curve_json(dir / "curve.json", curve);
    const SampledCurve from_json = read_curve_json(dir / "curve.json");
    REQUIRE(from_json.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(from_json[i].x == curve[i].x);
        CHECK(from_json[i].y == curve[i].y);
    }

    write_curve_csv(dir / "curve.csv", curve);
    const SampledCurve from_csv = read_curve_csv(dir / "curve.csv");
    REQUIRE(from_csv.size() == curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(from_csv[i].x == curve[i].x);
        CHECK(from_csv[i].y == curve[i].y);
    }

    CHECK(read_curve_file(dir / "curve.json").size() == curve.size());
    CHECK(read_curve_file(dir / "curve.csv").size() == curve.size());
    write_text(dir / "curve.txt", "not a curve");
    CHECK_THROWS_AS((void)read_curve_file(dir / "curve.txt"), std::invalid_argument);
}

TEST_CASE("profile csv round trips exactly") {
    const AngleProfile profile = ellipse_profile(2.0, 1.0, 64);
    const fs::path path = scratch_root() / "profile.csv";
    write_profile_csv(path, profile);
    const AngleProfile back = read_profile_csv(path);
    REQUIRE(back.k.size() == profile.k.size());
    for (std::size_t i = 0; i < profile.k.size(); ++i) CHECK(back.k[i] == profile.k[i]);
}

TEST_CASE("trajectory record line format") {
    DiagnosticsRecord rec;
    rec.t = 0.125;
    rec.length = 6.5;
    rec.area = 3.25;
    rec.winding = -2;
    rec.energy = 9.75;
    rec.k_min = -0.5;
    rec.k_max = 4.25;
    rec.int_k2 = 17.0;
    rec.int_F2 = 23.5;
    rec.ks_norm2 = 1.0 / 3.0;
    rec.entropy = kNaN;
    rec.k_star = kNaN;
    rec.resampled = true;

    const std::string line = trajectory_record_line(rec);
    check_key_order(line, {"t", "L", "A", "omega", "E", "k_min", "k_max", "int_k2",
                           "int_F2", "ks_norm2", "entropy", "k_star", "resampled"});
    CHECK(contains(line, "\"entropy\": null"));
    CHECK(contains(line, "\"omega\": -2"));
    CHECK(contains(line, "\"resampled\": true"));

    const DiagnosticsRecord back = parse_trajectory_record(line);
    CHECK(back.t == rec.t);
    CHECK(back.length == rec.length);
    CHECK(back.area == rec.area);
    CHECK(back.winding == rec.winding);
    CHECK(back.energy == rec.energy);
    CHECK(back.k_min == rec.k_min);
    CHECK(back.k_max == rec.k_max);
    CHECK(back.int_k2 == rec.int_k2);
    CHECK(back.int_F2 == rec.int_F2);
    CHECK(back.ks_norm2 == rec.ks_norm2);
    CHECK(std::isnan(back.entropy));
    CHECK(std::isnan(back.k_star));
    CHECK(back.resampled);
}

TEST_CASE("rescaled row round trip") {
    RescaledRow row;
    row.that = 1.25;
    row.Lhat = 6.5;
    row.Ahat = 3.125;
    row.khat_min = 0.75;
    row.khat_max = 1.5;
    row.kshat_norm2 = 0.0625;
    // R..Ehat stay NaN: the record had no stored snapshot.
    const std::string line = rescaled_row_line(row);
    check_key_order(line, {"that", "Lhat", "Ahat", "khat_min", "khat_max", "kshat_norm2",
                           "R", "intQ2rho", "defect", "f", "Ehat"});
    CHECK(contains(line, "\"R\": null"));

    const RescaledRow back = parse_rescaled_row(line);
    CHECK(back.that == row.that);
    CHECK(back.Lhat == row.Lhat);
    CHECK(back.Ahat == row.Ahat);
    CHECK(back.khat_min == row.khat_min);
    CHECK(back.khat_max == row.khat_max);
    CHECK(back.kshat_norm2 == row.kshat_norm2);
    CHECK(std::isnan(back.R));
    CHECK(std::isnan(back.Ehat));

    row.R = 3.83;
    row.intQ2rho = 0.01;
    row.defect = 0.25;
    row.f = -1.5;
    row.Ehat = -0.125;
    const RescaledRow full = parse_rescaled_row(rescaled_row_line(row));
    CHECK(full.R == row.R);
    CHECK(full.intQ2rho == row.intQ2rho);
    CHECK(full.defect == row.defect);
    CHECK(full.f == row.f);
    CHECK(full.Ehat == row.Ehat);
}

TEST_CASE("concentration row round trip") {
    ConcentrationRow row;
    row.t = 0.5;
    row.rho = 0.25;
    row.eps = 1.0625;
    row.xstar = {0.75, -0.5};
    row.r_crit = 0.4375;
    const std::string line = concentration_row_line(row);
    check_key_order(line, {"t", "rho", "eps", "xstar", "r_crit"});
    const ConcentrationRow back = parse_concentration_row(line);
    CHECK(back.t == row.t);
    CHECK(back.rho == row.rho);
    CHECK(back.eps == row.eps);
    CHECK(back.xstar.x == row.xstar.x);
    CHECK(back.xstar.y == row.xstar.y);
    CHECK(back.r_crit == row.r_crit);
}

TEST_CASE("config defaults and validation") {
    const ScenarioConfig defaults = parse_config("{}");
    CHECK(defaults.initial.preset == "circle");
    CHECK(defaults.initial.n == 512);
    CHECK(defaults.solver == "auto");
    CHECK(defaults.flow.sigma1 == 1.0);
    CHECK(defaults.flow.sigma2 == 1.0);
    CHECK(std::isinf(defaults.flow.t_cap));
    CHECK(defaults.analysis.identities);
    CHECK_FALSE(defaults.analysis.concentration);
    CHECK(defaults.tolerances.roundness == 1.05);

    // Null is treated like an absent key.
    CHECK(std::isinf(parse_config("{\"flow\": {\"t_cap\": null}}").flow.t_cap));

    try {
        (void)parse_config("{\"bogus\": 1}");
        CHECK(false);
    } catch (const std::invalid_argument& error) {
        CHECK(contains(error.what(), "bogus"));
    }
    try {
        (void)parse_config("{\"flow\": {\"sigma3\": 1}}");
        CHECK(false);
    } catch (const std::invalid_argument& error) {
        CHECK(contains(error.what(), "sigma3"));
    }
    CHECK_THROWS_AS((void)parse_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config("{\"solver\": \"magic\"}"), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)parse_config(
            "{\"initial\": {\"preset\": \"circle\", \"file\": \"curve.json\"}}"),
        std::invalid_argument);
    // Preset names are resolved when the initial data is built.
    const ScenarioConfig odd = parse_config("{\"initial\": {\"preset\": \"heptagram\"}}");
    CHECK_THROWS_AS((void)build_initial(odd.initial, 0), std::invalid_argument);
}

TEST_CASE("config dump round trips") {
    ScenarioConfig config;
    config.initial.preset = "flower";
    config.initial.radius = 1.25;
    config.initial.amplitude = 0.3;
    config.initial.modes = 3;
    config.initial.n = 256;
    config.solver = "hybrid";
    config.flow.sigma2 = 0.25;
    config.flow.cfl_factor = 0.1;
    config.flow.area_floor = 1e-5;
    config.analysis.concentration = true;
    config.analysis.rho = 0.375;
    config.output.dir = "demo";
    config.output.svg = true;
    config.seed = 1234;

    const ScenarioConfig back = parse_config(dump_config(config));
    CHECK(back.initial.preset == config.initial.preset);
    CHECK(back.initial.radius == config.initial.radius);
    CHECK(back.initial.amplitude == config.initial.amplitude);
    CHECK(back.initial.n == config.initial.n);
    CHECK(back.solver == config.solver);
    CHECK(back.flow.sigma2 == config.flow.sigma2);
    CHECK(back.flow.cfl_factor == config.flow.cfl_factor);
    CHECK(back.flow.area_floor == config.flow.area_floor);
    CHECK(std::isinf(back.flow.t_cap));
    CHECK(back.analysis.concentration == true);
    CHECK(back.analysis.rho == config.analysis.rho);
    CHECK(back.output.dir == config.output.dir);
    CHECK(back.output.svg == true);
    CHECK(back.seed == config.seed);
}

TEST_CASE("initial data construction") {
    InitialSpec circle;
    circle.preset = "circle";
    circle.radius = 2.0;
    circle.n = 64;
    circle.m = 32;
    const InitialData c = build_initial(circle, 0);
    CHECK(c.curve.size() == 64);
    CHECK(c.has_profile);
    CHECK(c.profile.k.size() == 32);
    CHECK(c.profile.k.front() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.anchor.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(c.anchor.y == doctest::Approx(-2.0).epsilon(1e-14));

    InitialSpec ellipse;
    ellipse.preset = "ellipse";
    ellipse.a = 2.0;
    ellipse.b = 1.0;
    const InitialData e = build_initial(ellipse, 0);
    CHECK(e.has_profile);
    CHECK(e.anchor.y == doctest::Approx(-1.0).epsilon(1e-14));

    InitialSpec flower;
    flower.preset = "flower";
    flower.amplitude = 0.3;
    const InitialData f = build_initial(flower, 0);
    CHECK_FALSE(f.has_profile);

    InitialSpec wobble;
    wobble.preset = "wobble";
    wobble.amplitude = 0.1;
    wobble.modes = 5;
    const InitialData w1 = build_initial(wobble, 42);
    const InitialData w2 = build_initial(wobble, 42);
    const InitialData w3 = build_initial(wobble, 43);
    CHECK_FALSE(w1.has_profile);
    REQUIRE(w1.curve.size() == w2.curve.size());
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < w1.curve.size(); ++i) {
        identical = identical && w1.curve[i].x == w2.curve[i].x &&
                    w1.curve[i].y == w2.curve[i].y;
        differs = differs || w1.curve[i].x != w3.curve[i].x;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("command line run, analyze and plot") {
    const fs::path root = scratch_root() / "cli";
    fs::create_directories(root);
    const fs::path config = root / "scenario.json";
    write_text(config, R"({
  "initial": {"preset": "circle", "radius": 1.0, "n": 128, "m": 64},
  "solver": "auto",
  "flow": {"sigma1": 1.0, "sigma2": 1.0, "cfl": 0.01, "area_floor": 1e-5},
  "output": {"dir": "run1", "snapshot_interval": 50}
})");

    CHECK(run_cli("run " + config.string() + " --out " + root.string()) == 0);
    const fs::path run_dir = root / "run1";
    CHECK(fs::exists(run_dir / "config.json"));
    CHECK(fs::exists(run_dir / "meta.json"));
    CHECK(fs::exists(run_dir / "trajectory.jsonl"));
    CHECK(fs::exists(run_dir / "rescaled.jsonl"));
    CHECK(fs::exists(run_dir / "snapshots" / "index.jsonl"));
    const std::string summary = read_text(run_dir / "summary.json");
    CHECK(contains(summary, "\"verdict\": \"round_point\""));

    // The stored series parses back with the library readers.
    std::ifstream series(run_dir / "trajectory.jsonl");
    std::string first_line;
    REQUIRE(std::getline(series, first_line));
    const DiagnosticsRecord first = parse_trajectory_record(first_line);
    CHECK(first.t == 0.0);
    CHECK(first.winding == 1);

    CHECK(run_cli("analyze " + run_dir.string()) == 0);
    CHECK(contains(read_text(run_dir / "summary.json"), "\"verdict\": \"round_point\""));

    CHECK(run_cli("plot " + run_dir.string()) == 0);
    CHECK(fs::exists(run_dir / "series.svg"));
    CHECK(fs::exists(run_dir / "rescaled.svg"));
    CHECK(fs::exists(run_dir / "frames"));
}

TEST_CASE("command line error paths") {
    CHECK(run_cli("run " + (scratch_root() / "missing.json").string()) == 1);
    CHECK(run_cli("transmogrify") != 0);
    CHECK(run_cli("") != 0);

    const fs::path bad = scratch_root() / "bad.json";
    write_text(bad, "{\"bogus\": 1}");
    CHECK(run_cli("run " + bad.string()) == 1);
}

TEST_CASE("command line sweep") {
    const fs::path root = scratch_root() / "sweep_out";
    fs::create_directories(root);
    const fs::path config = scratch_root() / "sweep.json";
    write_text(config, R"({
  "base": {
    "initial": {"preset": "circle", "radius": 1.0, "n": 128, "m": 64},
    "flow": {"cfl": 0.01, "area_floor": 1e-4},
    "output": {"dir": "sw", "snapshot_interval": 100}
  },
  "grid": {"radius": [0.8, 1.0]}
})");
    CHECK(run_cli("sweep " + config.string() + " --out " + root.string()) == 0);
    const fs::path index = root / "sw" / "index.jsonl";
    REQUIRE(fs::exists(index));
    CHECK(line_count(index) == 2);
    CHECK(fs::exists(root / "sw" / "cell_0000" / "summary.json"));
    CHECK(fs::exists(root / "sw" / "cell_0001" / "summary.json"));
    const std::string rows = read_text(index);
    CHECK(contains(rows, "\"cell\": 0"));
    CHECK(contains(rows, "\"radius\": 0.8"));
}

TEST_CASE("output root honors the environment variable") {
    const fs::path root = scratch_root() / "env_out";
    fs::create_directories(root);
    const fs::path config = scratch_root() / "env.json";
    write_text(config, R"({
  "initial": {"preset": "circle", "radius": 1.0, "n": 128, "m": 64},
  "flow": {"cfl": 0.01, "area_floor": 1e-4},
  "output": {"dir": "env_run", "snapshot_interval": 100}
})");
    const std::string command = "CURVEFLOW_OUT=" + root.string() + " " +
                                std::string(CURVEFLOW_CLI_PATH) + " run " + config.string();
    CHECK(run_shell(command) == 0);
    CHECK(fs::exists(root / "env_run" / "summary.json"));
}
