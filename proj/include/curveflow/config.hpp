#pragma once

/// @file config.hpp
/// Scenario configuration: JSON schema for the CLI experiments (initial
/// curve, solver choice, flow parameters, analysis toggles, output
/// options, tolerance overrides) and construction of the initial data.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/profile.hpp"

namespace curveflow {

/// Initial-curve selector: either a preset with parameters or a curve
/// file (.json / .csv). Presets: circle(radius), ellipse(a, b),
/// flower(radius, amplitude, modes), wobble(radius, amplitude, modes;
/// seeded), support_oval(h0, cos_coeffs).
struct InitialSpec {
    std::string preset = "circle";
    std::string file;
    double radius = 1.0;
    double a = 2.0;
    double b = 1.0;
    double amplitude = 0.0;
    int modes = 3;
    double h0 = 2.0;
    std::vector<double> cos_coeffs;
    std::size_t n = 512;  ///< polygon resolution
    std::size_t m = 512;  ///< tangent-angle resolution (theta solver)
};

struct AnalysisToggles {
    bool identities = true;
    bool rescaling = true;
    bool entropy = true;
    bool concentration = false;
    double rho = 0.5;
    double eps1 = 1.0;
    std::size_t concentration_stride = 1;  ///< every k-th snapshot
};

struct OutputSpec {
    std::string dir;
    std::size_t snapshot_interval = 100;
    std::size_t record_interval = 1;
    bool svg = false;
};

/// Gate values used by summaries; the verdict thresholds are artifact
/// policy (documented in the summary itself), not theory constants.
struct Tolerances {
    double identity = 1e-3;
    double area_pct = 0.02;
    double roundness = 1.05;
    double limit_shape = 5e-2;
};

struct ScenarioConfig {
    InitialSpec initial;
    std::string solver = "auto";  ///< polygon | theta | hybrid | auto
    FlowParams flow;
    double fixed_dt = 0.0;  ///< > 0 bypasses the adaptive step size
    AnalysisToggles analysis;
    OutputSpec output;
    Tolerances tolerances;
    std::uint64_t seed = 0;
};

/// Parses and validates a config JSON text. Unknown keys and malformed
/// values throw std::invalid_argument with the offending key named.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Normalized JSON echo of a config (stable field order, suitable for
/// the run directory's config.json).
std::string dump_config(const ScenarioConfig& config);

/// Initial data built from a spec: the polygon is always present; the
/// circle and ellipse presets additionally carry their exact
/// tangent-angle profiles with the matching anchor point.
struct InitialData {
    SampledCurve curve;
    bool has_profile = false;
    AngleProfile profile;
    Vec2 anchor;
};

InitialData build_initial(const InitialSpec& spec, std::uint64_t seed);

}  // namespace curveflow
