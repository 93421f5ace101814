#pragma once

/// @file runner.hpp
/// Experiment pipelines: evolve a configured scenario, persist the
/// series and snapshots, run the enabled analyses, and summarize with a
/// verdict. Also the parameter sweep, the post-hoc analyze pass over a
/// stored run directory, and figure emission.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/config.hpp"
#include "curveflow/flow.hpp"

namespace curveflow {

/// Polygon-to-tangent-angle handoff policy for hybrid runs: the polygon
/// leg advances in chunks; once `streak` consecutive records are
/// strictly convex with scale-invariant margin min_k * L / (2 pi) >
/// `margin`, the state converts to a tangent-angle profile and the
/// theta solver takes over.
struct HandoffPolicy {
    std::size_t streak = 25;
    double margin = 0.2;
    double chunk = 0.0;  ///< polygon-leg time per probe; 0 picks T_max / 40
};

struct HybridResult {
    Trajectory trajectory;
    bool handoff = false;
    double handoff_t = std::numeric_limits<double>::quiet_NaN();
};

/// Polygon leg with default stops until persistent convexity, then the
/// theta solver (profile resolution m) with the caller's stop
/// parameters; records and snapshots are stitched on a common time
/// axis. Without a handoff the polygon trajectory is returned as is.
HybridResult evolve_hybrid(const SampledCurve& initial, const FlowParams& params,
                           const EvolveOptions& options, std::size_t m,
                           const HandoffPolicy& policy = {});

struct RunOutcome {
    std::filesystem::path dir;
    std::string verdict = "inconclusive";
    double t_est = std::numeric_limits<double>::quiet_NaN();
    double t_max = std::numeric_limits<double>::quiet_NaN();
    Termination termination = Termination::running;
    bool handoff = false;
    double handoff_t = std::numeric_limits<double>::quiet_NaN();
    /// Analysis-stage failures; the corresponding outputs are absent
    /// but everything already written stays on disk.
    std::vector<std::string> errors;
};

/// Executes a scenario end to end. `out_root` anchors relative output
/// directories (the CLI passes $CURVEFLOW_OUT or "."). Writes
/// config.json, meta.json, trajectory.jsonl, snapshots/, the enabled
/// analysis series, summary.json, and (when enabled) SVG figures.
RunOutcome run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_root);

/// Re-runs the analysis and summary stage from a stored run directory.
RunOutcome analyze_run(const std::filesystem::path& run_dir);

/// Emits SVG figures (curve frames and series charts) for a stored run.
void plot_run(const std::filesystem::path& run_dir);

/// Parameter sweep: a base scenario plus value axes over
/// {sigma1, sigma2, radius, a, b, amplitude}. Cells run independently
/// in row-major order (last axis fastest); failures are recorded in the
/// index and the sweep continues.
struct SweepConfig {
    ScenarioConfig base;
    std::vector<std::pair<std::string, std::vector<double>>> axes;
};

SweepConfig parse_sweep_config(const std::string& text);

struct SweepOutcome {
    std::filesystem::path index_path;
    std::size_t cells = 0;
    std::size_t failures = 0;
};

SweepOutcome run_sweep(const SweepConfig& sweep, const std::filesystem::path& out_root);

}  // namespace curveflow
