#include "curveflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "curveflow/concentration.hpp"
#include "curveflow/io.hpp"
#include "curveflow/profile.hpp"
#include "curveflow/rescaling.hpp"
#include "curveflow/svg.hpp"

namespace curveflow {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = 3.141592653589793238462643383279;
constexpr std::size_t kMaxHybridChunks = 10000;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::string quoted(const std::string& text) { return "\"" + text + "\""; }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string snapshot_name(std::size_t index, const char* stem, const char* ext) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%s_%06zu.%s", stem, index, ext);
    return buffer;
}

/// Appends a finished leg to a combined trajectory, shifting times by
/// t_base and dropping the leg's duplicated initial record/snapshot.
void append_leg(Trajectory& combined, const Trajectory& leg, double t_base) {
    const bool skip_first = !combined.records.empty();
    for (std::size_t i = skip_first ? 1 : 0; i < leg.records.size(); ++i) {
        DiagnosticsRecord record = leg.records[i];
        record.t += t_base;
        combined.records.push_back(record);
    }
    for (std::size_t i = (!combined.snapshots.empty()) ? 1 : 0; i < leg.snapshots.size(); ++i) {
        Snapshot snapshot = leg.snapshots[i];
        snapshot.t += t_base;
        combined.snapshots.push_back(std::move(snapshot));
    }
    combined.steps += leg.steps;
    combined.rejected_steps += leg.rejected_steps;
    combined.termination = leg.termination;
}

}  // namespace

HybridResult evolve_hybrid(const SampledCurve& initial, const FlowParams& params,
                           const EvolveOptions& options, std::size_t m,
                           const HandoffPolicy& policy) {
    const CurveGeometry geom0 = geometry(initial);
    FlowParams polygon_params = with_default_stops(params, geom0.length, geom0.area);

    double chunk = policy.chunk;
    if (chunk <= 0.0) {
        const double t_max = maximal_time_upper_bound(geom0.length, geom0.area, params);
        chunk = (std::isfinite(t_max) && t_max > 0.0) ? t_max / 40.0 : 0.05;
    }

    HybridResult result;
    Trajectory& combined = result.trajectory;
    combined.params = polygon_params;
    combined.solver = SolverKind::polygon;

    SampledCurve state = initial;
    double t_base = 0.0;
    std::size_t streak = 0;
    for (std::size_t probes = 0; probes < kMaxHybridChunks; ++probes) {
        FlowParams chunk_params = polygon_params;
        chunk_params.t_cap = std::min(chunk, params.t_cap - t_base);
        if (chunk_params.t_cap <= 0.0) {
            combined.termination = Termination::t_cap;
            return result;
        }
        const Trajectory leg = evolve_polygon(state, chunk_params, options);
        append_leg(combined, leg, t_base);
        t_base = combined.records.back().t;
        state = combined.snapshots.back().curve;

        for (const DiagnosticsRecord& record : leg.records) {
            const bool convex_enough =
                record.k_min * record.length / (2.0 * kPi) > policy.margin;
            streak = convex_enough ? streak + 1 : 0;
        }
        if (streak >= policy.streak &&
            classify_convexity(geometry(state)) == Convexity::convex)
            break;
        if (leg.termination != Termination::t_cap) return result;
        if (t_base >= params.t_cap) {
            combined.termination = Termination::t_cap;
            return result;
        }
    }
    if (streak < policy.streak) return result;

    const ProfileFromPolygon converted = profile_from_polygon(state, m);
    FlowParams theta_params = params;
    if (std::isfinite(params.t_cap)) theta_params.t_cap = params.t_cap - t_base;
    const CurveGeometry handoff_geom = geometry(state);
    theta_params = with_default_stops(theta_params, handoff_geom.length, handoff_geom.area);

    Trajectory theta_leg =
        evolve_theta(converted.profile, converted.anchor, theta_params, options);
    // The conversion changes the discretization; the stitched record
    // must not be used as a finite-difference window endpoint.
    if (!theta_leg.records.empty()) theta_leg.records.front().resampled = true;
    if (!combined.records.empty() && combined.records.back().t == t_base)
        combined.records.pop_back();
    if (!combined.snapshots.empty() && combined.snapshots.back().t == t_base)
        combined.snapshots.pop_back();
    const bool had_records = !combined.records.empty();
    for (std::size_t i = 0; i < theta_leg.records.size(); ++i) {
        DiagnosticsRecord record = theta_leg.records[i];
        record.t += t_base;
        if (i == 0 && had_records) record.resampled = true;
        combined.records.push_back(record);
    }
    for (Snapshot snapshot : theta_leg.snapshots) {
        snapshot.t += t_base;
        combined.snapshots.push_back(std::move(snapshot));
    }
    combined.steps += theta_leg.steps;
    combined.rejected_steps += theta_leg.rejected_steps;
    combined.termination = theta_leg.termination;
    combined.solver = SolverKind::theta;
    result.handoff = true;
    result.handoff_t = t_base;
    return result;
}

namespace {

struct AnalysisProducts {
    bool have_identities = false;
    IdentityReport identities;
    ExtinctionEstimate extinction;
    double t_max = nan_value();
    double threshold_value = nan_value();
    double threshold_bound = nan_value();
    double threshold_bound_squared = nan_value();
    bool threshold_holds = false;
    bool threshold_holds_squared = false;
    bool initial_convex = false;

    bool have_rescaled = false;
    RescaledTrajectory rescaled;
    bool have_monotonicity = false;
    MonotonicityReport monotonicity;
    bool have_entropy = false;
    EntropyReport entropy;
    bool have_area_limit = false;
    AreaLimitReport area_limit;
    bool have_limit_shape = false;
    LimitShapeResidual limit_shape;

    std::size_t concentration_rows = 0;
    double final_r_crit = nan_value();
};

void write_trajectory_file(const fs::path& dir, const Trajectory& trajectory) {
    std::ofstream out(dir / "trajectory.jsonl");
    if (!out.good()) throw std::runtime_error("cannot write trajectory.jsonl");
    for (const DiagnosticsRecord& record : trajectory.records)
        out << trajectory_record_line(record) << '\n';
}

void write_snapshot_files(const fs::path& dir, const Trajectory& trajectory) {
    const fs::path snap_dir = dir / "snapshots";
    fs::create_directories(snap_dir);
    std::ofstream index(snap_dir / "index.jsonl");
    if (!index.good()) throw std::runtime_error("cannot write snapshots/index.jsonl");
    for (std::size_t i = 0; i < trajectory.snapshots.size(); ++i) {
        const Snapshot& snapshot = trajectory.snapshots[i];
        const std::string curve_name = snapshot_name(i, "curve", "json");
        write_curve_json(snap_dir / curve_name, snapshot.curve);
        std::string profile_entry = "null";
        if (!snapshot.profile_k.empty()) {
            const std::string profile_name = snapshot_name(i, "profile", "csv");
            AngleProfile profile;
            profile.k = snapshot.profile_k;
            write_profile_csv(snap_dir / profile_name, profile);
            profile_entry = quoted(profile_name);
        }
        index << "{\"i\": " << i << ", \"t\": " << json_number(snapshot.t)
              << ", \"curve\": " << quoted(curve_name) << ", \"profile\": " << profile_entry
              << "}\n";
    }
}

void write_meta_file(const fs::path& dir, const Trajectory& trajectory,
                     const std::string& solver_name, bool handoff, double handoff_t) {
    std::ostringstream out;
    out << "{\"solver\": " << quoted(solver_name)
        << ", \"termination\": " << quoted(to_string(trajectory.termination))
        << ", \"steps\": " << trajectory.steps
        << ", \"rejected_steps\": " << trajectory.rejected_steps
        << ", \"handoff\": " << (handoff ? "true" : "false")
        << ", \"handoff_t\": " << json_number(handoff_t) << "}\n";
    write_file(dir / "meta.json", out.str());
}

void write_rescaled_series(const fs::path& dir, const RescaledTrajectory& rescaled,
                           const AnalysisProducts& products) {
    std::map<double, const MonotonicityRecord*> mono_by_that;
    if (products.have_monotonicity)
        for (const MonotonicityRecord& record : products.monotonicity.records)
            mono_by_that[record.that] = &record;
    std::map<double, const EntropyRecord*> entropy_by_that;
    if (products.have_entropy)
        for (const EntropyRecord& record : products.entropy.records)
            entropy_by_that[record.that] = &record;

    std::ofstream out(dir / "rescaled.jsonl");
    if (!out.good()) throw std::runtime_error("cannot write rescaled.jsonl");
    for (const RescaledState& state : rescaled.states) {
        RescaledRow row;
        row.that = state.that;
        row.Lhat = state.Lhat;
        row.Ahat = state.Ahat;
        row.khat_min = state.khat_min;
        row.khat_max = state.khat_max;
        row.kshat_norm2 = state.kshat_norm2;
        if (const auto it = mono_by_that.find(state.that); it != mono_by_that.end()) {
            row.R = it->second->R;
            row.intQ2rho = it->second->intQ2rho;
            row.defect = it->second->defect;
        }
        if (const auto it = entropy_by_that.find(state.that); it != entropy_by_that.end()) {
            row.f = it->second->f;
            row.Ehat = it->second->Ehat;
        }
        out << rescaled_row_line(row) << '\n';
    }
}

void run_analyses(const ScenarioConfig& config, const Trajectory& trajectory,
                  const fs::path& dir, AnalysisProducts& products,
                  std::vector<std::string>& errors) {
    const auto guarded = [&errors](const char* stage, const auto& body) {
        try {
            body();
        } catch (const std::exception& error) {
            errors.push_back(std::string(stage) + ": " + error.what());
        }
    };

    const DiagnosticsRecord& first = trajectory.records.front();
    products.initial_convex = first.k_min > 0.0;
    products.t_max =
        maximal_time_upper_bound(first.length, first.area, trajectory.params);
    products.threshold_value = std::sqrt(std::max(0.0, first.length * first.ks_norm2));
    guarded("threshold", [&] {
        const double alpha = 1.0;
        products.threshold_bound =
            nonconvex_threshold(trajectory.params, products.t_max, alpha);
        products.threshold_bound_squared =
            nonconvex_threshold_squared(trajectory.params, products.t_max, alpha);
        products.threshold_holds = products.threshold_value < products.threshold_bound;
        products.threshold_holds_squared =
            first.length * first.ks_norm2 < products.threshold_bound_squared;
    });

    if (config.analysis.identities)
        guarded("identities", [&] {
            products.identities = verify_identities(trajectory);
            products.have_identities = true;
        });

    products.extinction = extinction_estimate(trajectory);

    if (config.analysis.rescaling && products.extinction.available) {
        guarded("rescale", [&] {
            // The refined estimate extrapolates; when noise pushes it at
            // or below the last record time the naive anchor, which is
            // always beyond it, takes over.
            double T = products.extinction.refined;
            if (!(T > trajectory.records.back().t)) T = products.extinction.naive;
            const Vec2 origin = extinction_point(trajectory, T);
            products.rescaled = rescale(trajectory, T, origin);
            products.have_rescaled = true;
        });
        if (products.have_rescaled) {
            guarded("monotonicity", [&] {
                products.monotonicity = monotonicity_track(products.rescaled);
                products.have_monotonicity = true;
            });
            if (config.analysis.entropy)
                guarded("entropy", [&] {
                    products.entropy = rescaled_entropy_track(products.rescaled);
                    products.have_entropy = true;
                });
            guarded("area_limit", [&] {
                products.area_limit = rescaled_area_limit(products.rescaled);
                products.have_area_limit = true;
            });
            guarded("limit_shape", [&] {
                if (products.rescaled.snapshots.empty())
                    throw std::invalid_argument("no rescaled snapshots");
                products.limit_shape = limit_shape_residual(
                    products.rescaled.snapshots.back().curve, trajectory.params.sigma1);
                products.have_limit_shape = true;
            });
            guarded("rescaled_series", [&] {
                write_rescaled_series(dir, products.rescaled, products);
            });
        }
    }

    if (config.analysis.concentration)
        guarded("concentration", [&] {
            std::ofstream out(dir / "concentration.jsonl");
            if (!out.good()) throw std::runtime_error("cannot write concentration.jsonl");
            for (std::size_t i = 0; i < trajectory.snapshots.size();
                 i += config.analysis.concentration_stride) {
                const Snapshot& snapshot = trajectory.snapshots[i];
                ConcentrationRow row;
                row.t = snapshot.t;
                row.rho = config.analysis.rho;
                const SupConcentration sup =
                    sup_concentration(snapshot.curve, config.analysis.rho);
                row.eps = sup.eps;
                row.xstar = sup.xstar;
                row.r_crit = critical_radius(snapshot.curve, config.analysis.eps1).r;
                out << concentration_row_line(row) << '\n';
                ++products.concentration_rows;
                products.final_r_crit = row.r_crit;
            }
        });
}

std::string decide_verdict(const ScenarioConfig& config, const Trajectory& trajectory,
                           const AnalysisProducts& products, double* gap_out,
                           double* ratio_out) {
    const double sigma1 = trajectory.params.sigma1;
    double gap = nan_value(), ratio = nan_value();
    bool gates = false;
    if (products.have_rescaled && !products.rescaled.states.empty()) {
        const RescaledState& last = products.rescaled.states.back();
        gap = std::abs(last.Ahat - sigma1 * kPi);
        ratio = last.khat_min > 0.0 ? last.khat_max / last.khat_min : nan_value();
        const bool area_ok = gap <= config.tolerances.area_pct * sigma1 * kPi;
        const bool round_ok =
            std::isfinite(ratio) && ratio < config.tolerances.roundness;
        const bool shape_ok = products.have_limit_shape &&
                              products.limit_shape.linf < config.tolerances.limit_shape;
        gates = area_ok && round_ok && shape_ok;
    }
    if (gap_out) *gap_out = gap;
    if (ratio_out) *ratio_out = ratio;
    if (gates) return "round_point";

    const bool promised = products.initial_convex || products.threshold_holds ||
                          products.threshold_holds_squared;
    const bool collapsed = trajectory.termination == Termination::area_floor ||
                           trajectory.termination == Termination::k_cap;
    const bool deep = products.have_rescaled && !products.rescaled.states.empty() &&
                      products.rescaled.states.back().that >= 3.0;
    if (promised && collapsed && deep) return "threshold_violated";
    return "inconclusive";
}

void write_summary(const fs::path& dir, const ScenarioConfig& config,
                   const Trajectory& trajectory, const std::string& solver_name,
                   const AnalysisProducts& products, const RunOutcome& outcome,
                   double verdict_gap, double verdict_ratio) {
    std::ostringstream out;
    out << "{\n  \"solver\": " << quoted(solver_name)
        << ",\n  \"termination\": " << quoted(to_string(trajectory.termination))
        << ",\n  \"steps\": " << trajectory.steps
        << ",\n  \"handoff\": " << (outcome.handoff ? "true" : "false")
        << ",\n  \"handoff_t\": " << json_number(outcome.handoff_t)
        << ",\n  \"T_est\": ";
    if (products.extinction.available)
        out << "{\"naive\": " << json_number(products.extinction.naive)
            << ", \"refined\": " << json_number(products.extinction.refined) << "}";
    else
        out << "null";
    out << ",\n  \"T_max\": " << json_number(products.t_max)
        << ",\n  \"threshold\": {\"sqrtL_ks\": " << json_number(products.threshold_value)
        << ", \"alpha\": 1, \"bound\": " << json_number(products.threshold_bound)
        << ", \"holds\": " << (products.threshold_holds ? "true" : "false")
        << ", \"bound_squared\": " << json_number(products.threshold_bound_squared)
        << ", \"holds_squared\": " << (products.threshold_holds_squared ? "true" : "false")
        << ", \"initial_convex\": " << (products.initial_convex ? "true" : "false") << "}"
        << ",\n  \"identities\": ";
    if (products.have_identities) {
        const IdentityReport& identity = products.identities;
        out << "{\"max_length_residual\": " << json_number(identity.max_length_residual)
            << ", \"max_area_residual\": " << json_number(identity.max_area_residual)
            << ", \"max_energy_residual\": " << json_number(identity.max_energy_residual)
            << ", \"windows\": " << identity.windows << ", \"skipped\": " << identity.skipped
            << ", \"pass\": "
            << (identity.max_residual() < config.tolerances.identity ? "true" : "false")
            << "}";
    } else {
        out << "null";
    }
    out << ",\n  \"rescaled\": ";
    if (products.have_rescaled && !products.rescaled.states.empty()) {
        const RescaledState& last = products.rescaled.states.back();
        out << "{\"final_that\": " << json_number(last.that)
            << ", \"Ahat_gap\": " << json_number(verdict_gap)
            << ", \"roundness\": " << json_number(verdict_ratio)
            << ", \"limit_shape_linf\": "
            << json_number(products.have_limit_shape ? products.limit_shape.linf
                                                     : nan_value())
            << ", \"fitted_radius\": "
            << json_number(products.have_limit_shape ? products.limit_shape.fitted_radius
                                                     : nan_value())
            << ", \"area_limit_rate\": "
            << json_number(products.have_area_limit ? products.area_limit.fitted_rate
                                                    : nan_value())
            << ", \"monotonicity_residual\": "
            << json_number(products.have_monotonicity ? products.monotonicity.max_residual
                                                      : nan_value())
            << ", \"monotonicity_max_increase\": "
            << json_number(products.have_monotonicity ? products.monotonicity.max_increase
                                                      : nan_value())
            << ", \"entropy_that0\": "
            << json_number(products.have_entropy ? products.entropy.that0 : nan_value())
            << ", \"entropy_stabilization_that\": "
            << json_number(products.have_entropy ? products.entropy.stabilization_that
                                                 : nan_value())
            << ", \"final_ek_max\": "
            << json_number(products.have_entropy ? products.entropy.final_ek_max
                                                 : nan_value())
            << "}";
    } else {
        out << "null";
    }
    out << ",\n  \"concentration\": ";
    if (products.concentration_rows > 0)
        out << "{\"rows\": " << products.concentration_rows
            << ", \"final_r_crit\": " << json_number(products.final_r_crit) << "}";
    else
        out << "null";
    out << ",\n  \"verdict\": " << quoted(outcome.verdict)
        << ",\n  \"verdict_policy\": \"round_point requires |Ahat - sigma1*pi| <= "
        << "area_pct * sigma1 * pi, khat_max/khat_min < roundness, and limit-shape "
        << "residual < limit_shape at the final rescaled record (artifact policy "
        << "thresholds from the tolerances block, not theory constants)\""
        << ",\n  \"errors\": [";
    for (std::size_t i = 0; i < outcome.errors.size(); ++i)
        out << (i ? ", " : "") << quoted(outcome.errors[i]);
    out << "]\n}\n";
    write_file(dir / "summary.json", out.str());
}

void emit_figures(const fs::path& dir, const Trajectory& trajectory,
                  std::vector<std::string>& errors) {
    try {
        const fs::path frames = dir / "frames";
        fs::create_directories(frames);
        const std::size_t count = trajectory.snapshots.size();
        const std::size_t stride = count > 60 ? (count + 59) / 60 : 1;
        for (std::size_t i = 0; i < count; i += stride) {
            char title[64];
            std::snprintf(title, sizeof(title), "t = %.6f", trajectory.snapshots[i].t);
            write_curve_frame(frames / snapshot_name(i, "frame", "svg"),
                              trajectory.snapshots[i].curve, title);
        }
        std::vector<double> t;
        std::vector<double> length, area, energy;
        for (const DiagnosticsRecord& record : trajectory.records) {
            t.push_back(record.t);
            length.push_back(record.length);
            area.push_back(record.area);
            energy.push_back(record.energy);
        }
        write_series_svg(dir / "series.svg", t,
                         {{"L", length}, {"A", area}, {"E", energy}},
                         "length, area, energy", "t");
    } catch (const std::exception& error) {
        errors.push_back(std::string("figures: ") + error.what());
    }
}

fs::path resolve_dir(const std::string& configured, const fs::path& out_root) {
    fs::path dir = configured.empty() ? fs::path("run") : fs::path(configured);
    if (dir.is_relative()) dir = out_root / dir;
    return dir;
}

RunOutcome analyze_trajectory(const ScenarioConfig& config, const Trajectory& trajectory,
                              const fs::path& dir, const std::string& solver_name,
                              bool handoff, double handoff_t) {
    RunOutcome outcome;
    outcome.dir = dir;
    outcome.termination = trajectory.termination;
    outcome.handoff = handoff;
    outcome.handoff_t = handoff_t;
    if (trajectory.records.empty()) {
        outcome.errors.push_back("trajectory has no records");
        return outcome;
    }
    AnalysisProducts products;
    run_analyses(config, trajectory, dir, products, outcome.errors);
    outcome.t_max = products.t_max;
    outcome.t_est =
        products.extinction.available ? products.extinction.refined : nan_value();
    double gap = nan_value(), ratio = nan_value();
    outcome.verdict = decide_verdict(config, trajectory, products, &gap, &ratio);
    write_summary(dir, config, trajectory, solver_name, products, outcome, gap, ratio);
    return outcome;
}

}  // namespace

RunOutcome run_scenario(const ScenarioConfig& config, const fs::path& out_root) {
    const fs::path dir = resolve_dir(config.output.dir, out_root);
    fs::create_directories(dir);
    write_file(dir / "config.json", dump_config(config));

    const InitialData init = build_initial(config.initial, config.seed);
    const CurveGeometry geom0 = geometry(init.curve);
    const FlowParams params = with_default_stops(config.flow, geom0.length, geom0.area);
    const EvolveOptions options{config.output.snapshot_interval, config.output.record_interval,
                                config.fixed_dt};

    std::string solver = config.solver;
    if (solver == "auto") solver = init.has_profile ? "theta" : "polygon";

    Trajectory trajectory;
    bool handoff = false;
    double handoff_t = nan_value();
    if (solver == "polygon") {
        trajectory = evolve_polygon(init.curve, params, options);
    } else if (solver == "theta") {
        if (init.has_profile) {
            trajectory = evolve_theta(init.profile, init.anchor, params, options);
        } else {
            const ProfileFromPolygon converted =
                profile_from_polygon(init.curve, config.initial.m);
            trajectory = evolve_theta(converted.profile, converted.anchor, params, options);
        }
    } else {
        HybridResult hybrid = evolve_hybrid(init.curve, params, options, config.initial.m);
        trajectory = std::move(hybrid.trajectory);
        handoff = hybrid.handoff;
        handoff_t = hybrid.handoff_t;
        if (handoff) solver = "hybrid";
    }

    write_trajectory_file(dir, trajectory);
    write_snapshot_files(dir, trajectory);
    write_meta_file(dir, trajectory, solver, handoff, handoff_t);

    RunOutcome outcome =
        analyze_trajectory(config, trajectory, dir, solver, handoff, handoff_t);
    if (config.output.svg) emit_figures(dir, trajectory, outcome.errors);
    return outcome;
}

RunOutcome analyze_run(const fs::path& run_dir) {
    const ScenarioConfig config = load_config(run_dir / "config.json");
    const json meta = json::parse(read_file(run_dir / "meta.json"));

    Trajectory trajectory;
    {
        std::ifstream in(run_dir / "trajectory.jsonl");
        if (!in.good()) throw std::runtime_error("cannot read trajectory.jsonl");
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) trajectory.records.push_back(parse_trajectory_record(line));
    }
    if (trajectory.records.empty())
        throw std::runtime_error("trajectory.jsonl has no records");
    {
        std::ifstream in(run_dir / "snapshots" / "index.jsonl");
        if (in.good()) {
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json entry = json::parse(line);
                Snapshot snapshot;
                snapshot.t = entry.at("t").get<double>();
                snapshot.curve = read_curve_json(
                    run_dir / "snapshots" / entry.at("curve").get<std::string>());
                if (!entry.at("profile").is_null())
                    snapshot.profile_k =
                        read_profile_csv(run_dir / "snapshots" /
                                         entry.at("profile").get<std::string>())
                            .k;
                trajectory.snapshots.push_back(std::move(snapshot));
            }
        }
    }

    const DiagnosticsRecord& first = trajectory.records.front();
    trajectory.params = with_default_stops(config.flow, first.length, first.area);
    const std::string solver = meta.at("solver").get<std::string>();
    trajectory.solver = solver == "polygon" ? SolverKind::polygon : SolverKind::theta;
    const std::string termination = meta.at("termination").get<std::string>();
    if (termination == "area_floor") trajectory.termination = Termination::area_floor;
    else if (termination == "k_cap") trajectory.termination = Termination::k_cap;
    else if (termination == "t_cap") trajectory.termination = Termination::t_cap;
    else if (termination == "step_failure") trajectory.termination = Termination::step_failure;
    trajectory.steps = meta.at("steps").get<std::size_t>();
    trajectory.rejected_steps = meta.at("rejected_steps").get<std::size_t>();

    const bool handoff = meta.at("handoff").get<bool>();
    const double handoff_t =
        meta.at("handoff_t").is_null() ? nan_value() : meta.at("handoff_t").get<double>();
    return analyze_trajectory(config, trajectory, run_dir, solver, handoff, handoff_t);
}

void plot_run(const fs::path& run_dir) {
    Trajectory trajectory;
    {
        std::ifstream in(run_dir / "trajectory.jsonl");
        if (!in.good()) throw std::runtime_error("cannot read trajectory.jsonl");
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) trajectory.records.push_back(parse_trajectory_record(line));
    }
    {
        std::ifstream in(run_dir / "snapshots" / "index.jsonl");
        if (in.good()) {
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json entry = json::parse(line);
                Snapshot snapshot;
                snapshot.t = entry.at("t").get<double>();
                snapshot.curve = read_curve_json(
                    run_dir / "snapshots" / entry.at("curve").get<std::string>());
                trajectory.snapshots.push_back(std::move(snapshot));
            }
        }
    }
    std::vector<std::string> errors;
    emit_figures(run_dir, trajectory, errors);
    if (!errors.empty()) throw std::runtime_error(errors.front());

    // Rescaled series chart when the series file exists.
    std::ifstream rescaled_in(run_dir / "rescaled.jsonl");
    if (rescaled_in.good()) {
        std::vector<double> that, lhat, ahat;
        std::string line;
        while (std::getline(rescaled_in, line)) {
            if (line.empty()) continue;
            const RescaledRow row = parse_rescaled_row(line);
            that.push_back(row.that);
            lhat.push_back(row.Lhat);
            ahat.push_back(row.Ahat);
        }
        if (!that.empty())
            write_series_svg(run_dir / "rescaled.svg", that,
                             {{"Lhat", lhat}, {"Ahat", ahat}},
                             "rescaled length and area", "that");
    }
}

SweepConfig parse_sweep_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& error) {
        throw std::invalid_argument(std::string("sweep config: not valid JSON: ") +
                                    error.what());
    }
    if (!root.is_object() || !root.contains("base"))
        throw std::invalid_argument("sweep config: need an object with \"base\"");
    SweepConfig sweep;
    sweep.base = parse_config(root["base"].dump());
    if (root.contains("grid")) {
        const json& grid = root["grid"];
        if (!grid.is_object())
            throw std::invalid_argument("sweep config: \"grid\" must be an object");
        for (const auto& [key, values] : grid.items()) {
            if (key != "sigma1" && key != "sigma2" && key != "radius" && key != "a" &&
                key != "b" && key != "amplitude")
                throw std::invalid_argument("sweep config: unsupported grid axis \"" + key +
                                            "\"");
            if (!values.is_array() || values.empty())
                throw std::invalid_argument("sweep config: axis \"" + key +
                                            "\" must be a non-empty array");
            std::vector<double> axis;
            for (const json& value : values) {
                if (!value.is_number())
                    throw std::invalid_argument("sweep config: axis \"" + key +
                                                "\" entries must be numbers");
                axis.push_back(value.get<double>());
            }
            sweep.axes.emplace_back(key, std::move(axis));
        }
    }
    return sweep;
}

SweepOutcome run_sweep(const SweepConfig& sweep, const fs::path& out_root) {
    const fs::path sweep_dir =
        resolve_dir(sweep.base.output.dir.empty() ? "sweep" : sweep.base.output.dir, out_root);
    fs::create_directories(sweep_dir);

    std::size_t cells = 1;
    for (const auto& [key, values] : sweep.axes) cells *= values.size();

    SweepOutcome outcome;
    outcome.cells = cells;
    outcome.index_path = sweep_dir / "index.jsonl";
    std::ofstream index(outcome.index_path);
    if (!index.good()) throw std::runtime_error("cannot write sweep index");

    for (std::size_t cell = 0; cell < cells; ++cell) {
        ScenarioConfig config = sweep.base;
        std::size_t remainder = cell;
        std::ostringstream cell_params;
        for (std::size_t axis = sweep.axes.size(); axis-- > 0;) {
            const auto& [key, values] = sweep.axes[axis];
            const double value = values[remainder % values.size()];
            remainder /= values.size();
            if (key == "sigma1") config.flow.sigma1 = value;
            else if (key == "sigma2") config.flow.sigma2 = value;
            else if (key == "radius") config.initial.radius = value;
            else if (key == "a") config.initial.a = value;
            else if (key == "b") config.initial.b = value;
            else if (key == "amplitude") config.initial.amplitude = value;
        }
        for (std::size_t axis = 0; axis < sweep.axes.size(); ++axis) {
            const auto& [key, values] = sweep.axes[axis];
            std::size_t divisor = 1;
            for (std::size_t later = axis + 1; later < sweep.axes.size(); ++later)
                divisor *= sweep.axes[later].second.size();
            const double value = values[(cell / divisor) % values.size()];
            cell_params << (axis ? ", " : "") << quoted(key) << ": " << json_number(value);
        }

        char cell_name[32];
        std::snprintf(cell_name, sizeof(cell_name), "cell_%04zu", cell);
        config.output.dir = (sweep_dir / cell_name).string();

        std::string verdict = "error";
        std::string error_entry = "null";
        double t_est = nan_value(), t_max = nan_value();
        std::string termination = "none";
        try {
            const RunOutcome run = run_scenario(config, out_root);
            verdict = run.verdict;
            t_est = run.t_est;
            t_max = run.t_max;
            termination = to_string(run.termination);
        } catch (const std::exception& error) {
            ++outcome.failures;
            error_entry = quoted(error.what());
        }
        index << "{\"cell\": " << cell << ", \"params\": {" << cell_params.str()
              << "}, \"dir\": " << quoted(cell_name) << ", \"verdict\": " << quoted(verdict)
              << ", \"T_est\": " << json_number(t_est)
              << ", \"T_max\": " << json_number(t_max)
              << ", \"termination\": " << quoted(termination)
              << ", \"error\": " << error_entry << "}\n";
    }
    return outcome;
}

}  // namespace curveflow
