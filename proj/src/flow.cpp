#include "curveflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "curveflow/resample.hpp"
#include "curveflow/tridiag.hpp"

namespace curveflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxHalvings = 8;
constexpr std::size_t kMaxSteps = 20'000'000;

double min_edge(const CurveGeometry& geom) {
    return *std::min_element(geom.edge_len.begin(), geom.edge_len.end());
}

double max_speed(const CurveGeometry& geom, const FlowParams& p) {
    double f = 0.0;
    for (double k : geom.curvature) f = std::max(f, std::abs(p.sigma1 * k + p.sigma2));
    return f;
}

double max_abs_curvature(const std::vector<double>& k) {
    double m = 0.0;
    for (double v : k) m = std::max(m, std::abs(v));
    return m;
}

SampledCurve euler_step(const SampledCurve& curve, const CurveGeometry& geom,
                        const FlowParams& p, double dt) {
    SampledCurve out;
    out.points.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double f = p.sigma1 * geom.curvature[i] + p.sigma2;
        out.points[i] = curve[i] + geom.normal[i] * (f * dt);
    }
    return out;
}

DiagnosticsRecord polygon_record(double t, const CurveGeometry& geom, const FlowParams& p,
                                 bool resampled) {
    DiagnosticsRecord r;
    r.t = t;
    r.length = geom.length;
    r.area = geom.area;
    r.winding = geom.winding;
    r.energy = energy(geom, p.sigma1, p.sigma2);
    const auto [kmin_it, kmax_it] =
        std::minmax_element(geom.curvature.begin(), geom.curvature.end());
    r.k_min = *kmin_it;
    r.k_max = *kmax_it;
    r.int_k2 = integral_k2(geom);
    r.int_F2 = integral_F2(geom, p.sigma1, p.sigma2);
    r.ks_norm2 = ks_norm2(geom);
    r.entropy = entropy_polygon(geom);
    r.k_star = median_curvature_polygon(geom);
    if (geom.winding == 1 && geom.area > 0.0) {
        r.isoperimetric_ratio = geom.length * geom.length / (4.0 * std::numbers::pi * geom.area);
        r.curvature_ratio = r.k_min > 0.0 ? r.k_max / r.k_min : kNaN;
    } else {
        r.isoperimetric_ratio = kNaN;
        r.curvature_ratio = kNaN;
    }
    r.resampled = resampled;
    return r;
}

/// Derivative at the middle node of three samples on a nonuniform grid.
double central_derivative(double tm, double t0, double tp, double fm, double f0, double fp) {
    const double h1 = t0 - tm;
    const double h2 = tp - t0;
    return (h1 * h1 * fp - h2 * h2 * fm + (h2 * h2 - h1 * h1) * f0) / (h1 * h2 * (h1 + h2));
}

double relative(double lhs, double rhs) {
    const double denom = std::max(std::abs(rhs), 1e-300);
    return std::abs(lhs - rhs) / denom;
}

}  // namespace

void validate(const FlowParams& params) {
    if (!(std::isfinite(params.sigma1) && params.sigma1 > 0.0))
        throw std::invalid_argument("FlowParams: sigma1 must be finite and > 0");
    if (!(std::isfinite(params.sigma2) && params.sigma2 >= 0.0))
        throw std::invalid_argument("FlowParams: sigma2 must be finite and >= 0");
    if (!(params.cfl_factor > 0.0 && params.cfl_factor <= 1.0))
        throw std::invalid_argument("FlowParams: cfl_factor must be in (0, 1]");
}

FlowParams with_default_stops(FlowParams params, double initial_length, double initial_area) {
    if (params.area_floor <= 0.0) params.area_floor = 1e-3 * std::abs(initial_area);
    if (params.k_cap <= 0.0) params.k_cap = 1e4 / initial_length;
    return params;
}

const char* to_string(Termination reason) {
    switch (reason) {
        case Termination::running: return "running";
        case Termination::area_floor: return "area_floor";
        case Termination::k_cap: return "k_cap";
        case Termination::t_cap: return "t_cap";
        case Termination::step_failure: return "step_failure";
    }
    return "unknown";
}

double polygon_time_step(const CurveGeometry& geom, const FlowParams& params) {
    const double ds = min_edge(geom);
    double dt = params.cfl_factor * ds * ds / (2.0 * params.sigma1);
    const double f = max_speed(geom, params);
    if (f > 0.0) dt = std::min(dt, 0.2 * ds / f);
    return dt;
}

SampledCurve step_polygon(const SampledCurve& curve, const FlowParams& params, double dt) {
    validate(params);
    return euler_step(curve, geometry(curve), params, dt);
}

double theta_time_step(const AngleProfile& profile, const FlowParams& params) {
    const double kmax = *std::max_element(profile.k.begin(), profile.k.end());
    return params.cfl_factor / (4.0 * (params.sigma1 * kmax * kmax + params.sigma2 * kmax));
}

AngleProfile step_theta(const AngleProfile& profile, const FlowParams& params, double dt) {
    validate(params);
    validate(profile);
    const std::size_t m = profile.size();
    const double h = profile.grid_step();
    std::vector<double> sub(m), diag(m), super(m), rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double k = profile.k[j];
        const double r = dt * params.sigma1 * k * k / (h * h);
        sub[j] = -r;
        diag[j] = 1.0 + 2.0 * r;
        super[j] = -r;
        rhs[j] = k + dt * (params.sigma1 * k * k * k + params.sigma2 * k * k);
    }
    AngleProfile out;
    out.k = solve_cyclic_tridiagonal(sub, diag, super, rhs);
    for (double v : out.k)
        if (!std::isfinite(v) || v <= 0.0)
            throw std::runtime_error("step_theta: update produced non-positive curvature");
    return out;
}

Vec2 anchor_velocity(const AngleProfile& profile, const FlowParams& params) {
    const std::size_t m = profile.size();
    const double h = profile.grid_step();
    const double k_theta = (profile.k[1] - profile.k[m - 1]) / (2.0 * h);
    return {-params.sigma1 * k_theta, params.sigma1 * profile.k[0] + params.sigma2};
}

Trajectory evolve_polygon(const SampledCurve& initial, const FlowParams& params,
                          const EvolveOptions& options) {
    validate(params);
    CurveGeometry geom = geometry(initial);
    const FlowParams p = with_default_stops(params, geom.length, geom.area);
    const std::size_t n = initial.size();

    Trajectory traj;
    traj.params = p;
    traj.solver = SolverKind::polygon;

    SampledCurve curve = initial;
    double t = 0.0;
    bool resampled_pending = false;

    traj.records.push_back(polygon_record(t, geom, p, false));
    traj.snapshots.push_back({t, curve, {}});

    while (true) {
        if (geom.area <= p.area_floor) { traj.termination = Termination::area_floor; break; }
        if (max_abs_curvature(geom.curvature) >= p.k_cap) { traj.termination = Termination::k_cap; break; }
        if (t >= p.t_cap) { traj.termination = Termination::t_cap; break; }
        if (traj.steps >= kMaxSteps) { traj.termination = Termination::step_failure; break; }

        double dt = options.fixed_dt > 0.0 ? options.fixed_dt : polygon_time_step(geom, p);
        if (std::isfinite(p.t_cap)) dt = std::min(dt, p.t_cap - t);

        bool accepted = false;
        SampledCurve candidate;
        CurveGeometry candidate_geom;
        for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
            candidate = euler_step(curve, geom, p, dt);
            try {
                candidate_geom = geometry(candidate);
                accepted = true;
                break;
            } catch (const std::invalid_argument&) {
                dt *= 0.5;
                ++traj.rejected_steps;
            }
        }
        if (!accepted) { traj.termination = Termination::step_failure; break; }

        curve = std::move(candidate);
        geom = std::move(candidate_geom);
        t += dt;
        ++traj.steps;

        if (p.resample_interval > 0 && traj.steps % p.resample_interval == 0) {
            try {
                curve = resample(curve, n);
                geom = geometry(curve);
                resampled_pending = true;
            } catch (const std::exception&) {
                traj.termination = Termination::step_failure;
                break;
            }
        }

        if (options.record_interval > 0 && traj.steps % options.record_interval == 0) {
            traj.records.push_back(polygon_record(t, geom, p, resampled_pending));
            resampled_pending = false;
        }
        if (options.snapshot_interval > 0 && traj.steps % options.snapshot_interval == 0)
            traj.snapshots.push_back({t, curve, {}});
    }

    if (traj.records.back().t < t)
        traj.records.push_back(polygon_record(t, geom, p, resampled_pending));
    if (traj.snapshots.back().t < t) traj.snapshots.push_back({t, curve, {}});
    return traj;
}

namespace {

struct ThetaView {
    AngleProfile projected;
    SampledCurve curve;
    CurveGeometry geom;
};

ThetaView theta_view(const AngleProfile& raw, const Vec2& anchor) {
    ThetaView v;
    v.projected = project_closure(raw);
    v.curve = reconstruct_from_curvature(v.projected, anchor, false);
    v.geom = geometry(v.curve);
    return v;
}

DiagnosticsRecord theta_record(double t, const AngleProfile& raw, const ThetaView& view,
                               const FlowParams& p) {
    const std::size_t m = raw.size();
    const double h = raw.grid_step();
    DiagnosticsRecord r;
    r.t = t;
    r.length = profile_length(raw);
    r.area = view.geom.area;
    r.winding = view.geom.winding;
    r.energy = p.sigma1 * r.length + p.sigma2 * r.area;
    const auto [kmin_it, kmax_it] = std::minmax_element(raw.k.begin(), raw.k.end());
    r.k_min = *kmin_it;
    r.k_max = *kmax_it;
    double ik2 = 0.0, if2 = 0.0, iks = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double k = raw.k[j];
        const double f = p.sigma1 * k + p.sigma2;
        const double k_theta = (raw.k[(j + 1) % m] - raw.k[(j + m - 1) % m]) / (2.0 * h);
        ik2 += k;          // k^2 ds = k dtheta
        if2 += f * f / k;  // F^2 ds = F^2 / k dtheta
        iks += k_theta * k_theta * k;  // k_s^2 ds = k_theta^2 k dtheta
    }
    r.int_k2 = ik2 * h;
    r.int_F2 = if2 * h;
    r.ks_norm2 = iks * h;
    r.entropy = entropy_theta(raw);
    r.k_star = median_curvature(raw);
    r.curvature_ratio = r.k_max / r.k_min;
    r.isoperimetric_ratio = r.length * r.length / (4.0 * std::numbers::pi * r.area);
    r.resampled = false;
    return r;
}

}  // namespace

Trajectory evolve_theta(const AngleProfile& initial, Vec2 anchor, const FlowParams& params,
                        const EvolveOptions& options) {
    validate(params);
    validate(initial);

    AngleProfile profile = initial;
    Vec2 p0 = anchor;
    double t = 0.0;

    ThetaView view = theta_view(profile, p0);
    const FlowParams p = with_default_stops(params, profile_length(profile), view.geom.area);

    Trajectory traj;
    traj.params = p;
    traj.solver = SolverKind::theta;
    traj.records.push_back(theta_record(t, profile, view, p));
    traj.snapshots.push_back({t, view.curve, view.projected.k});

    while (true) {
        const double kmax = *std::max_element(profile.k.begin(), profile.k.end());
        if (view.geom.area <= p.area_floor) { traj.termination = Termination::area_floor; break; }
        if (kmax >= p.k_cap) { traj.termination = Termination::k_cap; break; }
        if (t >= p.t_cap) { traj.termination = Termination::t_cap; break; }
        if (traj.steps >= kMaxSteps) { traj.termination = Termination::step_failure; break; }

        double dt = options.fixed_dt > 0.0 ? options.fixed_dt : theta_time_step(profile, p);
        if (std::isfinite(p.t_cap)) dt = std::min(dt, p.t_cap - t);

        bool accepted = false;
        AngleProfile next;
        for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
            try {
                next = step_theta(profile, p, dt);
                accepted = true;
                break;
            } catch (const std::exception&) {
                dt *= 0.5;
                ++traj.rejected_steps;
            }
        }
        if (!accepted) { traj.termination = Termination::step_failure; break; }

        const Vec2 v_old = anchor_velocity(profile, p);
        const Vec2 v_new = anchor_velocity(next, p);
        p0 += (v_old + v_new) * (0.5 * dt);
        profile = std::move(next);
        t += dt;
        ++traj.steps;

        view = theta_view(profile, p0);
        if (options.record_interval > 0 && traj.steps % options.record_interval == 0)
            traj.records.push_back(theta_record(t, profile, view, p));
        if (options.snapshot_interval > 0 && traj.steps % options.snapshot_interval == 0)
            traj.snapshots.push_back({t, view.curve, view.projected.k});
    }

    if (traj.records.back().t < t) traj.records.push_back(theta_record(t, profile, view, p));
    if (traj.snapshots.back().t < t) traj.snapshots.push_back({t, view.curve, view.projected.k});
    return traj;
}

double IdentityReport::max_residual() const {
    return std::max({max_length_residual, max_area_residual, max_energy_residual});
}

IdentityReport verify_identities(const Trajectory& trajectory) {
    const auto& rec = trajectory.records;
    if (rec.size() < 3)
        throw std::invalid_argument("verify_identities: need at least 3 records");
    const FlowParams& p = trajectory.params;

    IdentityReport report;
    for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
        if (rec[i].resampled || rec[i + 1].resampled) {
            ++report.skipped;
            continue;
        }
        const double tm = rec[i - 1].t, t0 = rec[i].t, tp = rec[i + 1].t;
        const double omega = rec[i].winding;

        const double dL = central_derivative(tm, t0, tp, rec[i - 1].length, rec[i].length,
                                             rec[i + 1].length);
        const double rhsL = -p.sigma1 * rec[i].int_k2 - kTwoPi * omega * p.sigma2;
        report.max_length_residual = std::max(report.max_length_residual, relative(dL, rhsL));

        const double dA =
            central_derivative(tm, t0, tp, rec[i - 1].area, rec[i].area, rec[i + 1].area);
        const double rhsA = -kTwoPi * omega * p.sigma1 - p.sigma2 * rec[i].length;
        report.max_area_residual = std::max(report.max_area_residual, relative(dA, rhsA));

        const double dE =
            central_derivative(tm, t0, tp, rec[i - 1].energy, rec[i].energy, rec[i + 1].energy);
        const double rhsE = -rec[i].int_F2;
        report.max_energy_residual = std::max(report.max_energy_residual, relative(dE, rhsE));

        ++report.windows;
    }
    return report;
}

double maximal_time_upper_bound(double initial_length, double initial_area,
                                const FlowParams& params) {
    if (!(initial_length > 0.0) || !(initial_area > 0.0))
        throw std::invalid_argument("maximal_time_upper_bound: need L0 > 0 and A0 > 0");
    const double from_area = initial_area / (kTwoPi * params.sigma1);
    if (params.sigma2 <= 0.0) return from_area;
    return std::min(initial_length / (kTwoPi * params.sigma2), from_area);
}

ExtinctionEstimate extinction_estimate(const Trajectory& trajectory) {
    ExtinctionEstimate est;
    if (trajectory.termination != Termination::area_floor) return est;
    const auto& rec = trajectory.records;
    if (rec.size() < 2) return est;
    const FlowParams& p = trajectory.params;

    auto anchored = [&](const DiagnosticsRecord& r) {
        return r.t + r.area / (kTwoPi * r.winding * p.sigma1 + p.sigma2 * r.length);
    };

    est.available = true;
    est.naive = anchored(rec.back());

    const std::size_t tail = std::max<std::size_t>(3, rec.size() / 10);
    const std::size_t begin = rec.size() > tail ? rec.size() - tail : 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = begin; i < rec.size(); ++i) {
        const double x = std::pow(std::abs(rec[i].area), 1.5);
        const double y = anchored(rec[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    if (count >= 2 && std::abs(denom) > 0.0) {
        const double slope = (count * sxy - sx * sy) / denom;
        est.refined = (sy - slope * sx) / count;
    } else {
        est.refined = est.naive;
    }
    return est;
}

double nonconvex_threshold(const FlowParams& params, double t_max, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("nonconvex_threshold: alpha must be in (0, 2)");
    if (!(t_max > 0.0))
        throw std::invalid_argument("nonconvex_threshold: T_max must be > 0");
    const double s1 = params.sigma1, s2 = params.sigma2;
    return (std::sqrt(25.0 * s2 * s2 + 14.0 * s1 * (2.0 - alpha) / t_max) - 5.0 * s2) /
           (14.0 * s1);
}

double nonconvex_threshold_squared(const FlowParams& params, double t_max, double alpha) {
    const double b = nonconvex_threshold(params, t_max, alpha);
    return b * b;
}

bool nonconvex_threshold_holds(const CurveGeometry& geom, const FlowParams& params,
                               double t_max, double alpha) {
    return threshold_functional(geom) <= nonconvex_threshold(params, t_max, alpha);
}

SpeedBoundsReport speed_bounds(const Trajectory& trajectory, const FlowParams& params) {
    std::vector<const Snapshot*> profiles;
    for (const Snapshot& s : trajectory.snapshots)
        if (!s.profile_k.empty()) profiles.push_back(&s);
    if (profiles.empty())
        throw std::invalid_argument("speed_bounds: trajectory has no profile snapshots");

    SpeedBoundsReport report;
    report.min_gradient_margin = std::numeric_limits<double>::infinity();
    report.min_total_margin = std::numeric_limits<double>::infinity();
    report.min_window_margin = std::numeric_limits<double>::infinity();

    const auto& k0 = profiles.front()->profile_k;
    {
        const std::size_t m = k0.size();
        const double h = kTwoPi / static_cast<double>(m);
        double m2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double f = params.sigma1 * k0[j] + params.sigma2;
            const double ft =
                params.sigma1 * (k0[(j + 1) % m] - k0[(j + m - 1) % m]) / (2.0 * h);
            m2 = std::max(m2, f * f + ft * ft);
        }
        report.M = std::sqrt(m2);
    }
    report.M1 = std::max(kTwoPi * report.M, kTwoPi + 1.0 / kTwoPi);

    for (const Snapshot* s : profiles) {
        const auto& k = s->profile_k;
        const std::size_t m = k.size();
        const double h = kTwoPi / static_cast<double>(m);
        double f_max = -std::numeric_limits<double>::infinity();
        double ft_max = 0.0, int_f = 0.0;
        std::size_t argmax = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double f = params.sigma1 * k[j] + params.sigma2;
            const double ft =
                params.sigma1 * (k[(j + 1) % m] - k[(j + m - 1) % m]) / (2.0 * h);
            if (f > f_max) { f_max = f; argmax = j; }
            ft_max = std::max(ft_max, std::abs(ft));
            int_f += std::abs(f);
        }
        int_f *= h;

        report.min_gradient_margin =
            std::min(report.min_gradient_margin, report.M + int_f - ft_max);
        report.min_total_margin =
            std::min(report.min_total_margin, report.M1 * (1.0 + int_f) - f_max);

        const double theta_star = h * static_cast<double>(argmax);
        for (std::size_t j = 0; j < m; ++j) {
            double d = std::abs(h * static_cast<double>(j) - theta_star);
            d = std::min(d, kTwoPi - d);
            if (d > 1.0 / (4.0 * std::numbers::pi)) continue;
            const double f = params.sigma1 * k[j] + params.sigma2;
            report.min_window_margin =
                std::min(report.min_window_margin,
                         2.0 * f + report.M / kTwoPi - f_max);
        }
        ++report.profiles_checked;
    }
    return report;
}

}  // namespace curveflow
