#include "curveflow/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "curveflow/kernels.hpp"

namespace curveflow {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double bbox_diameter_bound(const SampledCurve& curve) {
    double best = 0.0;
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::max(best, (curve[i] - curve[j]).norm2());
    return std::sqrt(best);
}

}  // namespace

double smooth_cutoff(double r, double rho) {
    require(rho > 0.0 && std::isfinite(rho), "smooth_cutoff: rho must be positive");
    if (r <= 0.5 * rho) return 1.0;
    if (r >= rho) return 0.0;
    const double u = (r - 0.5 * rho) / (0.5 * rho);
    const double w = 1.0 - u * u;
    return w * w;
}

ConcentrationField ConcentrationField::from_curve(const SampledCurve& curve) {
    const CurveGeometry geom = geometry(curve);
    ConcentrationField field;
    field.points = curve.points;
    field.k2.resize(geom.size());
    for (std::size_t i = 0; i < geom.size(); ++i)
        field.k2[i] = geom.curvature[i] * geom.curvature[i];
    return field;
}

double sharp_concentration(const ConcentrationField& field, Vec2 x, double rho) {
    const std::size_t n = field.points.size();
    const double rho2 = rho * rho;
    double length_in = 0.0;
    double k2_in = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = field.points[i];
        const Vec2& b = field.points[(i + 1) % n];
        const Vec2 e = b - a;
        const double ee = e.norm2();
        if (ee <= 0.0) continue;
        const Vec2 d = a - x;
        // |d + u e|^2 = rho^2 as a quadratic in the edge parameter u.
        const double half_b = dot(d, e);
        const double c = d.norm2() - rho2;
        const double disc = half_b * half_b - ee * c;
        if (disc <= 0.0) continue;
        const double root = std::sqrt(disc);
        const double u0 = std::max(0.0, (-half_b - root) / ee);
        const double u1 = std::min(1.0, (-half_b + root) / ee);
        if (u1 <= u0) continue;
        const double elen = std::sqrt(ee);
        length_in += (u1 - u0) * elen;
        const double first = std::max(0.0, std::min(u1, 0.5) - u0);
        const double second = std::max(0.0, u1 - std::max(u0, 0.5));
        k2_in += elen * (first * field.k2[i] + second * field.k2[(i + 1) % n]);
    }
    return length_in * k2_in;
}

double local_concentration(const SampledCurve& curve, Vec2 x, double rho,
                           CutoffProfile profile) {
    require(rho > 0.0 && std::isfinite(rho), "local_concentration: rho must be positive");
    if (profile == CutoffProfile::sharp)
        return sharp_concentration(ConcentrationField::from_curve(curve), x, rho);

    const CurveGeometry geom = geometry(curve);
    double weighted_length = 0.0;
    double weighted_k2 = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const double phi = smooth_cutoff((curve[i] - x).norm(), rho);
        const double phi4 = phi * phi * phi * phi;
        const double w = phi4 * geom.vertex_ds[i];
        weighted_length += w;
        weighted_k2 += w * geom.curvature[i] * geom.curvature[i];
    }
    return weighted_length * weighted_k2;
}

std::vector<Vec2> concentration_candidates(const SampledCurve& curve, double rho) {
    require(rho > 0.0 && std::isfinite(rho), "concentration_candidates: rho must be positive");
    std::vector<Vec2> centers = curve.points;
    double xmin = centers[0].x, xmax = centers[0].x;
    double ymin = centers[0].y, ymax = centers[0].y;
    for (const Vec2& p : centers) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double pitch = 0.25 * rho;
    const auto steps = [pitch](double lo, double hi) {
        return static_cast<std::size_t>(std::floor((hi - lo) / pitch)) + 1;
    };
    const std::size_t nx = steps(xmin, xmax);
    const std::size_t ny = steps(ymin, ymax);
    constexpr std::size_t kCandidateCap = std::size_t{1} << 22;
    if (nx > kCandidateCap / std::max<std::size_t>(ny, 1))
        throw std::invalid_argument(
            "concentration_candidates: pitch rho/4 grid exceeds the candidate cap; "
            "rho is too small relative to the bounding box");
    centers.reserve(centers.size() + nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix)
            centers.push_back({xmin + pitch * static_cast<double>(ix),
                               ymin + pitch * static_cast<double>(iy)});
    return centers;
}

SupConcentration sup_concentration(const SampledCurve& curve, double rho) {
    const std::vector<Vec2> centers = concentration_candidates(curve, rho);
    const ScanBest best = scan_concentration_parallel(curve, centers, rho);
    return {best.value, centers[best.index]};
}

namespace {

CriticalRadius critical_radius_impl(const SampledCurve& curve, double eps1,
                                    double tolerance, bool vertex_only) {
    require(eps1 > 0.0 && std::isfinite(eps1), "critical_radius: eps1 must be positive");
    require(tolerance > 0.0, "critical_radius: tolerance must be positive");
    const CurveGeometry geom = geometry(curve);
    const double full = geom.length * integral_k2(geom);
    const double diameter = bbox_diameter_bound(curve);
    if (full <= eps1) return {2.0 * diameter, true};

    const auto eps_at = [&](double rho) {
        if (vertex_only) {
            const ScanBest best = scan_concentration_parallel(curve, curve.points, rho);
            return best.value;
        }
        return sup_concentration(curve, rho).eps;
    };

    double lo = 1e-6 * geom.length;
    double hi = 2.0 * diameter;
    // At the lower endpoint a rho/4 grid would be astronomically fine;
    // probe the vertices only. A violation there means r < lo anyway.
    if (scan_concentration_parallel(curve, curve.points, lo).value > eps1)
        return {lo, false};
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (eps_at(mid) <= eps1)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, false};
}

}  // namespace

CriticalRadius critical_radius(const SampledCurve& curve, double eps1, double tolerance) {
    return critical_radius_impl(curve, eps1, tolerance, false);
}

CriticalRadius critical_radius_vertex_only(const SampledCurve& curve, double eps1,
                                           double tolerance) {
    return critical_radius_impl(curve, eps1, tolerance, true);
}

LifespanReport lifespan_monitor(const Trajectory& trajectory, double rho, double eps1) {
    require(rho > 0.0 && std::isfinite(rho), "lifespan_monitor: rho must be positive");
    require(eps1 > 0.0 && std::isfinite(eps1), "lifespan_monitor: eps1 must be positive");
    require(!trajectory.snapshots.empty(), "lifespan_monitor: trajectory has no snapshots");

    LifespanReport report;
    report.eps0 = sup_concentration(trajectory.snapshots.front().curve, rho).eps;
    report.hypothesis_ok = report.eps0 <= eps1;

    const double growth_scale = (1.0 + 1.0 / (rho * rho)) * eps1;
    const double t0 = trajectory.snapshots.front().t;
    for (const Snapshot& snap : trajectory.snapshots) {
        LifespanRow row;
        row.t = snap.t;
        row.eps_half = sup_concentration(snap.curve, 0.5 * rho).eps;
        row.convex = classify_convexity(geometry(snap.curve)) != Convexity::nonconvex;
        if (row.convex) ++report.convex_excluded;
        report.rows.push_back(row);
    }
    double c0 = 0.0;
    for (const LifespanRow& row : report.rows) {
        if (row.convex || row.t <= t0) continue;
        const double excess = row.eps_half - report.eps0;
        if (excess > 0.0) c0 = std::max(c0, excess / ((row.t - t0) * growth_scale));
    }
    report.c0_star = c0;
    report.implied_bound =
        c0 > 0.0 ? rho * rho / c0 : std::numeric_limits<double>::infinity();
    return report;
}

CutoffMargins cutoff_inequality_monitor(const SampledCurve& curve, Vec2 x, double rho) {
    require(rho > 0.0 && std::isfinite(rho), "cutoff_inequality_monitor: rho must be positive");
    const CurveGeometry geom = geometry(curve);
    const std::size_t n = geom.size();

    double lphi4 = 0.0;
    double k4phi4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = smooth_cutoff((curve[i] - x).norm(), rho);
        const double phi4 = phi * phi * phi * phi;
        const double k2 = geom.curvature[i] * geom.curvature[i];
        lphi4 += phi4 * geom.vertex_ds[i];
        k4phi4 += phi4 * k2 * k2 * geom.vertex_ds[i];
    }
    double ks2phi4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double kd = (geom.curvature[j] - geom.curvature[i]) / geom.edge_len[i];
        const Vec2 mid = (curve[i] + curve[j]) * 0.5;
        const double phi = smooth_cutoff((mid - x).norm(), rho);
        const double phi4 = phi * phi * phi * phi;
        ks2phi4 += kd * kd * phi4 * geom.edge_len[i];
    }

    CutoffMargins margins;
    margins.lhs = lphi4 * k4phi4;
    margins.ks_term = 0.5 * lphi4 * ks2phi4;
    margins.eps = sup_concentration(curve, rho).eps;
    margins.smallness_ok = margins.eps <= 1.0 / 16.0;
    const double excess = margins.lhs - margins.ks_term;
    margins.empirical_c =
        (excess > 0.0 && margins.eps > 0.0) ? excess * rho * rho / (margins.eps * margins.eps)
                                            : 0.0;
    return margins;
}

std::size_t self_intersection_count(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    std::size_t crossings = 0;
    const auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return cross(b - a, c - a);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip the shared-vertex pairs (adjacent edges, including the
            // wrap-around pair 0 and n-1).
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Vec2& a = curve[i];
            const Vec2& b = curve[(i + 1) % n];
            const Vec2& c = curve[j];
            const Vec2& d = curve[(j + 1) % n];
            const double o1 = orient(a, b, c);
            const double o2 = orient(a, b, d);
            const double o3 = orient(c, d, a);
            const double o4 = orient(c, d, b);
            if (((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
                ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)))
                ++crossings;
        }
    }
    return crossings;
}

BlowupResult blowup_rescale(const Trajectory& trajectory, double t, double eps1,
                            double v_max, std::size_t frame_count) {
    require(trajectory.snapshots.size() >= 2, "blowup_rescale: need at least two snapshots");
    require(v_max > 0.0 && std::isfinite(v_max), "blowup_rescale: v_max must be positive");
    require(frame_count >= 2, "blowup_rescale: need at least two frames");

    const std::vector<Snapshot>& snaps = trajectory.snapshots;
    std::size_t base = 0;
    for (std::size_t j = 1; j < snaps.size(); ++j)
        if (std::abs(snaps[j].t - t) < std::abs(snaps[base].t - t)) base = j;

    BlowupResult result;
    const CriticalRadius cr = critical_radius(snaps[base].curve, eps1);
    result.r_t = cr.r;
    result.x_t = sup_concentration(snaps[base].curve, cr.r).xstar;
    result.sigma2_rt = trajectory.params.sigma2 * cr.r;

    const double t0 = snaps[base].t;
    const double r2 = cr.r * cr.r;
    const double dv = v_max / static_cast<double>(frame_count - 1);
    std::size_t prev_pick = snaps.size();
    for (std::size_t j = 0; j < frame_count; ++j) {
        const double target = t0 + static_cast<double>(j) * dv * r2;
        std::size_t pick = base;
        for (std::size_t s = base; s < snaps.size(); ++s)
            if (std::abs(snaps[s].t - target) < std::abs(snaps[pick].t - target)) pick = s;
        const bool duplicate = j > 0 && pick == prev_pick;
        if (duplicate || std::abs(snaps[pick].t - target) > 0.5 * dv * r2)
            throw std::invalid_argument(
                "blowup_rescale: snapshot density insufficient for the requested v grid");
        prev_pick = pick;
        BlowupFrame frame;
        frame.v = (snaps[pick].t - t0) / r2;
        frame.curve = scaled(translated(snaps[pick].curve, {-result.x_t.x, -result.x_t.y}),
                             1.0 / cr.r);
        frame.self_intersections = self_intersection_count(frame.curve);
        result.frames.push_back(std::move(frame));
    }

    double residual = 0.0;
    for (std::size_t j = 0; j + 1 < result.frames.size(); ++j) {
        const BlowupFrame& f0 = result.frames[j];
        const BlowupFrame& f1 = result.frames[j + 1];
        if (f0.curve.size() != f1.curve.size()) continue;
        const double dvj = f1.v - f0.v;
        if (dvj <= 0.0) continue;
        const CurveGeometry geom = geometry(f0.curve);
        for (std::size_t i = 0; i < f0.curve.size(); ++i) {
            const double normal_speed =
                dot(f1.curve[i] - f0.curve[i], geom.normal[i]) / dvj;
            const double expected =
                trajectory.params.sigma1 * geom.curvature[i] + result.sigma2_rt;
            residual = std::max(residual, std::abs(normal_speed - expected));
        }
    }
    result.velocity_residual = residual;
    return result;
}

}  // namespace curveflow
