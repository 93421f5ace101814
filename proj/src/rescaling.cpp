#include "curveflow/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace curveflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const std::size_t n = x.size();
    if (n < 2) return f;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (std::abs(denom) <= 0.0) return f;
    f.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / static_cast<double>(n);
    f.ok = true;
    return f;
}

double that_of(double t, double T) { return -0.5 * std::log1p(-t / T); }

double phi_of(double t, double T) { return 1.0 / std::sqrt(2.0 * (T - t)); }

}  // namespace

Vec2 extinction_point(const Trajectory& trajectory, double T) {
    const auto& snaps = trajectory.snapshots;
    if (snaps.size() < 2)
        throw std::invalid_argument("extinction_point: need at least 2 snapshots");

    // The centroid path curves over long windows, which biases a global
    // linear extrapolation; the last centroid plus the remaining drift,
    // with the drift velocity fitted over a short tail, stays accurate.
    const std::size_t tail = std::min<std::size_t>(snaps.size(), 5);
    const std::size_t begin = snaps.size() - tail;
    std::vector<double> x, cx, cy;
    for (std::size_t i = begin; i < snaps.size(); ++i) {
        const Vec2 c = area_centroid(snaps[i].curve);
        x.push_back(T - snaps[i].t);
        cx.push_back(c.x);
        cy.push_back(c.y);
    }
    const Vec2 last{cx.back(), cy.back()};
    const double x_last = x.back();
    const LineFit fx = fit_line(x, cx);
    const LineFit fy = fit_line(x, cy);
    if (!fx.ok || !fy.ok) return last;
    return {last.x - fx.slope * x_last, last.y - fy.slope * x_last};
}

RescaledTrajectory rescale(const Trajectory& trajectory, double T, Vec2 origin) {
    if (trajectory.records.empty())
        throw std::invalid_argument("rescale: empty trajectory");
    if (!(T > trajectory.records.back().t))
        throw std::invalid_argument("rescale: T must exceed the last record time");

    RescaledTrajectory out;
    out.T = T;
    out.origin = origin;
    out.params = trajectory.params;

    out.states.reserve(trajectory.records.size());
    for (const DiagnosticsRecord& r : trajectory.records) {
        RescaledState s;
        s.t = r.t;
        s.that = that_of(r.t, T);
        s.phi = phi_of(r.t, T);
        s.Lhat = s.phi * r.length;
        s.Ahat = s.phi * s.phi * r.area;
        s.khat_min = r.k_min / s.phi;
        s.khat_max = r.k_max / s.phi;
        s.kshat_norm2 = r.ks_norm2 / (s.phi * s.phi * s.phi);
        out.states.push_back(s);
    }

    out.snapshots.reserve(trajectory.snapshots.size());
    for (const Snapshot& s : trajectory.snapshots) {
        if (!(T > s.t)) continue;
        RescaledSnapshot rs;
        rs.t = s.t;
        rs.that = that_of(s.t, T);
        rs.phi = phi_of(s.t, T);
        rs.curve = scaled(translated(s.curve, {-origin.x, -origin.y}), rs.phi);
        rs.profile_k.reserve(s.profile_k.size());
        for (double k : s.profile_k) rs.profile_k.push_back(k / rs.phi);
        out.snapshots.push_back(std::move(rs));
    }
    return out;
}

AreaLimitReport rescaled_area_limit(const RescaledTrajectory& rescaled) {
    const double limit = rescaled.params.sigma1 * std::numbers::pi;
    std::vector<double> x, y;
    for (const RescaledState& s : rescaled.states) {
        if (s.that < 2.0) continue;
        const double gap = std::abs(s.Ahat - limit);
        if (gap > 0.0) {
            x.push_back(s.that);
            y.push_back(std::log(gap));
        }
    }
    if (x.size() < 10)
        throw std::invalid_argument("rescaled_area_limit: need at least 10 states with that >= 2");

    AreaLimitReport report;
    report.final_gap = std::abs(rescaled.states.back().Ahat - limit);
    report.final_that = rescaled.states.back().that;
    const LineFit f = fit_line(x, y);
    report.fitted_rate = f.ok ? -f.slope : kNaN;
    return report;
}

MonotonicityReport monotonicity_track(const RescaledTrajectory& rescaled, std::size_t stride) {
    if (stride == 0) stride = 1;
    const double s1 = rescaled.params.sigma1;
    const double s2 = rescaled.params.sigma2;
    const double T = rescaled.T;

    MonotonicityReport report;
    for (std::size_t i = 0; i < rescaled.snapshots.size(); i += stride) {
        const RescaledSnapshot& snap = rescaled.snapshots[i];
        const CurveGeometry geom = geometry(snap.curve);
        MonotonicityRecord rec;
        rec.that = snap.that;
        const double q_shift = std::sqrt(2.0 * T) * s2 / (2.0 * std::sqrt(s1)) *
                               std::exp(-snap.that);
        for (std::size_t j = 0; j < geom.size(); ++j) {
            const Vec2& p = snap.curve[j];
            const double rho = std::exp(-p.norm2() / (2.0 * s1));
            const double q = dot(p, geom.normal[j]) / std::sqrt(s1) +
                             std::sqrt(s1) * geom.curvature[j] + q_shift;
            rec.R += rho * geom.vertex_ds[j];
            rec.intQ2rho += q * q * rho * geom.vertex_ds[j];
        }
        rec.defect = T * s2 * s2 / (2.0 * s1) * std::exp(-2.0 * snap.that) * rec.R;
        report.records.push_back(rec);
    }

    report.nonincreasing_from = kNaN;
    for (std::size_t i = 0; i + 1 < report.records.size(); ++i) {
        const MonotonicityRecord& a = report.records[i];
        const MonotonicityRecord& b = report.records[i + 1];
        const double dthat = b.that - a.that;
        if (!(dthat > 0.0)) continue;
        const double residual = (b.R - a.R) / dthat + 0.5 * (a.intQ2rho + b.intQ2rho) -
                                0.5 * (a.defect + b.defect);
        report.max_residual = std::max(report.max_residual, std::abs(residual));
        report.max_increase = std::max(report.max_increase, b.R - a.R);
    }
    for (std::size_t i = report.records.size(); i-- > 1;) {
        if (report.records[i].R > report.records[i - 1].R + 1e-12) break;
        report.nonincreasing_from = report.records[i - 1].that;
    }
    return report;
}

LimitShapeResidual limit_shape_residual(const SampledCurve& rescaled_curve, double sigma1) {
    const CurveGeometry geom = geometry(rescaled_curve);
    const Vec2 c = area_centroid(rescaled_curve);

    LimitShapeResidual out;
    double l2 = 0.0, radius = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const double res = dot(rescaled_curve[i], geom.normal[i]) + sigma1 * geom.curvature[i];
        out.linf = std::max(out.linf, std::abs(res));
        l2 += res * res * geom.vertex_ds[i];
        radius += (rescaled_curve[i] - c).norm() * geom.vertex_ds[i];
    }
    out.l2 = std::sqrt(l2);
    out.fitted_radius = radius / geom.length;
    return out;
}

KsDecayReport ks_decay_track(const RescaledTrajectory& rescaled, double fit_from, double fit_to) {
    KsDecayReport report;
    std::vector<double> x, y;
    for (const RescaledState& s : rescaled.states) {
        const double value = s.Lhat * s.kshat_norm2;
        report.series.emplace_back(s.that, value);
        if (s.that >= fit_from && s.that <= fit_to && value > 0.0) {
            x.push_back(s.that);
            y.push_back(std::log(value));
        }
    }
    const LineFit f = fit_line(x, y);
    report.fitted_rate = f.ok ? -f.slope : kNaN;

    report.first_convex_that = kNaN;
    if (!rescaled.states.empty()) {
        report.eventually_convex = rescaled.states.back().khat_min > 0.0;
        for (std::size_t i = rescaled.states.size(); i-- > 0;) {
            if (rescaled.states[i].khat_min <= 0.0) break;
            report.first_convex_that = rescaled.states[i].that;
        }
    }
    return report;
}

EntropyReport rescaled_entropy_track(const RescaledTrajectory& rescaled) {
    const double s1 = rescaled.params.sigma1;
    const double s2 = rescaled.params.sigma2;
    const double T = rescaled.T;

    EntropyReport report;
    for (const RescaledSnapshot& snap : rescaled.snapshots) {
        if (snap.profile_k.empty()) {
            ++report.skipped;
            continue;
        }
        const auto& k = snap.profile_k;
        const std::size_t m = k.size();
        const double h = 2.0 * std::numbers::pi / static_cast<double>(m);
        const double decay = 2.0 * std::sqrt(2.0 * T) * std::exp(-snap.that) * s2;

        EntropyRecord rec;
        rec.that = snap.that;
        double f = 0.0, e = 0.0, kmax = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double k_thth =
                (k[(j + 1) % m] - 2.0 * k[j] + k[(j + m - 1) % m]) / (h * h);
            f += -1.0 + s1 * k[j] * (k_thth + k[j]) - decay * k[j];
            e += std::log(k[j]);
            kmax = std::max(kmax, k[j]);
        }
        rec.f = f * h;
        rec.Ehat = e * h / (2.0 * std::numbers::pi);
        rec.ek_max = std::exp(-snap.that) * kmax;
        report.records.push_back(rec);
    }
    if (report.records.empty())
        throw std::invalid_argument("rescaled_entropy_track: no profile snapshots");

    report.that0 = kNaN;
    for (std::size_t i = report.records.size(); i-- > 0;) {
        if (report.records[i].f > 1e-3) break;
        report.that0 = report.records[i].that;
    }

    report.sup_Ehat = -std::numeric_limits<double>::infinity();
    double runmax_at_3 = kNaN;
    double runmax = -std::numeric_limits<double>::infinity();
    std::vector<double> runmax_series(report.records.size());
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const EntropyRecord& rec = report.records[i];
        report.sup_Ehat = std::max(report.sup_Ehat, rec.Ehat);
        runmax = std::max(runmax, rec.Ehat);
        runmax_series[i] = runmax;
        if (rec.that >= 3.0 && std::isnan(runmax_at_3)) runmax_at_3 = runmax;
    }
    report.runmax_increase_after_3 = std::isnan(runmax_at_3) ? kNaN : runmax - runmax_at_3;
    report.stabilization_that = kNaN;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        if (report.records[i].that < 3.0) continue;
        if (runmax - runmax_series[i] <= 1e-3) {
            report.stabilization_that = report.records[i].that;
            break;
        }
    }
    report.final_ek_max = report.records.back().ek_max;
    return report;
}

}  // namespace curveflow
