#include "curveflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace curveflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double AngleProfile::theta(std::size_t j) const {
    return kTwoPi * static_cast<double>(j) / static_cast<double>(k.size());
}

double AngleProfile::grid_step() const {
    return kTwoPi / static_cast<double>(k.size());
}

void validate(const AngleProfile& profile) {
    if (profile.size() < 16)
        throw std::invalid_argument("AngleProfile: need at least 16 samples");
    for (double v : profile.k)
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("AngleProfile: curvature samples must be finite and > 0");
}

std::pair<double, double> closure_residual(const AngleProfile& profile) {
    validate(profile);
    const double h = profile.grid_step();
    double cx = 0.0, cy = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        const double t = profile.theta(j);
        cx += std::cos(t) / profile.k[j];
        cy += std::sin(t) / profile.k[j];
    }
    return {cx * h, cy * h};
}

double closure_tolerance(const AngleProfile& profile, double tol_scale) {
    double mean_radius = 0.0;
    for (double v : profile.k) mean_radius += 1.0 / v;
    mean_radius /= static_cast<double>(profile.size());
    return tol_scale * mean_radius;
}

SampledCurve reconstruct_from_curvature(const AngleProfile& profile, Vec2 anchor,
                                        bool check_closure, double tol_scale) {
    validate(profile);
    if (check_closure) {
        const auto [cx, cy] = closure_residual(profile);
        const double tol = closure_tolerance(profile, tol_scale);
        if (std::max(std::abs(cx), std::abs(cy)) > tol) {
            std::ostringstream msg;
            msg << "reconstruct_from_curvature: closure residual (" << cx << ", " << cy
                << ") exceeds tolerance " << tol;
            throw std::invalid_argument(msg.str());
        }
    }
    const std::size_t m = profile.size();
    const double h = profile.grid_step();
    SampledCurve out;
    out.points.resize(m);
    out.points[0] = anchor;
    auto speed = [&](std::size_t j) -> Vec2 {
        const double t = profile.theta(j % m);
        return Vec2{std::cos(t), std::sin(t)} / profile.k[j % m];
    };
    for (std::size_t j = 1; j < m; ++j)
        out.points[j] = out.points[j - 1] + (speed(j - 1) + speed(j)) * (0.5 * h);
    return out;
}

AngleProfile project_closure(const AngleProfile& profile) {
    validate(profile);
    const std::size_t m = profile.size();
    const double h = profile.grid_step();
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = 1.0 / profile.k[j];
    double c1 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = profile.theta(j);
        c1 += w[j] * std::cos(t);
        s1 += w[j] * std::sin(t);
    }
    c1 *= h / std::numbers::pi;
    s1 *= h / std::numbers::pi;
    AngleProfile out;
    out.k.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = profile.theta(j);
        const double wj = w[j] - c1 * std::cos(t) - s1 * std::sin(t);
        if (!(wj > 0.0))
            throw std::invalid_argument("project_closure: projected radius is not positive");
        out.k[j] = 1.0 / wj;
    }
    return out;
}

double median_curvature(const AngleProfile& profile) {
    validate(profile);
    const std::size_t m = profile.size();
    const std::size_t window = m / 2 + 1;  // samples with theta in [theta_j, theta_j + pi]

    double best = -std::numeric_limits<double>::infinity();
    std::deque<std::size_t> dq;
    for (std::size_t i = 0; i < m + window - 1; ++i) {
        const double kv = profile.k[i % m];
        while (!dq.empty() && profile.k[dq.back() % m] >= kv) dq.pop_back();
        dq.push_back(i);
        if (i + 1 >= window) {
            const std::size_t j = i + 1 - window;  // window [j, i]
            while (dq.front() < j) dq.pop_front();
            if (j < m) best = std::max(best, profile.k[dq.front() % m]);
        }
    }
    return best;
}

double entropy_theta(const AngleProfile& profile) {
    validate(profile);
    double s = 0.0;
    for (double v : profile.k) s += std::log(v);
    return s * profile.grid_step();
}

double normalized_entropy(const AngleProfile& profile) {
    return entropy_theta(profile) / kTwoPi;
}

double length_normalized_entropy(const AngleProfile& profile) {
    return entropy_theta(profile) / profile_length(profile);
}

double profile_length(const AngleProfile& profile) {
    validate(profile);
    double s = 0.0;
    for (double v : profile.k) s += 1.0 / v;
    return s * profile.grid_step();
}

ProfileFromPolygon profile_from_polygon(const SampledCurve& curve, std::size_t m) {
    if (m < 16)
        throw std::invalid_argument("profile_from_polygon: need at least 16 samples");
    const CurveGeometry geom = geometry(curve);
    const std::size_t n = geom.size();
    for (double t : geom.turning)
        if (t <= 0.0)
            throw std::invalid_argument(
                "profile_from_polygon: curve must be strictly convex (positive turning)");

    // Unwrapped bisector tangent angles; psi is strictly increasing and
    // spans exactly 2*pi over one loop.
    std::vector<double> psi(n + 1);
    psi[0] = std::atan2(geom.tangent[0].y, geom.tangent[0].x);
    for (std::size_t i = 0; i < n; ++i)
        psi[i + 1] = psi[i] + 0.5 * (geom.turning[i] + geom.turning[(i + 1) % n]);

    auto locate = [&](double target) {
        // Reduce target into [psi[0], psi[0] + 2*pi).
        double t = target - kTwoPi * std::floor((target - psi[0]) / kTwoPi);
        auto it = std::upper_bound(psi.begin(), psi.end(), t);
        std::size_t i = (it == psi.begin()) ? 0 : static_cast<std::size_t>(it - psi.begin()) - 1;
        i = std::min(i, n - 1);
        const double frac = (t - psi[i]) / (psi[i + 1] - psi[i]);
        return std::pair<std::size_t, double>{i, frac};
    };

    ProfileFromPolygon out;
    out.profile.k.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto [i, frac] = locate(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
        const double k0 = geom.curvature[i];
        const double k1 = geom.curvature[(i + 1) % n];
        out.profile.k[j] = (1.0 - frac) * k0 + frac * k1;
    }
    const auto [i0, f0] = locate(0.0);
    const Vec2 p0 = curve[i0];
    const Vec2 p1 = curve[(i0 + 1) % n];
    out.anchor = p0 + (p1 - p0) * f0;
    validate(out.profile);
    return out;
}

}  // namespace curveflow
