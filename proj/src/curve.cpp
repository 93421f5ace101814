#include "curveflow/curve.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace curveflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_points(const SampledCurve& curve) {
    if (curve.size() < 8)
        throw std::invalid_argument("SampledCurve: need at least 8 vertices, got " +
                                    std::to_string(curve.size()));
    for (const Vec2& p : curve.points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("SampledCurve: non-finite coordinate");
}
}  // namespace

CurveGeometry geometry(const SampledCurve& curve) {
    validate_points(curve);
    const std::size_t n = curve.size();

    CurveGeometry g;
    g.edge_len.resize(n);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.curvature.resize(n);
    g.vertex_ds.resize(n);
    g.turning.resize(n);

    std::vector<Vec2> edge(n);
    for (std::size_t i = 0; i < n; ++i) {
        edge[i] = curve[(i + 1) % n] - curve[i];
        g.edge_len[i] = edge[i].norm();
        g.length += g.edge_len[i];
    }
    const double degenerate = 1e-14 * g.length;
    for (std::size_t i = 0; i < n; ++i)
        if (g.edge_len[i] <= degenerate)
            throw std::invalid_argument("SampledCurve: degenerate edge at index " +
                                        std::to_string(i));

    double total_turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const Vec2 prev = edge[im] / g.edge_len[im];
        const Vec2 next = edge[i] / g.edge_len[i];
        const double dtheta = std::atan2(cross(prev, next), dot(prev, next));
        g.turning[i] = dtheta;
        total_turning += dtheta;
        g.vertex_ds[i] = 0.5 * (g.edge_len[im] + g.edge_len[i]);
        g.curvature[i] = dtheta / g.vertex_ds[i];
        // Bisector direction is robust even for sharp turns where
        // prev + next nearly cancels.
        g.tangent[i] = rotate(prev, 0.5 * dtheta);
        g.normal[i] = rot90(g.tangent[i]);
    }
    g.winding = static_cast<int>(std::lround(total_turning / kTwoPi));
    g.gauss_bonnet_residual = std::abs(total_turning - kTwoPi * g.winding);

    double shoelace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = curve[i];
        const Vec2& b = curve[(i + 1) % n];
        shoelace += cross(a, b);
    }
    g.area = 0.5 * shoelace;
    return g;
}

double energy(const CurveGeometry& geom, double sigma1, double sigma2) {
    return sigma1 * geom.length + sigma2 * geom.area;
}

double integral_k2(const CurveGeometry& geom) {
    double s = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i)
        s += geom.curvature[i] * geom.curvature[i] * geom.vertex_ds[i];
    return s;
}

double integral_F2(const CurveGeometry& geom, double sigma1, double sigma2) {
    double s = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const double F = sigma1 * geom.curvature[i] + sigma2;
        s += F * F * geom.vertex_ds[i];
    }
    return s;
}

double ks_norm2(const CurveGeometry& geom) {
    const std::size_t n = geom.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dk = geom.curvature[(i + 1) % n] - geom.curvature[i];
        s += dk * dk / geom.edge_len[i];
    }
    return s;
}

double threshold_functional(const CurveGeometry& geom) {
    return std::sqrt(geom.length) * std::sqrt(ks_norm2(geom));
}

Roundness roundness(const CurveGeometry& geom) {
    if (geom.winding != 1)
        throw std::invalid_argument("roundness: winding number must be 1, got " +
                                    std::to_string(geom.winding));
    if (geom.area <= 0.0)
        throw std::invalid_argument("roundness: area must be positive");
    const auto [mn, mx] = std::minmax_element(geom.curvature.begin(), geom.curvature.end());
    if (*mn <= 0.0)
        throw std::invalid_argument("roundness: requires a convex curve (k > 0)");
    Roundness r;
    r.curvature_ratio = *mx / *mn;
    r.isoperimetric_ratio = geom.length * geom.length / (4.0 * std::numbers::pi * geom.area);
    return r;
}

Convexity classify_convexity(const CurveGeometry& geom) {
    const double kmin = *std::min_element(geom.curvature.begin(), geom.curvature.end());
    const double band = 1e-10 / geom.length;
    if (std::abs(kmin) < band) return Convexity::degenerate_convex;
    return kmin > 0.0 ? Convexity::convex : Convexity::nonconvex;
}

Vec2 area_centroid(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    double a2 = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = curve[i];
        const Vec2& q = curve[(i + 1) % n];
        const double w = cross(p, q);
        a2 += w;
        c += (p + q) * w;
    }
    if (std::abs(a2) < 1e-300)
        throw std::invalid_argument("area_centroid: vanishing area");
    return c / (3.0 * a2);
}

double entropy_polygon(const CurveGeometry& geom) {
    double s = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) {
        const double k = geom.curvature[i];
        if (k <= 0.0) return std::nan("");
        // dtheta = k ds
        s += std::log(k) * k * geom.vertex_ds[i];
    }
    return s;
}

double median_curvature_polygon(const CurveGeometry& geom) {
    const std::size_t n = geom.size();
    for (double k : geom.curvature)
        if (k <= 0.0) return std::nan("");

    // Tangent angles are monotone for a convex curve; accumulate the
    // bisector-tangent increments (half the sum of adjacent turnings) so
    // windows of theta-length pi can slide over the doubled sample list.
    std::vector<double> theta(2 * n + 1);
    std::vector<double> kv(2 * n);
    theta[0] = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        theta[i + 1] = theta[i] + 0.5 * (geom.turning[i % n] + geom.turning[(i + 1) % n]);
        kv[i] = geom.curvature[i % n];
    }

    // Monotonic deque holding indices of increasing k over the current
    // window [theta_j, theta_j + pi].
    double best = -std::numeric_limits<double>::infinity();
    std::deque<std::size_t> dq;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        while (hi < 2 * n && theta[hi] <= theta[j] + std::numbers::pi + 1e-9) {
            while (!dq.empty() && kv[dq.back()] >= kv[hi]) dq.pop_back();
            dq.push_back(hi);
            ++hi;
        }
        while (!dq.empty() && dq.front() < j) dq.pop_front();
        if (!dq.empty()) best = std::max(best, kv[dq.front()]);
    }
    return best;
}

SampledCurve translated(const SampledCurve& curve, const Vec2& offset) {
    SampledCurve out = curve;
    for (Vec2& p : out.points) p += offset;
    return out;
}

SampledCurve scaled(const SampledCurve& curve, double factor, const Vec2& about) {
    SampledCurve out = curve;
    for (Vec2& p : out.points) p = about + (p - about) * factor;
    return out;
}

}  // namespace curveflow
