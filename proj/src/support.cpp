#include "curveflow/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace curveflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t default_grid(std::size_t n) {
    std::size_t m = static_cast<std::size_t>(2.0 * std::sqrt(static_cast<double>(n)));
    m -= m % 4;
    return std::clamp<std::size_t>(m, 16, std::max<std::size_t>(16, n / 4));
}
}  // namespace

SupportData support_and_width(const SampledCurve& curve, std::size_t grid_size) {
    const CurveGeometry geom = geometry(curve);
    if (geom.winding != 1 || classify_convexity(geom) == Convexity::nonconvex)
        throw std::invalid_argument("support_and_width: requires a convex curve with omega = 1");

    std::size_t m = grid_size == 0 ? default_grid(curve.size()) : grid_size;
    if (m < 8 || m % 2 != 0)
        throw std::invalid_argument("support_and_width: grid size must be even and >= 8");

    const Vec2 c = area_centroid(curve);
    SupportData out;
    out.h.resize(m);
    out.w.resize(m);
    for (std::size_t l = 0; l < m; ++l) {
        const double t = kTwoPi * static_cast<double>(l) / static_cast<double>(m);
        const Vec2 u{std::cos(t), std::sin(t)};
        double best = -std::numeric_limits<double>::infinity();
        for (const Vec2& p : curve.points) best = std::max(best, dot(p - c, u));
        out.h[l] = best;
    }
    for (std::size_t l = 0; l < m; ++l) out.w[l] = out.h[l] + out.h[(l + m / 2) % m];
    return out;
}

double support_identity_residual(const SampledCurve& curve, const SupportData& support) {
    const CurveGeometry geom = geometry(curve);
    const std::size_t n = geom.size();
    const std::size_t m = support.size();
    const double step = kTwoPi / static_cast<double>(m);

    // Unwrapped outward-normal angles of the vertices and their curvature
    // radii, for periodic linear interpolation of 1/k onto the grid.
    std::vector<double> phi(n + 1), rad(n + 1);
    const Vec2 out0 = geom.normal[0] * -1.0;
    phi[0] = std::atan2(out0.y, out0.x);
    rad[0] = 1.0 / geom.curvature[0];
    for (std::size_t i = 0; i < n; ++i) {
        phi[i + 1] = phi[i] + 0.5 * (geom.turning[i] + geom.turning[(i + 1) % n]);
        rad[i + 1] = 1.0 / geom.curvature[(i + 1) % n];
    }

    auto radius_at = [&](double t) {
        double x = t - kTwoPi * std::floor((t - phi[0]) / kTwoPi);
        auto it = std::upper_bound(phi.begin(), phi.end(), x);
        std::size_t i = (it == phi.begin()) ? 0 : static_cast<std::size_t>(it - phi.begin()) - 1;
        i = std::min(i, n - 1);
        const double frac = (x - phi[i]) / (phi[i + 1] - phi[i]);
        return (1.0 - frac) * rad[i] + frac * rad[i + 1];
    };

    double worst = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        const double t = kTwoPi * static_cast<double>(l) / static_cast<double>(m);
        const double hdd = (support.h[(l + 1) % m] - 2.0 * support.h[l] + support.h[(l + m - 1) % m]) /
                           (step * step);
        worst = std::max(worst, std::abs(support.h[l] + hdd - radius_at(t)));
    }
    return worst;
}

double width_energy_constant(const SampledCurve& curve, const SupportData& support,
                             double sigma1, double sigma2) {
    const CurveGeometry geom = geometry(curve);
    const double E = energy(geom, sigma1, sigma2);
    const double wmin = *std::min_element(support.w.begin(), support.w.end());
    return wmin * std::exp(E);
}

}  // namespace curveflow
