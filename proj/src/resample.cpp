#include "curveflow/resample.hpp"

#include <cmath>
#include <stdexcept>

#include "curveflow/spline.hpp"

namespace curveflow {

SampledCurve resample(const SampledCurve& curve, std::size_t n_out) {
    if (n_out < 8)
        throw std::invalid_argument("resample: need at least 8 output points");
    const CurveGeometry geom = geometry(curve);
    const std::size_t n = curve.size();

    // Chordal arclength parameter.
    std::vector<double> s(n);
    s[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + geom.edge_len[i - 1];
    const double total = geom.length;

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = curve[i].x;
        ys[i] = curve[i].y;
    }
    const PeriodicCubicSpline sx(s, xs, total);
    const PeriodicCubicSpline sy(s, ys, total);

    // Dense arclength table of the interpolant, then place the outputs at
    // equal increments of the table's cumulative length.
    const std::size_t dense = std::max<std::size_t>(16 * n_out, 8192);
    std::vector<double> cum(dense + 1, 0.0);
    std::vector<Vec2> pts(dense + 1);
    for (std::size_t j = 0; j <= dense; ++j) {
        const double u = total * static_cast<double>(j) / static_cast<double>(dense);
        pts[j] = {sx(u), sy(u)};
        if (j > 0) cum[j] = cum[j - 1] + (pts[j] - pts[j - 1]).norm();
    }
    const double dense_total = cum[dense];

    SampledCurve out;
    out.points.resize(n_out);
    out.points[0] = curve[0];
    std::size_t seg = 0;
    for (std::size_t j = 1; j < n_out; ++j) {
        const double target = dense_total * static_cast<double>(j) / static_cast<double>(n_out);
        while (seg + 1 < dense && cum[seg + 1] < target) ++seg;
        const double frac = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        const double u = total * (static_cast<double>(seg) + frac) / static_cast<double>(dense);
        out.points[j] = {sx(u), sy(u)};
    }

    // Exact area restoration: uniform dilation about the area centroid.
    const double area_in = geom.area;
    const double area_out = geometry(out).area;
    if (area_out * area_in > 0.0) {
        const double factor = std::sqrt(area_in / area_out);
        out = scaled(out, factor, area_centroid(out));
    }
    return out;
}

}  // namespace curveflow
