#pragma once

/// @file curve.hpp
/// Closed plane curves as cyclic vertex lists, and the discrete geometry
/// derived from them: tangents, inward normals, turning-angle curvature,
/// length, signed area and winding number.
///
/// Conventions: vertices are ordered, edge i joins vertex i to vertex i+1
/// (indices mod N). For a counter-clockwise convex curve the curvature is
/// positive and the normal nu = rot90(tau) points inward. Curvature at a
/// vertex is the turning angle divided by the average adjacent edge length,
/// which makes the discrete Gauss-Bonnet sum exact:
///   sum_i k_i * ds_i = 2*pi*omega.

#include <cmath>
#include <cstddef>
#include <vector>

namespace curveflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Quarter-turn rotation; maps the unit tangent of a CCW curve to the
/// inward normal.
inline Vec2 rot90(const Vec2& v) { return {-v.y, v.x}; }

inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Closed polygonal curve. At least 8 vertices, consecutive vertices
/// distinct; validated by geometry().
struct SampledCurve {
    std::vector<Vec2> points;

    std::size_t size() const { return points.size(); }
    const Vec2& operator[](std::size_t i) const { return points[i]; }
    Vec2& operator[](std::size_t i) { return points[i]; }
};

/// Per-vertex discrete geometry of a SampledCurve plus the global
/// functionals needed by the flow diagnostics.
struct CurveGeometry {
    std::vector<double> edge_len;   ///< |p_{i+1} - p_i|
    std::vector<Vec2> tangent;      ///< unit tangent at vertex i (edge bisector)
    std::vector<Vec2> normal;       ///< rot90(tangent): inward for CCW curves
    std::vector<double> curvature;  ///< turning angle / average adjacent edge
    std::vector<double> vertex_ds;  ///< (edge_len[i-1] + edge_len[i]) / 2
    std::vector<double> turning;    ///< signed turning angle at vertex i

    double length = 0.0;            ///< sum of edge lengths
    double area = 0.0;              ///< signed shoelace area (CCW positive)
    int winding = 0;                ///< turning number, sum(turning)/2pi
    double gauss_bonnet_residual = 0.0;  ///< |sum k ds - 2 pi omega|

    std::size_t size() const { return curvature.size(); }
};

enum class Convexity { convex, degenerate_convex, nonconvex };

/// Computes the discrete geometry. Throws std::invalid_argument on fewer
/// than 8 vertices, non-finite coordinates, or a degenerate edge (length
/// below 1e-14 times the perimeter).
CurveGeometry geometry(const SampledCurve& curve);

/// E = sigma1 * L + sigma2 * A.
double energy(const CurveGeometry& geom, double sigma1, double sigma2);

/// Integral of k^2 ds with vertex-centered weights.
double integral_k2(const CurveGeometry& geom);

/// Integral of F^2 ds with F = sigma1 * k + sigma2.
double integral_F2(const CurveGeometry& geom, double sigma1, double sigma2);

/// ||k_s||_2^2 = integral of k_s^2 ds, edge-centered differences.
double ks_norm2(const CurveGeometry& geom);

/// sqrt(L) * ||k_s||_2, the quantity compared against the eventual
/// convexity threshold.
double threshold_functional(const CurveGeometry& geom);

/// Curvature-ratio and isoperimetric-ratio pair (k_max/k_min, L^2/(4 pi A)).
/// Requires omega == 1 and A > 0; throws std::invalid_argument otherwise.
struct Roundness {
    double curvature_ratio = 0.0;
    double isoperimetric_ratio = 0.0;
};
Roundness roundness(const CurveGeometry& geom);

/// min k classified against the near-zero band |k| < 1e-10 / L.
Convexity classify_convexity(const CurveGeometry& geom);

/// Area centroid of the polygon (requires |A| > 0).
Vec2 area_centroid(const SampledCurve& curve);

/// Entropy integral log(k) dtheta = sum log(k_i) k_i ds_i for a convex
/// curve; NaN if any k <= 0.
double entropy_polygon(const CurveGeometry& geom);

/// Median curvature k* = sup{ b : k > b on a tangent-angle window of
/// length pi } evaluated on the polygon's (theta_i, k_i) samples.
/// Requires a strictly convex geometry; NaN otherwise.
double median_curvature_polygon(const CurveGeometry& geom);

SampledCurve translated(const SampledCurve& curve, const Vec2& offset);
SampledCurve scaled(const SampledCurve& curve, double factor, const Vec2& about = {0.0, 0.0});

}  // namespace curveflow
