#pragma once

/// @file presets.hpp
/// Initial-curve families used by the scenarios and the tests: circles,
/// ellipses (polygon and exact tangent-angle profile), cosine-perturbed
/// flowers, seeded random wobbles, and convex ovals defined through
/// their support function.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/profile.hpp"

namespace curveflow {

/// Regular n-gon inscribed in the circle of the given radius, CCW,
/// first vertex at angle 0 from the center.
SampledCurve circle_curve(double radius, std::size_t n, Vec2 center = {0.0, 0.0});

/// Ellipse x = a cos(u), y = b sin(u) sampled uniformly in u, CCW.
SampledCurve ellipse_curve(double a, double b, std::size_t n);

/// Polar flower r(u) = radius * (1 + amplitude * cos(petals * u)),
/// sampled uniformly in u. Small amplitudes stay convex; large ones
/// develop petal-scale concavities.
SampledCurve flower_curve(double radius, double amplitude, int petals, std::size_t n);

/// Seeded random star-shaped perturbation
///   r(u) = radius * (1 + amplitude * sum_{m=2}^{modes+1} (c_m cos(m u)
///          + s_m sin(m u)) / m)
/// with c_m, s_m drawn uniformly from [-1, 1] by a fixed-width
/// mt19937_64 conversion, so identical seeds give identical curves on
/// every platform.
SampledCurve wobble_curve(double radius, double amplitude, int modes,
                          std::uint64_t seed, std::size_t n);

/// Convex oval from a support function h(t) = h0 + sum_m coeffs[m-1]
/// cos(m t) via gamma(t) = h u(t) + h' u'(t) with u = (cos t, sin t).
/// Throws std::invalid_argument when h + h'' is not strictly positive
/// on the sample grid (the curve would not be convex).
SampledCurve support_oval(double h0, const std::vector<double>& cos_coeffs, std::size_t n);

/// Uniform tangent-angle curvature profile of the circle: k = 1/radius.
AngleProfile circle_profile(double radius, std::size_t m);

/// Exact tangent-angle curvature profile of the ellipse with semi-axes
/// a, b: k(theta) = (a^2 sin^2 theta + b^2 cos^2 theta)^{3/2} / (a^2 b^2).
/// The theta = 0 point (tangent +x) is (0, -b); pair with
/// ellipse_anchor when reconstructing.
AngleProfile ellipse_profile(double a, double b, std::size_t m);

/// Position of the theta = 0 point of ellipse_profile's curve.
Vec2 ellipse_anchor(double a, double b);

}  // namespace curveflow
