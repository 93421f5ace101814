#pragma once

/// @file profile.hpp
/// Curvature as a function of tangent angle for strictly convex curves:
/// k > 0 sampled on the uniform grid theta_j = 2*pi*j/M. Closure test,
/// reconstruction, median curvature and entropy integrals all live on
/// this grid; integrals use the periodic trapezoid rule, which is exact
/// for trigonometric polynomials of low degree and spectrally accurate
/// for smooth k.

#include <cstddef>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Curvature samples on the uniform tangent-angle grid. M >= 16, k > 0.
struct AngleProfile {
    std::vector<double> k;

    std::size_t size() const { return k.size(); }
    double theta(std::size_t j) const;
    double grid_step() const;
};

/// Validates M >= 16, finite positive samples; throws std::invalid_argument.
void validate(const AngleProfile& profile);

/// Pair (integral cos(theta)/k dtheta, integral sin(theta)/k dtheta); both
/// vanish exactly when the profile closes up.
std::pair<double, double> closure_residual(const AngleProfile& profile);

/// Infinity norm the closure pair is compared against: tol_scale * mean(1/k).
double closure_tolerance(const AngleProfile& profile, double tol_scale = 1e-6);

/// Integrates gamma' = (cos theta, sin theta)/k by cumulative trapezoid,
/// anchored at gamma(0) = anchor with tangent (1, 0). Throws
/// std::invalid_argument (message carries the residual pair) when the
/// closure residual exceeds the tolerance, unless check_closure is false.
SampledCurve reconstruct_from_curvature(const AngleProfile& profile, Vec2 anchor = {0.0, 0.0},
                                        bool check_closure = true, double tol_scale = 1e-6);

/// Copy of the profile with the first Fourier harmonic of the radius
/// function 1/k removed, which restores the closure conditions exactly
/// (the grid is uniform, so the discrete projection is exact too). The
/// perturbation of k is of the size of the closure residual.
AngleProfile project_closure(const AngleProfile& profile);

/// Median curvature k* = max over grid windows [theta_j, theta_j + pi] of
/// the window minimum of k (windows include both endpoint samples).
double median_curvature(const AngleProfile& profile);

/// integral log(k) dtheta.
double entropy_theta(const AngleProfile& profile);

/// (1/2pi) integral log(k) dtheta.
double normalized_entropy(const AngleProfile& profile);

/// (1/L) integral log(k) dtheta with L = integral dtheta/k.
double length_normalized_entropy(const AngleProfile& profile);

/// Curve length L = integral dtheta/k.
double profile_length(const AngleProfile& profile);

/// Conversion of a strictly convex polygon to the uniform grid by periodic
/// linear interpolation of k over the vertex tangent angles. Also returns
/// the interpolated position of the theta = 0 point, so reconstructions
/// can be anchored consistently with the source curve.
struct ProfileFromPolygon {
    AngleProfile profile;
    Vec2 anchor;    ///< gamma at tangent angle 0
};
ProfileFromPolygon profile_from_polygon(const SampledCurve& curve, std::size_t m);

}  // namespace curveflow
