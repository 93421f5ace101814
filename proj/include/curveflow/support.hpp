#pragma once

/// @file support.hpp
/// Support function and width of a convex curve on a uniform normal-angle
/// grid, plus the discrete check of the radius relation h + h'' = 1/k.

#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Support function h and width w on the uniform normal-angle grid
/// theta_l = 2*pi*l/M (even M, so theta and theta + pi are both on it).
/// Values are relative to the area centroid.
struct SupportData {
    std::vector<double> h;
    std::vector<double> w;

    std::size_t size() const { return h.size(); }
};

/// Computes h(theta) = max_i <p_i - centroid, (cos theta, sin theta)> and
/// w(theta) = h(theta) + h(theta + pi). Requires a convex curve with
/// omega = 1; grid_size defaults to ~2*sqrt(N) rounded to a multiple of 4
/// (second differences of the polygon support function approximate 1/k
/// only when the angle grid is coarse relative to the vertex spacing).
SupportData support_and_width(const SampledCurve& curve, std::size_t grid_size = 0);

/// Max over the grid of |h + h'' - 1/k| with h'' by periodic second
/// differences and 1/k interpolated from the vertex samples; second order
/// in the grid step when grid_size ~ sqrt(N).
double support_identity_residual(const SampledCurve& curve, const SupportData& support);

/// Empirical constant min_theta w(theta) * exp(E) for the width lower
/// bound, with E = sigma1 * L + sigma2 * A.
double width_energy_constant(const SampledCurve& curve, const SupportData& support,
                             double sigma1, double sigma2);

}  // namespace curveflow
