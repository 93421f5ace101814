#pragma once

/// @file resample.hpp
/// Arclength redistribution of curve samples via periodic cubic
/// interpolation, with exact restoration of the enclosed polygon area.

#include "curveflow/curve.hpp"

namespace curveflow {

/// Returns n_out points at equal arclength spacing along the periodic
/// cubic interpolant of `curve`, starting at vertex 0. A final uniform
/// dilation about the area centroid restores the input polygon area
/// exactly, so repeated resampling injects no area drift. Throws
/// std::invalid_argument for n_out < 8.
SampledCurve resample(const SampledCurve& curve, std::size_t n_out);

}  // namespace curveflow
