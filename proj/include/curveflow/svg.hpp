#pragma once

/// @file svg.hpp
/// Static SVG figures: curve frames (outline plus a curvature heat
/// strip) and simple multi-series line charts for the diagnostics.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Curve outline with a horizontal per-vertex curvature strip below it
/// (blue = minimum, red = maximum of this frame, labels printed).
std::string curve_frame_svg(const SampledCurve& curve, const std::string& title);

void write_curve_frame(const std::filesystem::path& path, const SampledCurve& curve,
                       const std::string& title);

/// Line chart of one or more named series over a shared abscissa.
/// Non-finite samples break the polyline instead of plotting.
std::string series_svg(const std::vector<double>& x,
                       const std::vector<std::pair<std::string, std::vector<double>>>& series,
                       const std::string& title, const std::string& x_label);

void write_series_svg(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series,
                      const std::string& title, const std::string& x_label);

}  // namespace curveflow
