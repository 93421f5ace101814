#pragma once

/// @file kernels.hpp
/// Candidate-scan kernels behind sup_concentration: a serial reference
/// and an OpenMP-parallel version that returns bit-identical results
/// (ties broken toward the lowest candidate index, independent of
/// thread count and schedule).

#include <cstddef>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

struct ScanBest {
    double value = 0.0;
    std::size_t index = 0;
};

/// Evaluates the sharp local concentration at every candidate center
/// and returns the maximum with its candidate index. Serial reference.
ScanBest scan_concentration_serial(const SampledCurve& curve,
                                   const std::vector<Vec2>& centers, double rho);

/// Same contract as the serial scan. Partitions the candidates across
/// OpenMP threads and merges the per-thread maxima in thread order;
/// compiled without OpenMP it degrades to the serial loop.
ScanBest scan_concentration_parallel(const SampledCurve& curve,
                                     const std::vector<Vec2>& centers, double rho);

/// True when the library was compiled with OpenMP support.
bool parallel_kernels_enabled();

/// Maximum number of OpenMP threads the scans may use (1 without OpenMP).
int parallel_thread_count();

}  // namespace curveflow
