#include "curveflow/kernels.hpp"

#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "curveflow/concentration.hpp"

namespace curveflow {

namespace {

void merge_best(ScanBest& into, const ScanBest& candidate) {
    if (candidate.value > into.value ||
        (candidate.value == into.value && candidate.index < into.index))
        into = candidate;
}

}  // namespace

ScanBest scan_concentration_serial(const SampledCurve& curve,
                                   const std::vector<Vec2>& centers, double rho) {
    if (centers.empty())
        throw std::invalid_argument("scan_concentration: empty candidate list");
    const ConcentrationField field = ConcentrationField::from_curve(curve);
    ScanBest best{sharp_concentration(field, centers[0], rho), 0};
    for (std::size_t i = 1; i < centers.size(); ++i)
        merge_best(best, {sharp_concentration(field, centers[i], rho), i});
    return best;
}

ScanBest scan_concentration_parallel(const SampledCurve& curve,
                                     const std::vector<Vec2>& centers, double rho) {
    if (centers.empty())
        throw std::invalid_argument("scan_concentration: empty candidate list");
    const ConcentrationField field = ConcentrationField::from_curve(curve);
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
    std::vector<ScanBest> partial(static_cast<std::size_t>(threads),
                                  ScanBest{-1.0, centers.size()});
#pragma omp parallel num_threads(threads)
    {
        const std::size_t tid = static_cast<std::size_t>(omp_get_thread_num());
        ScanBest local{-1.0, centers.size()};
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(centers.size()); ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            merge_best(local, {sharp_concentration(field, centers[idx], rho), idx});
        }
        partial[tid] = local;
    }
    ScanBest best{sharp_concentration(field, centers[0], rho), 0};
    for (const ScanBest& candidate : partial)
        if (candidate.index < centers.size()) merge_best(best, candidate);
    return best;
#else
    ScanBest best{sharp_concentration(field, centers[0], rho), 0};
    for (std::size_t i = 1; i < centers.size(); ++i)
        merge_best(best, {sharp_concentration(field, centers[i], rho), i});
    return best;
#endif
}

bool parallel_kernels_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int parallel_thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace curveflow
