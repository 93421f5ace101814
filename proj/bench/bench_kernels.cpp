#include <chrono>
#include <cstdio>
#include <vector>

#include "curveflow/concentration.hpp"
#include "curveflow/kernels.hpp"
#include "curveflow/presets.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_per_call(const curveflow::SampledCurve& curve,
                        const std::vector<curveflow::Vec2>& centers, double rho,
                        bool parallel, int repeats) {
    // One untimed call warms caches and the OpenMP thread pool.
    double sink =
        (parallel ? curveflow::scan_concentration_parallel(curve, centers, rho)
                  : curveflow::scan_concentration_serial(curve, centers, rho))
            .value;
    const auto start = Clock::now();
    for (int r = 0; r < repeats; ++r)
        sink += (parallel ? curveflow::scan_concentration_parallel(curve, centers, rho)
                          : curveflow::scan_concentration_serial(curve, centers, rho))
                    .value;
    const auto stop = Clock::now();
    (void)sink;
    return std::chrono::duration<double>(stop - start).count() / repeats;
}

}  // namespace

int main() {
    std::printf("candidate-scan kernels: serial reference vs OpenMP\n");
    std::printf("openmp: %s, max threads: %d\n\n",
                curveflow::parallel_kernels_enabled() ? "enabled" : "disabled",
                curveflow::parallel_thread_count());
    std::printf("%8s %10s %12s %12s %9s %s\n", "N", "centers", "serial[ms]",
                "parallel[ms]", "speedup", "agree");

    const double rho = 0.5;
    for (const std::size_t n : {std::size_t{1024}, std::size_t{4096}, std::size_t{16384}}) {
        const curveflow::SampledCurve curve =
            curveflow::flower_curve(1.0, 0.3, 5, n);
        const std::vector<curveflow::Vec2> centers =
            curveflow::concentration_candidates(curve, rho);
        const int repeats = n <= 4096 ? 5 : 2;
        const double serial = seconds_per_call(curve, centers, rho, false, repeats);
        const double parallel = seconds_per_call(curve, centers, rho, true, repeats);
        const curveflow::ScanBest a =
            curveflow::scan_concentration_serial(curve, centers, rho);
        const curveflow::ScanBest b =
            curveflow::scan_concentration_parallel(curve, centers, rho);
        const bool agree = a.value == b.value && a.index == b.index;
        std::printf("%8zu %10zu %12.3f %12.3f %8.2fx %s\n", n, centers.size(),
                    serial * 1e3, parallel * 1e3, serial / parallel,
                    agree ? "exact" : "MISMATCH");
    }
    return 0;
}
