// Timing comparison of the serial reference kernels against the
// OpenMP-parallel ones, on workloads shaped like real use.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "ospring/batch.hpp"
#include "ospring/units.hpp"

using namespace ospring;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    const ModeParams aligo = preset("aligo");
    const auto coeffs = derive_coefficients(aligo);

    {
        const auto grid = linspace(hz_to_rad(0.5), hz_to_rad(200.0), 2'000'000);
        std::vector<SusceptibilitySample> a, b;
        const double ts = time_ms([&] { a = susceptibility_grid_serial(coeffs, grid); });
        const double tp = time_ms([&] { b = susceptibility_grid(coeffs, grid); });
        report("susceptibility 2M points", ts, tp);
    }
    {
        const auto values = linspace(0.0, 3.0, 20'000);
        std::vector<SweepPoint> a, b;
        const double ts = time_ms(
            [&] { a = sweep_stability_serial(aligo, SweepParam::DeltaHz, values); });
        const double tp = time_ms(
            [&] { b = sweep_stability(aligo, SweepParam::DeltaHz, values); });
        report("delta sweep 20k points", ts, tp);
    }
    {
        AgreementStats a, b;
        const double ts = time_ms([&] { a = verify_agreement_serial(20'000, 7); });
        const double tp = time_ms([&] { b = verify_agreement(20'000, 7); });
        report("root/RH agreement 20k", ts, tp);
        std::printf("  agreement: %zu/%zu agreed, %zu near-marginal\n",
                    a.agreed, a.total, a.near_marginal);
    }
    return 0;
}
