#ifndef OSPRING_BATCH_HPP
#define OSPRING_BATCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ospring/dynamics.hpp"
#include "ospring/params.hpp"
#include "ospring/stability.hpp"

namespace ospring {

// Sweepable parameters (user units: Hz for frequencies, W for power).
enum class SweepParam {
    DeltaHz,
    GammaWHz,
    GammaSHz,
    DeltaWHz,
    DeltaSHz,
    CirculatingPowerW,
};
SweepParam parse_sweep_param(const std::string& name);
std::string sweep_param_name(SweepParam p);

struct SweepPoint {
    double value = 0.0;      // swept value, user units
    double max_real = 0.0;   // rad/s; NaN when the point errored
    bool stable = false;
    bool rh_stable = false;
    std::string status;      // "ok", "double-resonance", "complex-p", ...
};

ModeParams apply_sweep_value(ModeParams params, SweepParam p, double value);

// Per-point work is independent; the parallel kernels give bit-identical
// results to the serial references and are compared by tests and by the
// benchmark tool.
std::vector<SweepPoint> sweep_stability(const ModeParams& base, SweepParam p,
                                        std::span<const double> values);
std::vector<SweepPoint> sweep_stability_serial(const ModeParams& base,
                                               SweepParam p,
                                               std::span<const double> values);

std::vector<SusceptibilitySample> susceptibility_grid(
    const DerivedCoefficients& c, std::span<const double> omega_grid);
std::vector<SusceptibilitySample> susceptibility_grid_serial(
    const DerivedCoefficients& c, std::span<const double> omega_grid);

// Randomized cross-check of the two stability deciders on synthetic
// degree-6 polynomials built from known quadratic factors.
struct AgreementStats {
    std::size_t total = 0;
    std::size_t agreed = 0;
    std::size_t near_marginal = 0;   // skipped: |max_real| <= band * max|l|
    std::size_t disagreed = 0;       // outside the marginal band
};
CharPoly random_quadratic_product(std::uint64_t seed, bool* stable_truth);
AgreementStats verify_agreement(std::size_t count, std::uint64_t seed,
                                double band = 1e-6);
AgreementStats verify_agreement_serial(std::size_t count, std::uint64_t seed,
                                       double band = 1e-6);

std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace ospring

#endif // OSPRING_BATCH_HPP
