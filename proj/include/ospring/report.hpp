#ifndef OSPRING_REPORT_HPP
#define OSPRING_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "ospring/batch.hpp"
#include "ospring/dynamics.hpp"
#include "ospring/meanfield.hpp"
#include "ospring/params.hpp"
#include "ospring/stability.hpp"

namespace ospring {

// Everything cmd_analyze reports for one parameter point.
struct AnalysisReport {
    ModeParams params;
    DerivedCoefficients coefficients;
    CharPoly poly;
    RootReport roots;
    std::optional<PerturbativeRoots> perturbative;  // absent out of regime
    std::string perturbative_status;                // "ok" or the reason
    std::optional<double> delta_min;                // rad/s
    std::string delta_min_status;
    MeanFields fields;
    bool stable = false;
};

AnalysisReport analyze(const ModeParams& params);

// Serialization. Doubles are printed with round-trip precision ("%.17g"),
// so identical inputs give byte-identical output.
std::string format_double(double v);
std::string to_json(const AnalysisReport& report);
std::string to_csv(const AnalysisReport& report);
std::string susceptibility_csv(std::span<const SusceptibilitySample> samples);
std::string sweep_csv(std::span<const SweepPoint> points);

} // namespace ospring

#endif // OSPRING_REPORT_HPP
