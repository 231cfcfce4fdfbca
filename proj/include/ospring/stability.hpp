#ifndef OSPRING_STABILITY_HPP
#define OSPRING_STABILITY_HPP

#include <array>
#include <complex>
#include <vector>

#include "ospring/dynamics.hpp"
#include "ospring/params.hpp"

namespace ospring {

// Exact numeric verdict: the six eigenvalues, their quality, and the two
// independent stability decisions (sign of max real part, Routh-Hurwitz).
struct RootReport {
    std::array<Complex, 6> roots{};      // descending Re, ties ascending Im
    std::array<double, 6> residuals{};   // |P(l_k)| / (max(1,|l_k|)^6 max|c|)
    double max_real = 0.0;
    bool stable = false;                 // strict: max_real < 0
    bool rh_stable = false;
    bool rh_degenerate = false;
};

struct RouthResult {
    bool stable = false;
    int first_failing_row = -1;  // -1 when the first column stayed positive
    bool degenerate = false;     // zero pivot or all-zero row encountered
};

// Perturbative picture: zero-order closed-form roots of the decoupled
// factors plus the first-order correction that decides stability.
struct PerturbativeRoots {
    double p = 0.0;       // sqrt(1 - 4 I1 (1 + a1 tg_s) / (tg_s^2+td_s^2)^2)
    double beta1 = 0.0;
    double gamma1 = 0.0, delta1 = 0.0;   // lambda_{1,2}^(0) = gamma1 +- i delta1
    double gamma3 = 0.0, delta3 = 0.0;   // lambda_{3,4}^(0) = gamma3 +- i delta3
    std::array<Complex, 6> zero_order{};

    Complex b{};                         // first-order coupling constant
    std::array<Complex, 2> first_order{};
    bool imb_warning = false;            // |Im b| not << |Re b|
    bool predicted_stable = false;
};

// Companion-matrix eigenvalues polished by Newton steps; conjugate pairing
// is enforced by symmetrization and marginal real parts are snapped to zero
// (a marginal system is reported unstable). Throws NumericError carrying the
// best iterate if the residual contract cannot be met.
RootReport solve_roots(const CharPoly& poly);

// First-column sign test on the Routh tableau; zero pivots get an epsilon
// substitution (1e-30 * max|c|) and set the degenerate flag.
RouthResult routh_hurwitz(const CharPoly& poly);

PerturbativeRoots zero_order_roots(const DerivedCoefficients& c);
PerturbativeRoots first_order_roots(const DerivedCoefficients& c,
                                    PerturbativeRoots zero);

// Closed-form lower bound on the arm detuning needed for stability,
// evaluated from the coefficients' p and effective decay rates. For MSI the
// value lives on the substituted equation's detuning scale.
double min_detuning(const DerivedCoefficients& c);

// Optional refinement of the bound: re-derive the coefficients at the
// candidate detuning and iterate to a fixed point.
double min_detuning_refined(const ModeParams& params, int max_iter = 20);

// Bisection on the sign of max Re lambda over delta_arm in [lo, hi]
// (rad/s), to relative width 1e-6. Requires differing verdicts at the ends.
double stability_boundary(const ModeParams& params, double delta_lo,
                          double delta_hi);

// Adjusts delta_w so that the derived td_w equals -delta1 + offset
// (the laser-cooling-like tuning the susceptibility protocol uses).
ModeParams tune_delta_w(const ModeParams& params, double offset);

// Convenience: params -> coefficients -> polynomial -> roots.
RootReport analyze_roots(const ModeParams& params);

} // namespace ospring

#endif // OSPRING_STABILITY_HPP
