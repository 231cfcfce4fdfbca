#ifndef OSPRING_DYNAMICS_HPP
#define OSPRING_DYNAMICS_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ospring/params.hpp"

namespace ospring {

using Complex = std::complex<double>;

// Every intermediate of the coupled-mode description. Produced once per
// parameter point and consumed by the polynomial, susceptibility and
// perturbative layers.
struct DerivedCoefficients {
    Complex gamma_plus_cap{};   // (Gamma_w + Gamma_s) / 2   [rad/s]
    Complex gamma_minus_cap{};  // (Gamma_w - Gamma_s) / 2   [rad/s]
    Complex big_delta{};        // i delta / Gamma_-         [dimensionless]
    Complex kappa{};            // Delta / (1 + sqrt(1+Delta^2))
    Complex xi{};               // i delta / (gamma_s - i delta_s)
    Complex d{};                // 1 + kappa^2
    Complex lambda_plus{};      // normal-mode eigenvalue, w-like branch
    Complex lambda_minus{};     // normal-mode eigenvalue, s-like branch

    double tg_w = 0.0;          // -Re lambda_plus
    double tg_s = 0.0;          // -Re lambda_minus
    double td_w = 0.0;          //  Im lambda_plus (may be negative)
    double td_s = 0.0;          //  Im lambda_minus

    double j_plus = 0.0;        // k I_+ / (L mu), MSI-scaled  [1/s^3]
    Complex phi_coef{};         // (1 + xi* kappa)(1 + kappa xi) d*
    Complex psi_coef{};         // (xi* - kappa)(xi - kappa) d*
    double i1 = 0.0;            // 2 J_+ td_s Re(phi) / |d|^2  [1/s^4]
    double i2 = 0.0;            // 2 J_+ td_w Re(psi) / |d|^2  [1/s^4]
    double alpha1 = 0.0;        // Im(phi) / (td_s Re(phi))    [s]
    double alpha2 = 0.0;        // Im(psi) / (td_w Re(psi))    [s]

    double delta_eff = 0.0;     // R_z * delta_arm             [rad/s]
    double mu = 0.0;            // reduced mass actually used  [kg]
};

// Real-coefficient characteristic polynomial, ascending powers
// (coeffs[k] multiplies lambda^k), degree 6, monic.
struct CharPoly {
    std::array<double, 7> coeffs{};

    int degree() const { return 6; }
    Complex eval(Complex lambda) const;
    Complex deriv(Complex lambda) const;
    double max_abs_coeff() const;
};

struct SusceptibilitySample {
    double omega = 0.0;   // spectral frequency [rad/s]
    Complex chi{};        // mechanical susceptibility [m/N]
    double chi_abs = 0.0;
    bool singular = false;
};

// Applies the middle-mirror substitution (delta^2 -> R_z^2 delta^2,
// J_+ -> R_z^2 J_+, mu -> m) for MSI before evaluating the closed forms.
// Throws SingularityError when Gamma_- ~ 0 (indistinguishable modes) and
// when sqrt(1 + Delta^2) sits on the branch cut.
DerivedCoefficients derive_coefficients(const ModeParams& params);

// Exact expansion of the characteristic equation cleared of denominators:
//   P = l^2 Qs Qw + I1 [1 + a1 (l+tg_s)] Qw + I2 [1 + a2 (l+tg_w)] Qs
// with Qs = (l+tg_s)^2 + td_s^2, Qw likewise. Real convolution only.
CharPoly characteristic_polynomial(const DerivedCoefficients& c);

// chi(Omega) = 1 / (mu Q(-i Omega)) with Q the per-unit-mass dynamic
// stiffness: the free-mass limit (I1 = I2 = 0) is -1/(mu Omega^2).
std::vector<SusceptibilitySample> susceptibility(
    const DerivedCoefficients& c, std::span<const double> omega_grid);

SusceptibilitySample susceptibility_at(const DerivedCoefficients& c,
                                       double omega);

// Strict local maxima of |chi| with parabolic refinement. min_height_ratio
// drops maxima below that fraction of the tallest one: |chi| of a stable
// system always recovers into a shallow bump after each dark-fringe notch,
// and those bumps are not resonances.
struct Peak {
    double omega = 0.0;
    double height = 0.0;
};
std::vector<Peak> find_peaks(std::span<const SusceptibilitySample> samples,
                             double min_height_ratio = 0.0);

namespace detail {
// Quadratic (l + g)^2 + d2 as ascending real coefficients.
std::array<double, 3> shifted_quadratic(double g, double d2);
// Truncate a complex coefficient vector to real, rejecting imaginary
// residue above tol relative to the largest coefficient.
std::array<double, 7> to_real_coeffs(const std::array<Complex, 7>& c,
                                     double tol);
} // namespace detail

} // namespace ospring

#endif // OSPRING_DYNAMICS_HPP
