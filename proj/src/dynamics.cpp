#include "ospring/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kDegenerateTol = 1e-12;
constexpr double kBranchGuard = 1e-6;   // distance of arg(1+Delta^2) from pi
constexpr double kRealnessTol = 1e-8;

// conv of ascending-coefficient arrays, result written into out.
template <std::size_t NA, std::size_t NB, std::size_t NO>
void convolve(const std::array<double, NA>& a, const std::array<double, NB>& b,
              std::array<double, NO>& out) {
    static_assert(NO >= NA + NB - 1);
    out.fill(0.0);
    for (std::size_t i = 0; i < NA; ++i)
        for (std::size_t j = 0; j < NB; ++j) out[i + j] += a[i] * b[j];
}

} // namespace

DerivedCoefficients derive_coefficients(const ModeParams& params) {
    params.validate();

    DerivedCoefficients c;
    // Middle-mirror substitution: delta^2 -> R_z^2 delta^2 and
    // J_+ -> R_z^2 J_+ (the equation is even in delta), mu -> m.
    c.delta_eff = params.r_z * params.delta_arm;
    c.mu = params.reduced_mass();

    const Complex gamma_w_cx(params.gamma_w, -params.delta_w);
    const Complex gamma_s_cx(params.gamma_s, -params.delta_s);
    c.gamma_plus_cap = 0.5 * (gamma_w_cx + gamma_s_cx);
    c.gamma_minus_cap = 0.5 * (gamma_w_cx - gamma_s_cx);

    const double mode_scale = std::max(std::abs(gamma_w_cx), std::abs(gamma_s_cx));
    if (std::abs(c.gamma_minus_cap) < kDegenerateTol * mode_scale)
        throw SingularityError(
            "derive_coefficients: modes are degenerate (gamma_w = gamma_s, "
            "delta_w = delta_s), Delta = i delta / Gamma_- is undefined");

    c.big_delta = kI * c.delta_eff / c.gamma_minus_cap;
    const Complex one_plus = 1.0 + c.big_delta * c.big_delta;
    if (std::abs(one_plus) < kDegenerateTol * (1.0 + std::norm(c.big_delta)))
        throw SingularityError(
            "derive_coefficients: 1 + Delta^2 vanishes, normal-mode "
            "splitting is singular");
    if (kTwoPi / 2.0 - std::abs(std::arg(one_plus)) < kBranchGuard)
        throw SingularityError(
            "derive_coefficients: sqrt(1 + Delta^2) sits on the principal "
            "branch cut");
    const Complex split = std::sqrt(one_plus);

    c.lambda_plus = -(c.gamma_plus_cap + c.gamma_minus_cap * split);
    c.lambda_minus = -(c.gamma_plus_cap - c.gamma_minus_cap * split);
    c.kappa = c.big_delta / (1.0 + split);
    c.xi = kI * c.delta_eff / gamma_s_cx;
    c.d = 1.0 + c.kappa * c.kappa;

    c.tg_w = -c.lambda_plus.real();
    c.td_w = c.lambda_plus.imag();
    c.tg_s = -c.lambda_minus.real();
    c.td_s = c.lambda_minus.imag();

    const double rz2 = params.r_z * params.r_z;
    c.j_plus = rz2 * params.wave_vector() * params.circ_power /
               (params.arm_length * c.mu);

    c.phi_coef = (1.0 + std::conj(c.xi) * c.kappa) * (1.0 + c.kappa * c.xi) *
                 std::conj(c.d);
    c.psi_coef = (std::conj(c.xi) - c.kappa) * (c.xi - c.kappa) *
                 std::conj(c.d);

    const double d_norm2 = std::norm(c.d);
    c.i1 = 2.0 * c.j_plus * c.td_s * c.phi_coef.real() / d_norm2;
    c.i2 = 2.0 * c.j_plus * c.td_w * c.psi_coef.real() / d_norm2;

    // alpha = Im/.../Re...: defined as zero when the spring it scales is
    // absent (Re -> 0 only together with the whole term).
    const double den1 = c.td_s * c.phi_coef.real();
    const double den2 = c.td_w * c.psi_coef.real();
    c.alpha1 = den1 != 0.0 ? c.phi_coef.imag() / den1 : 0.0;
    c.alpha2 = den2 != 0.0 ? c.psi_coef.imag() / den2 : 0.0;
    return c;
}

namespace detail {

std::array<double, 3> shifted_quadratic(double g, double d2) {
    return {g * g + d2, 2.0 * g, 1.0};
}

std::array<double, 7> to_real_coeffs(const std::array<Complex, 7>& c,
                                     double tol) {
    double max_abs = 0.0;
    double max_imag = 0.0;
    for (const auto& v : c) {
        max_abs = std::max(max_abs, std::abs(v));
        max_imag = std::max(max_imag, std::abs(v.imag()));
    }
    if (max_abs > 0.0 && max_imag > tol * max_abs)
        throw NumericError(
            "characteristic polynomial has non-real coefficients (imaginary "
            "residue " +
            std::to_string(max_imag / max_abs) + " relative)");
    std::array<double, 7> out{};
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

} // namespace detail

CharPoly characteristic_polynomial(const DerivedCoefficients& c) {
    const auto qs = detail::shifted_quadratic(c.tg_s, c.td_s * c.td_s);
    const auto qw = detail::shifted_quadratic(c.tg_w, c.td_w * c.td_w);

    // lambda^2 Qs Qw
    std::array<double, 5> qsqw_lo{};
    convolve(qs, qw, qsqw_lo);
    std::array<double, 7> main_term{};
    for (std::size_t i = 0; i < qsqw_lo.size(); ++i)
        main_term[i + 2] = qsqw_lo[i];

    // I1 [1 + a1 (l + tg_s)] Qw  and  I2 [1 + a2 (l + tg_w)] Qs
    const std::array<double, 2> lin1{1.0 + c.alpha1 * c.tg_s, c.alpha1};
    const std::array<double, 2> lin2{1.0 + c.alpha2 * c.tg_w, c.alpha2};
    std::array<double, 4> spring1{};
    std::array<double, 4> spring2{};
    convolve(lin1, qw, spring1);
    convolve(lin2, qs, spring2);

    std::array<Complex, 7> sum{};
    for (std::size_t i = 0; i < 7; ++i) sum[i] = main_term[i];
    for (std::size_t i = 0; i < 4; ++i) {
        sum[i] += c.i1 * spring1[i];
        sum[i] += c.i2 * spring2[i];
    }

    CharPoly poly;
    poly.coeffs = detail::to_real_coeffs(sum, kRealnessTol);
    for (double v : poly.coeffs)
        if (!std::isfinite(v))
            throw NumericError("characteristic polynomial has non-finite "
                               "coefficients");
    // The leading term comes solely from l^2 Qs Qw, so it is exactly 1;
    // keep the normalization explicit anyway.
    for (auto& v : poly.coeffs) v /= poly.coeffs[6];
    return poly;
}

Complex CharPoly::eval(Complex lambda) const {
    Complex acc = coeffs[6];
    for (int i = 5; i >= 0; --i) acc = acc * lambda + coeffs[i];
    return acc;
}

Complex CharPoly::deriv(Complex lambda) const {
    Complex acc = 6.0 * coeffs[6];
    for (int i = 5; i >= 1; --i) acc = acc * lambda + double(i) * coeffs[i];
    return acc;
}

double CharPoly::max_abs_coeff() const {
    double m = 0.0;
    for (double v : coeffs) m = std::max(m, std::abs(v));
    return m;
}

SusceptibilitySample susceptibility_at(const DerivedCoefficients& c,
                                       double omega) {
    const Complex lambda = -kI * omega;
    const Complex qs = (lambda + c.tg_s) * (lambda + c.tg_s) + c.td_s * c.td_s;
    const Complex qw = (lambda + c.tg_w) * (lambda + c.tg_w) + c.td_w * c.td_w;
    const Complex stiffness =
        lambda * lambda + c.i1 * (1.0 + c.alpha1 * (lambda + c.tg_s)) / qs +
        c.i2 * (1.0 + c.alpha2 * (lambda + c.tg_w)) / qw;

    SusceptibilitySample s;
    s.omega = omega;
    if (std::abs(stiffness) < 1e-30) {
        s.singular = true;
        s.chi = Complex(std::numeric_limits<double>::infinity(), 0.0);
        s.chi_abs = std::numeric_limits<double>::infinity();
        return s;
    }
    s.chi = 1.0 / (c.mu * stiffness);
    s.chi_abs = std::abs(s.chi);
    return s;
}

std::vector<SusceptibilitySample> susceptibility(
    const DerivedCoefficients& c, std::span<const double> omega_grid) {
    if (!omega_grid.empty() && !(omega_grid.front() > 0.0))
        throw std::invalid_argument("susceptibility: grid must satisfy Omega > 0");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw std::invalid_argument(
                "susceptibility: grid must be strictly increasing");

    std::vector<SusceptibilitySample> out(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i)
        out[i] = susceptibility_at(c, omega_grid[i]);
    return out;
}

std::vector<Peak> find_peaks(std::span<const SusceptibilitySample> samples,
                             double min_height_ratio) {
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const double y0 = samples[i - 1].chi_abs;
        const double y1 = samples[i].chi_abs;
        const double y2 = samples[i + 1].chi_abs;
        if (!std::isfinite(y0) || !std::isfinite(y1) || !std::isfinite(y2))
            continue;
        if (!(y1 > y0 && y1 > y2)) continue;

        // Parabola through the three samples (Newton form); its vertex
        // refines both location and height.
        const double x0 = samples[i - 1].omega;
        const double x1 = samples[i].omega;
        const double x2 = samples[i + 1].omega;
        const double d10 = (y1 - y0) / (x1 - x0);
        const double d21 = (y2 - y1) / (x2 - x1);
        const double curv = (d21 - d10) / (x2 - x0);
        Peak p{x1, y1};
        if (curv < 0.0) {
            const double xv = 0.5 * (x0 + x1) - d10 / (2.0 * curv);
            if (xv > x0 && xv < x2) {
                p.omega = xv;
                p.height = y0 + d10 * (xv - x0) + curv * (xv - x0) * (xv - x1);
            }
        }
        peaks.push_back(p);
    }
    if (min_height_ratio > 0.0 && !peaks.empty()) {
        double tallest = 0.0;
        for (const auto& p : peaks) tallest = std::max(tallest, p.height);
        std::erase_if(peaks, [&](const Peak& p) {
            return p.height < min_height_ratio * tallest;
        });
    }
    return peaks;
}

} // namespace ospring
