#include "ospring/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

namespace {

constexpr double kResidualBound = 1e-8;
constexpr double kMarginSnap = 1e-12;   // |Re| below this * scale counts as 0
constexpr int kMaxPolish = 500;

// Characteristic scale of the root magnitudes, from the Cauchy-style bound
// max |c_i / c_6|^{1/(6-i)}.
double root_scale(const CharPoly& poly) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double a = std::abs(poly.coeffs[i] / poly.coeffs[6]);
        if (a > 0.0) s = std::max(s, std::pow(a, 1.0 / (6 - i)));
    }
    return s > 0.0 ? s : 1.0;
}

double normalized_residual(const CharPoly& poly, Complex z) {
    const double m = std::max(1.0, std::abs(z));
    const double scale = std::pow(m, 6) * poly.max_abs_coeff();
    return std::abs(poly.eval(z)) / scale;
}

// Parlett-Reinsch balancing: diagonal similarity with radix-2 scale factors
// so row and column norms agree. Exact in floating point and essential for
// the companion matrix, which Eigen's QR does not balance on its own.
void balance(Eigen::Matrix<double, 6, 6>& m) {
    for (bool again = true; again;) {
        again = false;
        for (int i = 0; i < 6; ++i) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < 6; ++j) {
                if (j == i) continue;
                row += std::abs(m(i, j));
                col += std::abs(m(j, i));
            }
            if (row == 0.0 || col == 0.0) continue;
            double factor = 1.0;
            const double target = row / 2.0;
            while (col < target) {
                col *= 2.0;
                row /= 2.0;
                factor *= 2.0;
            }
            while (col >= row * 2.0) {
                col /= 2.0;
                row *= 2.0;
                factor /= 2.0;
            }
            if (factor != 1.0) {
                again = true;
                m.row(i) /= factor;
                m.col(i) *= factor;
            }
        }
    }
}

// One Newton step; returns z unchanged when the step would not improve.
Complex newton_step(const CharPoly& poly, Complex z) {
    const Complex dp = poly.deriv(z);
    if (std::abs(dp) == 0.0) return z;
    const Complex zn = z - poly.eval(z) / dp;
    if (!std::isfinite(zn.real()) || !std::isfinite(zn.imag())) return z;
    return std::abs(poly.eval(zn)) <= std::abs(poly.eval(z)) ? zn : z;
}

} // namespace

RootReport solve_roots(const CharPoly& poly) {
    if (poly.coeffs[6] == 0.0)
        throw NumericError("solve_roots: leading coefficient is zero");

    // Work on the scaled variable x = lambda / s so the companion matrix is
    // well balanced even when the raw coefficients span many decades.
    const double s = root_scale(poly);
    std::array<double, 7> b{};
    double pw = 1.0;
    for (int i = 6; i >= 0; --i) {
        b[i] = poly.coeffs[i] / poly.coeffs[6] / pw;
        pw *= s;
    }

    Eigen::Matrix<double, 6, 6> companion = Eigen::Matrix<double, 6, 6>::Zero();
    for (int i = 0; i < 5; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < 6; ++i) companion(i, 5) = -b[i];
    balance(companion);

    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw NumericError("solve_roots: companion eigenvalue iteration "
                           "failed to converge");

    std::vector<Complex> roots(6);
    for (int i = 0; i < 6; ++i) roots[i] = s * solver.eigenvalues()[i];

    // Polish conjugate representatives with Newton steps on the original
    // polynomial, mirroring the partner so pairing stays exact. Real
    // eigenvalues are polished on the real axis.
    int polish_budget = kMaxPolish;
    std::vector<bool> done(6, false);
    for (int i = 0; i < 6; ++i) {
        if (done[i]) continue;
        if (roots[i].imag() == 0.0) {
            done[i] = true;
            Complex z = roots[i];
            for (int it = 0; it < 2 && polish_budget > 0; ++it, --polish_budget)
                z = Complex(newton_step(poly, z).real(), 0.0);
            roots[i] = z;
            continue;
        }
        // Find the exact conjugate partner produced by the real Schur form.
        int partner = -1;
        for (int j = i + 1; j < 6 && partner < 0; ++j)
            if (!done[j] && roots[j] == std::conj(roots[i])) partner = j;
        Complex z = roots[i].imag() > 0.0 ? roots[i] : std::conj(roots[i]);
        for (int it = 0; it < 2 && polish_budget > 0; ++it, --polish_budget)
            z = newton_step(poly, z);
        done[i] = true;
        roots[i] = roots[i].imag() > 0.0 ? z : std::conj(z);
        if (partner >= 0) {
            done[partner] = true;
            roots[partner] = std::conj(roots[i]);
        }
    }

    // Symmetrize any residual asymmetry (average with the conjugate of the
    // nearest partner) and snap marginal real parts to zero so the strict
    // verdict is deterministic.
    const double snap_scale =
        std::accumulate(roots.begin(), roots.end(), 1.0,
                        [](double m, Complex z) { return std::max(m, std::abs(z)); });
    std::vector<bool> paired(6, false);
    for (int i = 0; i < 6; ++i) {
        if (paired[i] || roots[i].imag() == 0.0) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 6; ++j) {
            if (j == i || paired[j]) continue;
            const double dist = std::abs(roots[j] - std::conj(roots[i]));
            if (dist < best_d) {
                best_d = dist;
                best = j;
            }
        }
        if (best >= 0 && best_d <= 1e-6 * snap_scale) {
            const Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
            paired[i] = paired[best] = true;
        }
    }
    for (auto& z : roots)
        if (std::abs(z.real()) < kMarginSnap * std::max(1.0, std::abs(z)))
            z = Complex(0.0, z.imag());

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });

    RootReport report;
    std::copy(roots.begin(), roots.end(), report.roots.begin());
    for (int i = 0; i < 6; ++i) {
        report.residuals[i] = normalized_residual(poly, roots[i]);
        if (!(report.residuals[i] < kResidualBound))
            throw NumericError("solve_roots: residual bound violated",
                               std::vector<Complex>(roots.begin(), roots.end()));
    }
    report.max_real = roots.front().real();
    report.stable = report.max_real < 0.0;

    const RouthResult rh = routh_hurwitz(poly);
    report.rh_stable = rh.stable;
    report.rh_degenerate = rh.degenerate;
    return report;
}

RouthResult routh_hurwitz(const CharPoly& poly) {
    if (poly.coeffs[6] == 0.0)
        throw NumericError("routh_hurwitz: leading coefficient is zero");

    // Descending coefficients, leading entry made positive.
    std::array<double, 7> a{};
    const double sign = poly.coeffs[6] > 0.0 ? 1.0 : -1.0;
    for (int i = 0; i < 7; ++i) a[i] = sign * poly.coeffs[6 - i];

    const double eps = 1e-30 * poly.max_abs_coeff();

    // Tableau rows, 4 entries each padded with zeros.
    std::array<std::array<double, 4>, 7> rows{};
    for (int j = 0; j < 4; ++j) rows[0][j] = a[2 * j];
    for (int j = 0; j < 3; ++j) rows[1][j] = a[2 * j + 1];

    RouthResult result;
    for (int k = 2; k < 7; ++k) {
        auto& prev = rows[k - 1];
        const auto& prev2 = rows[k - 2];
        if (std::all_of(prev.begin(), prev.end(),
                        [](double v) { return v == 0.0; })) {
            // A full zero row signals a root pattern symmetric about the
            // origin: never strictly stable.
            result.stable = false;
            result.first_failing_row = k - 1;
            result.degenerate = true;
            return result;
        }
        if (prev[0] == 0.0) {
            prev[0] = eps;
            result.degenerate = true;
        }
        for (int j = 0; j + 1 < 4; ++j)
            rows[k][j] = (prev[0] * prev2[j + 1] - prev2[0] * prev[j + 1]) / prev[0];
    }

    result.stable = true;
    for (int k = 0; k < 7; ++k) {
        if (!(rows[k][0] > 0.0)) {
            result.stable = false;
            result.first_failing_row = k;
            break;
        }
    }
    return result;
}

namespace {

// p = sqrt(1 - 4 I1 (1 + a1 tg_s) / S^2) shared by the perturbative layer.
double spring_parameter(const DerivedCoefficients& c) {
    const double s2 = c.tg_s * c.tg_s + c.td_s * c.td_s;
    const double amp = 1.0 + c.alpha1 * c.tg_s;
    const double p2 = 1.0 - 4.0 * c.i1 * amp / (s2 * s2);
    if (p2 < 0.0)
        throw PerturbationError(PerturbationError::Reason::ComplexP,
                                "spring parameter p is imaginary (overcritical "
                                "pump)");
    const double p = std::sqrt(p2);
    if (p <= 1e-6)
        throw PerturbationError(PerturbationError::Reason::DoubleResonance,
                                "p ~ 0: double-resonance degeneracy");
    if (p > 1.0 + 1e-12)
        throw PerturbationError(PerturbationError::Reason::OutOfRegime,
                                "p > 1: spring has the wrong sign for the "
                                "closed forms");
    return std::min(p, 1.0);
}

} // namespace

PerturbativeRoots zero_order_roots(const DerivedCoefficients& c) {
    PerturbativeRoots r;
    r.p = spring_parameter(c);

    const double s2 = c.tg_s * c.tg_s + c.td_s * c.td_s;
    const double amp = 1.0 + c.alpha1 * c.tg_s;
    if (std::abs(amp) < 1e-12)
        throw PerturbationError(PerturbationError::Reason::OutOfRegime,
                                "1 + alpha1 * tg_s vanishes");
    r.beta1 = c.alpha1 * s2 / (4.0 * amp);

    const double p = r.p;
    const double q = 1.0 - p * p;
    r.gamma1 = (c.tg_s * (1.0 - p) - q * r.beta1) / (2.0 * p);
    r.delta1 = std::sqrt(0.5 * s2 * (1.0 - p));
    r.gamma3 = -(c.tg_s * (1.0 + p) - q * r.beta1) / (2.0 * p);
    r.delta3 = std::sqrt(0.5 * s2 * (1.0 + p));

    r.zero_order = {Complex(r.gamma1, r.delta1), Complex(r.gamma1, -r.delta1),
                    Complex(r.gamma3, r.delta3), Complex(r.gamma3, -r.delta3),
                    Complex(-c.tg_w, c.td_w),    Complex(-c.tg_w, -c.td_w)};
    return r;
}

PerturbativeRoots first_order_roots(const DerivedCoefficients& c,
                                    PerturbativeRoots zero) {
    PerturbativeRoots r = std::move(zero);

    // b = -D1 / ((l - gamma3)^2 + delta3^2) at l = lambda_1^(0), the
    // positive-imaginary member; conjugate symmetry covers its partner.
    const Complex l0(r.gamma1, r.delta1);
    const Complex qs = (l0 + c.tg_s) * (l0 + c.tg_s) + c.td_s * c.td_s;
    const Complex den = (l0 - r.gamma3) * (l0 - r.gamma3) + r.delta3 * r.delta3;
    const double den_scale =
        std::pow(std::abs(l0) + std::abs(r.gamma3) + r.delta3, 2);
    if (std::abs(den) < 1e-12 * std::max(den_scale, 1.0))
        throw PerturbationError(
            PerturbationError::Reason::Degenerate,
            "(lambda_1 - gamma3)^2 + delta3^2 vanishes: first-order "
            "iteration is singular");

    const Complex d1 = c.i2 * (1.0 + c.alpha2 * (l0 + c.tg_w)) * qs;
    r.b = -d1 / den;
    r.imb_warning = std::abs(r.b.imag()) > 0.5 * std::abs(r.b.real());

    const double h = 0.5 * (r.gamma1 + c.tg_w);
    const double hd2 = r.delta1 * r.delta1 *
                       (r.gamma1 + c.tg_w) * (r.gamma1 + c.tg_w);
    const Complex inner = std::sqrt(r.b - hd2);
    const Complex base = Complex(r.delta1 * r.delta1 - h * h, 0.0);
    const Complex shift(0.5 * (r.gamma1 - c.tg_w), 0.0);

    std::array<Complex, 4> branches;
    int n = 0;
    for (double so : {1.0, -1.0})
        for (double si : {1.0, -1.0})
            branches[n++] = shift + so * Complex(0.0, 1.0) *
                                        std::sqrt(base + si * inner);

    // Keep the two branches that continue lambda_{1,2}^(0).
    const Complex targets[2] = {Complex(r.gamma1, r.delta1),
                                Complex(r.gamma1, -r.delta1)};
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const double d = std::abs(branches[i] - targets[0]) +
                             std::abs(branches[j] - targets[1]);
            if (d < best) {
                best = d;
                r.first_order = {branches[i], branches[j]};
            }
        }
    }

    const double worst = std::max({r.first_order[0].real(),
                                   r.first_order[1].real(), r.gamma3, -c.tg_w});
    r.predicted_stable = worst < 0.0;
    return r;
}

double min_detuning(const DerivedCoefficients& c) {
    const double p = spring_parameter(c);
    if (p >= 1.0 - 1e-12)
        throw PerturbationError(PerturbationError::Reason::OutOfRegime,
                                "p = 1: no optical spring, the bound "
                                "degenerates to zero");

    const double sqrt2 = std::sqrt(2.0);
    const double u = std::sqrt(1.0 - p);
    const double rate = c.tg_s * (1.0 - p) / (2.0 * p) + c.tg_w;
    const double window = (sqrt2 + u) / (2.0 * sqrt2 + u);
    const double factor = 4.0 * sqrt2 * p / (u * (1.0 + p) * (1.0 + p));
    return std::sqrt(rate * rate * window * window * factor);
}

double min_detuning_refined(const ModeParams& params, int max_iter) {
    ModeParams probe = params;
    double delta = min_detuning(derive_coefficients(probe));
    for (int i = 0; i < max_iter; ++i) {
        probe.delta_arm = delta;
        const double next = min_detuning(derive_coefficients(probe));
        if (std::abs(next - delta) <= 1e-9 * std::abs(next)) return next;
        delta = next;
    }
    return delta;
}

RootReport analyze_roots(const ModeParams& params) {
    return solve_roots(characteristic_polynomial(derive_coefficients(params)));
}

double stability_boundary(const ModeParams& params, double delta_lo,
                          double delta_hi) {
    if (!(delta_hi > delta_lo))
        throw BracketError("stability_boundary: need delta_lo < delta_hi");

    const auto verdict = [&](double delta) {
        ModeParams p = params;
        p.delta_arm = delta;
        return analyze_roots(p).stable;
    };

    bool lo_stable = verdict(delta_lo);
    const bool hi_stable = verdict(delta_hi);
    if (lo_stable == hi_stable)
        throw BracketError(
            "stability_boundary: same verdict at both bracket ends");

    double lo = delta_lo;
    double hi = delta_hi;
    const double width_scale = std::max(std::abs(delta_hi), std::abs(delta_lo));
    while (hi - lo > 1e-6 * width_scale) {
        const double mid = 0.5 * (lo + hi);
        if (verdict(mid) == lo_stable)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ModeParams tune_delta_w(const ModeParams& params, double offset) {
    const auto mismatch = [&](double delta_w) {
        ModeParams probe = params;
        probe.delta_w = delta_w;
        const auto c = derive_coefficients(probe);
        const auto z = zero_order_roots(c);
        return c.td_w - (-z.delta1 + offset);
    };

    try {
        // td_w tracks delta_w closely, so the target itself is a good
        // starting point for a secant iteration.
        const auto c0 = derive_coefficients(params);
        const auto z0 = zero_order_roots(c0);
        const double scale = std::max({std::abs(z0.delta1),
                                       std::abs(params.delta_w), 1e-9});
        double x0 = -z0.delta1 + offset;
        double x1 = x0 + 1e-3 * scale;
        double f0 = mismatch(x0);
        double f1 = mismatch(x1);
        for (int it = 0; it < 60; ++it) {
            if (std::abs(f1) <= 1e-9 * scale) {
                ModeParams out = params;
                out.delta_w = x1;
                return out;
            }
            if (f1 == f0) break;
            const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = mismatch(x1);
        }
    } catch (const PerturbationError& e) {
        throw NumericError(std::string("tune_delta_w: ") + e.what() +
                           "; set delta_w_hz manually");
    }
    throw NumericError(
        "tune_delta_w: secant iteration on delta_w did not converge; set "
        "delta_w_hz manually");
}

} // namespace ospring
