#include "ospring/batch.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "delta_hz") return SweepParam::DeltaHz;
    if (name == "gamma_w_hz") return SweepParam::GammaWHz;
    if (name == "gamma_s_hz") return SweepParam::GammaSHz;
    if (name == "delta_w_hz") return SweepParam::DeltaWHz;
    if (name == "delta_s_hz") return SweepParam::DeltaSHz;
    if (name == "circulating_power_w") return SweepParam::CirculatingPowerW;
    throw ConfigError("param", "unknown sweep parameter '" + name + "'");
}

std::string sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::DeltaHz: return "delta_hz";
        case SweepParam::GammaWHz: return "gamma_w_hz";
        case SweepParam::GammaSHz: return "gamma_s_hz";
        case SweepParam::DeltaWHz: return "delta_w_hz";
        case SweepParam::DeltaSHz: return "delta_s_hz";
        case SweepParam::CirculatingPowerW: return "circulating_power_w";
    }
    return "delta_hz";
}

ModeParams apply_sweep_value(ModeParams params, SweepParam p, double value) {
    switch (p) {
        case SweepParam::DeltaHz: params.delta_arm = hz_to_rad(value); break;
        case SweepParam::GammaWHz: params.gamma_w = hz_to_rad(value); break;
        case SweepParam::GammaSHz: params.gamma_s = hz_to_rad(value); break;
        case SweepParam::DeltaWHz: params.delta_w = hz_to_rad(value); break;
        case SweepParam::DeltaSHz: params.delta_s = hz_to_rad(value); break;
        case SweepParam::CirculatingPowerW: params.circ_power = value; break;
    }
    return params;
}

namespace {

SweepPoint evaluate_point(const ModeParams& base, SweepParam p, double value) {
    SweepPoint point;
    point.value = value;
    try {
        const ModeParams params = apply_sweep_value(base, p, value);
        const auto coeffs = derive_coefficients(params);
        const auto report = solve_roots(characteristic_polynomial(coeffs));
        point.max_real = report.max_real;
        point.stable = report.stable;
        point.rh_stable = report.rh_stable;
        point.status = "ok";
        try {
            (void)zero_order_roots(coeffs);
        } catch (const PerturbationError& e) {
            using Reason = PerturbationError::Reason;
            switch (e.reason()) {
                case Reason::ComplexP: point.status = "complex-p"; break;
                case Reason::DoubleResonance:
                    point.status = "double-resonance";
                    break;
                default: point.status = "out-of-regime"; break;
            }
        }
    } catch (const std::exception& e) {
        point.max_real = std::numeric_limits<double>::quiet_NaN();
        point.stable = false;
        point.rh_stable = false;
        point.status = std::string("error: ") + e.what();
    }
    return point;
}

} // namespace

std::vector<SweepPoint> sweep_stability_serial(const ModeParams& base,
                                               SweepParam p,
                                               std::span<const double> values) {
    std::vector<SweepPoint> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = evaluate_point(base, p, values[i]);
    return out;
}

std::vector<SweepPoint> sweep_stability(const ModeParams& base, SweepParam p,
                                        std::span<const double> values) {
    std::vector<SweepPoint> out(values.size());
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = evaluate_point(base, p, values[i]);
    return out;
}

std::vector<SusceptibilitySample> susceptibility_grid_serial(
    const DerivedCoefficients& c, std::span<const double> omega_grid) {
    std::vector<SusceptibilitySample> out(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i)
        out[i] = susceptibility_at(c, omega_grid[i]);
    return out;
}

std::vector<SusceptibilitySample> susceptibility_grid(
    const DerivedCoefficients& c, std::span<const double> omega_grid) {
    std::vector<SusceptibilitySample> out(omega_grid.size());
    const std::int64_t n = static_cast<std::int64_t>(omega_grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = susceptibility_at(c, omega_grid[i]);
    return out;
}

CharPoly random_quadratic_product(std::uint64_t seed, bool* stable_truth) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Three quadratics (l^2 + 2a l + a^2 + b^2): conjugate pair at -a +- ib,
    // or a double real root when b = 0. Unstable when any a < 0.
    bool stable = true;
    std::array<double, 7> coeffs{};
    coeffs[0] = 1.0;
    int degree = 0;
    const double scale = std::exp(std::log(0.1) +
                                  unit(rng) * (std::log(10.0) - std::log(0.1)));
    for (int q = 0; q < 3; ++q) {
        const double mag =
            scale * std::exp(std::log(1e-2) +
                             unit(rng) * (std::log(3.0) - std::log(1e-2)));
        const double a = (unit(rng) < 0.4 ? -1.0 : 1.0) * mag;
        const double b = unit(rng) < 0.15 ? 0.0 : scale * 3.0 * unit(rng);
        if (a < 0.0) stable = false;

        const std::array<double, 3> quad{a * a + b * b, 2.0 * a, 1.0};
        std::array<double, 7> next{};
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; j < 3; ++j) next[i + j] += coeffs[i] * quad[j];
        coeffs = next;
        degree += 2;
    }
    if (stable_truth) *stable_truth = stable;

    CharPoly poly;
    poly.coeffs = coeffs;
    return poly;
}

namespace {

void tally_one(std::uint64_t seed, double band, AgreementStats& stats) {
    CharPoly poly = random_quadratic_product(seed, nullptr);
    const RootReport report = solve_roots(poly);
    double max_mag = 0.0;
    for (const auto& z : report.roots) max_mag = std::max(max_mag, std::abs(z));
    ++stats.total;
    if (std::abs(report.max_real) <= band * max_mag) {
        ++stats.near_marginal;
        return;
    }
    if (report.stable == report.rh_stable)
        ++stats.agreed;
    else
        ++stats.disagreed;
}

} // namespace

AgreementStats verify_agreement_serial(std::size_t count, std::uint64_t seed,
                                       double band) {
    AgreementStats stats;
    for (std::size_t i = 0; i < count; ++i)
        tally_one(seed + i, band, stats);
    return stats;
}

AgreementStats verify_agreement(std::size_t count, std::uint64_t seed,
                                double band) {
    AgreementStats stats;
    const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel
    {
        AgreementStats local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i)
            tally_one(seed + static_cast<std::uint64_t>(i), band, local);
#pragma omp critical
        {
            stats.total += local.total;
            stats.agreed += local.agreed;
            stats.near_marginal += local.near_marginal;
            stats.disagreed += local.disagreed;
        }
    }
    return stats;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(n - 1));
    return out;
}

} // namespace ospring
