// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ospring/batch.hpp"
#include "ospring/dynamics.hpp"
#include "ospring/errors.hpp"
#include "ospring/meanfield.hpp"
#include "ospring/params.hpp"
#include "ospring/stability.hpp"
#include "ospring/units.hpp"

using namespace ospring;
using C = std::complex<double>;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool passed,
            const std::string& details) {
    std::printf("[%s] criterion %2d: %s — %s\n", passed ? "PASS" : "FAIL",
                number, name.c_str(), details.c_str());
    if (!passed) ++g_failures;
}

double pipeline_ms(const ModeParams& p) {
    using clock = std::chrono::steady_clock;
    double best = 1e30;
    for (int i = 0; i < 3; ++i) {
        const auto t0 = clock::now();
        (void)analyze_roots(p);
        const auto t1 = clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

std::string stability_line(const char* name, const RootReport& r,
                           double ms) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: max Re = %+.6g rad/s (%s, %.2f ms)",
                  name, r.max_real, r.stable ? "stable" : "UNSTABLE", ms);
    return buf;
}

// Criterion 1/2: all-stable root sets for the published tables, < 10 ms.
void table_criterion(int number, const char* label,
                     const std::vector<std::string>& names) {
    bool pass = true;
    std::string details;
    for (const auto& name : names) {
        const ModeParams p = preset(name);
        const RootReport r = analyze_roots(p);
        const double ms = pipeline_ms(p);
        pass = pass && r.stable && ms < 10.0;
        if (!details.empty()) details += "; ";
        details += stability_line(name.c_str(), r, ms);
        if (!r.stable) {
            // Supplementary diagnostic: the same table point at the
            // laser-cooling-like working point td_w = -delta1 that the
            // detuning bound assumes.
            try {
                const RootReport t = analyze_roots(tune_delta_w(p, 0.0));
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              " [retuned td_w=-delta1: max Re = %+.6g, %s]",
                              t.max_real, t.stable ? "stable" : "unstable");
                details += buf;
            } catch (const std::exception&) {
                details += " [retuning unavailable]";
            }
        }
    }
    report(number, label, pass, details);
}

void criterion3_instability_anchor() {
    bool pass = true;
    std::string details;
    for (const auto& name : preset_names()) {
        ModeParams p = preset(name);
        p.delta_arm = 0.0;
        const RootReport r = analyze_roots(p);
        const bool has_positive = r.max_real > 0.0;
        pass = pass && has_positive;
        char buf[80];
        std::snprintf(buf, sizeof buf, "%s: max Re = %+.4g", name.c_str(),
                      r.max_real);
        if (!details.empty()) details += "; ";
        details += buf;
    }
    report(3, "single-spring instability at zero arm detuning", pass, details);
}

void criterion4_agreement() {
    const AgreementStats s = verify_agreement(10000, 20250808ULL, 1e-6);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%zu/%zu agreed, %zu near-marginal (reported, not failed), "
                  "%zu disagreed",
                  s.agreed, s.total, s.near_marginal, s.disagreed);
    report(4, "Routh-Hurwitz vs root-solver on 10^4 random polynomials",
           s.disagreed == 0 && s.total == 10000, buf);
}

void criterion5_perturbation() {
    // (a) zero-order closed forms vs numeric roots of the exactly expanded
    // zero-order factorization, 1e-9 relative, 1000 draws, p in (0.05,0.95).
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int done = 0;
    double worst = 0.0;
    while (done < 1000) {
        DerivedCoefficients c{};
        const double scale = std::pow(10.0, 1.0 + 4.0 * unit(rng));
        c.td_s = scale * (0.5 + unit(rng));
        c.tg_s = c.td_s * (0.002 + 0.15 * unit(rng));
        c.td_w = scale * (0.3 + 1.2 * unit(rng)) * (unit(rng) < 0.5 ? -1 : 1);
        c.tg_w = std::abs(c.td_w) * (0.002 + 0.15 * unit(rng));
        c.alpha1 = (unit(rng) - 0.5) / c.td_s;
        const double p_target = 0.05 + 0.9 * unit(rng);
        const double s2 = c.tg_s * c.tg_s + c.td_s * c.td_s;
        c.i1 = (1.0 - p_target * p_target) * s2 * s2 /
               (4.0 * (1.0 + c.alpha1 * c.tg_s));
        c.mu = 1.0;

        const PerturbativeRoots z = zero_order_roots(c);
        double min_gap = 1e300, max_mag = 0.0;
        for (int a = 0; a < 6; ++a) {
            max_mag = std::max(max_mag, std::abs(z.zero_order[a]));
            for (int b = a + 1; b < 6; ++b)
                min_gap = std::min(min_gap,
                                   std::abs(z.zero_order[a] - z.zero_order[b]));
        }
        if (min_gap < 0.02 * max_mag) continue;  // resample colliding clusters
        ++done;

        // Expand [(l-g1)^2+d1^2][(l-g3)^2+d3^2][(l+tg_w)^2+td_w^2].
        const std::array<std::array<double, 3>, 3> quads = {
            {{z.gamma1 * z.gamma1 + z.delta1 * z.delta1, -2.0 * z.gamma1, 1.0},
             {z.gamma3 * z.gamma3 + z.delta3 * z.delta3, -2.0 * z.gamma3, 1.0},
             {c.tg_w * c.tg_w + c.td_w * c.td_w, 2.0 * c.tg_w, 1.0}}};
        std::array<double, 7> acc{};
        acc[0] = 1.0;
        int deg = 0;
        for (const auto& q : quads) {
            std::array<double, 7> next{};
            for (int i = 0; i <= deg; ++i)
                for (int j = 0; j < 3; ++j) next[i + j] += acc[i] * q[j];
            acc = next;
            deg += 2;
        }
        CharPoly poly;
        poly.coeffs = acc;
        const RootReport r = solve_roots(poly);

        std::array<bool, 6> used{};
        for (const auto& e : z.zero_order) {
            double best = 1e300;
            int bi = -1;
            for (int i = 0; i < 6; ++i) {
                if (used[i]) continue;
                const double d = std::abs(r.roots[i] - e);
                if (d < best) {
                    best = d;
                    bi = i;
                }
            }
            used[bi] = true;
            worst = std::max(worst, best / std::abs(e));
        }
    }
    const bool zero_ok = worst < 1e-9;

    // (b) first-order real-part signs vs the exact roots, per preset.
    bool signs_ok = true;
    std::string sign_details;
    for (const auto& name : preset_names()) {
        const ModeParams p = preset(name);
        const auto c = derive_coefficients(p);
        const PerturbativeRoots fo = first_order_roots(c, zero_order_roots(c));
        const RootReport exact = analyze_roots(p);
        bool preset_ok = true;
        for (const auto& approx : fo.first_order) {
            double best = 1e300;
            C nearest{};
            for (const auto& z : exact.roots) {
                const double d = std::abs(z - approx);
                if (d < best) {
                    best = d;
                    nearest = z;
                }
            }
            if (std::signbit(approx.real()) != std::signbit(nearest.real()))
                preset_ok = false;
        }
        signs_ok = signs_ok && preset_ok;
        if (!sign_details.empty()) sign_details += ", ";
        sign_details += name + (preset_ok ? ": signs match" : ": SIGN MISMATCH");
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "zero-order worst mismatch %.2e (limit 1e-9); first-order: %s",
                  worst, sign_details.c_str());
    report(5, "perturbation-theory consistency", zero_ok && signs_ok, buf);
}

void criterion6_min_detuning() {
    struct Row {
        const char* name;
        double table_hz;
    };
    const Row rows[] = {{"aligo", 1.51}, {"aligo-equal", 4.6}, {"msi", 5e3}};
    bool pass = true;
    std::string details;
    for (const auto& row : rows) {
        const ModeParams p = preset(row.name);
        const double bound = min_detuning(derive_coefficients(p));

        // Bisection bracket per the documented protocol [0, table]; if both
        // ends share a verdict, widen upward until the verdict flips.
        double hi = p.delta_arm;
        double star = std::nan("");
        for (int attempt = 0; attempt < 9; ++attempt) {
            try {
                star = stability_boundary(p, 0.0, hi);
                break;
            } catch (const BracketError&) {
                hi *= 2.0;
            }
        }
        const double table = hz_to_rad(row.table_hz);
        const double r_star = star > 0.0 ? std::max(bound / star, star / bound)
                                         : 1e300;
        const double r_table = std::max(bound / table, table / bound);
        pass = pass && r_star <= 2.0 && r_table <= 2.0;
        char buf[220];
        std::snprintf(buf, sizeof buf,
                      "%s: bound %.4g Hz, boundary %.4g Hz (x%.2f), table %.4g "
                      "Hz (x%.2f)",
                      row.name, rad_to_hz(bound), rad_to_hz(star), r_star,
                      row.table_hz, r_table);
        if (!details.empty()) details += "; ";
        details += buf;
        if (r_star > 2.0) {
            // Diagnostic: the boundary of the retuned (td_w = -delta1)
            // configuration, which is what the bound actually estimates.
            try {
                const auto tuned_verdict = [&](double delta) {
                    ModeParams q = p;
                    q.delta_arm = delta;
                    return analyze_roots(tune_delta_w(q, 0.0)).stable;
                };
                double lo = 1e-3 * p.delta_arm, thi = p.delta_arm;
                while (!tuned_verdict(thi)) thi *= 2.0;
                while (tuned_verdict(lo)) lo *= 0.5;
                while (thi - lo > 1e-4 * thi) {
                    const double mid = 0.5 * (lo + thi);
                    (tuned_verdict(mid) ? thi : lo) = mid;
                }
                std::snprintf(buf, sizeof buf,
                              " [retuned boundary %.4g Hz (x%.2f)]",
                              rad_to_hz(thi),
                              std::max(bound / thi, thi / bound));
                details += buf;
            } catch (const std::exception&) {
                details += " [retuned boundary unavailable]";
            }
        }
    }
    report(6, "minimal-detuning bound within factor 2", pass, details);
}

void criterion7_susceptibility_shape() {
    const ModeParams p = preset("aligo");
    const auto c = derive_coefficients(p);
    const auto grid = linspace(hz_to_rad(1.0), hz_to_rad(100.0), 60000);
    const auto samples = susceptibility_grid(c, grid);
    // Resonance peaks: the shallow post-notch recovery bumps sit three
    // decades below the resonances and are excluded by the height floor.
    const auto peaks = find_peaks(samples, 1e-3);

    // Two least-damped conjugate pairs: roots are sorted by descending real
    // part with conjugates adjacent, so pairs (0,1) and (2,3) lead.
    const RootReport r = analyze_roots(p);
    std::vector<double> expected{std::abs(r.roots[0].imag()),
                                 std::abs(r.roots[2].imag())};
    std::sort(expected.begin(), expected.end());

    bool pass = peaks.size() == 2;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu resonance peaks", peaks.size());
    std::string details = buf;
    if (peaks.size() == 2) {
        std::vector<double> found{peaks[0].omega, peaks[1].omega};
        std::sort(found.begin(), found.end());
        for (int i = 0; i < 2; ++i) {
            const double rel = std::abs(found[i] - expected[i]) / expected[i];
            pass = pass && rel < 0.05;
            std::snprintf(buf, sizeof buf,
                          "; peak %.4g Hz vs |Im| %.4g Hz (%.2f%%)",
                          rad_to_hz(found[i]), rad_to_hz(expected[i]),
                          100.0 * rel);
            details += buf;
        }
    }
    report(7, "susceptibility two-peak shape matches the least-damped pairs",
           pass, details);
}

void criterion8_delta_steering() {
    // Figure-5 protocol on the equal-decay table point: that configuration
    // resolves the split resonance doublet, and the offset seesaws the two
    // peak heights.
    const ModeParams base = preset("aligo-equal");
    std::vector<double> ratios;
    std::string details;
    bool pass = true;
    for (double offset_hz : {-0.5, 0.0, 0.5}) {
        const ModeParams tuned = tune_delta_w(base, hz_to_rad(offset_hz));
        const auto c = derive_coefficients(tuned);
        const auto grid = linspace(hz_to_rad(10.0), hz_to_rad(45.0), 40000);
        const auto samples = susceptibility_grid(c, grid);
        const auto peaks = find_peaks(samples, 1e-3);
        if (peaks.size() != 2) {
            pass = false;
            details += "offset " + std::to_string(offset_hz) + ": " +
                       std::to_string(peaks.size()) + " peaks; ";
            continue;
        }
        const double ratio = peaks.front().height / peaks.back().height;
        ratios.push_back(ratio);
        char buf[64];
        std::snprintf(buf, sizeof buf, "r(%+.1f Hz) = %.3f; ", offset_hz, ratio);
        details += buf;
    }
    if (ratios.size() == 3) {
        const bool increasing = ratios[0] < ratios[1] && ratios[1] < ratios[2];
        const bool decreasing = ratios[0] > ratios[1] && ratios[1] > ratios[2];
        pass = pass && (increasing || decreasing);
        details += increasing ? "monotone increasing"
                              : (decreasing ? "monotone decreasing"
                                            : "NOT monotone");
    }
    report(8, "peak-height ratio steered monotonically by the offset", pass,
           details);
}

void criterion9_output_power() {
    const MeanFields f = output_power_estimate(preset("aligo-equal"));
    const bool pass = f.i_out > 0.003 && f.i_out < 0.3;
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "i_out = %.4g W vs 0.03 W reference (one order of magnitude)",
                  f.i_out);
    report(9, "signal-port output power for the equal-decay table", pass, buf);
}

void criterion10_identities() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_kappa = 0.0, worst_d = 0.0, worst_field = 0.0,
           worst_alpha = 0.0;
    bool degeneracies_ok = true;

    for (int i = 0; i < 1000; ++i) {
        // Random mode parameters in the physical regime.
        ModeParams p;
        p.topology = Topology::Aligo;
        const double scale = std::pow(10.0, 1.0 + 4.0 * unit(rng));
        p.delta_s = scale * (0.5 + unit(rng));
        p.delta_w = -scale * (0.2 + unit(rng));
        p.gamma_s = scale * (0.002 + 0.1 * unit(rng));
        p.gamma_w = scale * (0.002 + 0.1 * unit(rng));
        p.delta_arm = scale * 0.2 * unit(rng);
        p.mass = 40.0;
        p.arm_length = 4000.0;
        p.omega0 = omega_from_wavelength_nm(1064.0);
        p.circ_power = 1e3 * unit(rng);
        p.r_z = 1.0;

        const auto c = derive_coefficients(p);
        if (c.delta_eff != 0.0) {
            const C gw(p.gamma_w, -p.delta_w);
            const C alt = C(0.0, c.delta_eff) / (gw + c.lambda_minus);
            worst_kappa = std::max(worst_kappa,
                                   std::abs(c.kappa - alt) / std::abs(c.kappa));
        }
        worst_d = std::max(worst_d, std::abs(c.d - (1.0 + c.kappa * c.kappa)) /
                                        std::abs(c.d));

        // E- = xi E+ on a random hardware description.
        PhysicalConfig cfg;
        cfg.topology = Topology::Aligo;
        cfg.t_arm = 0.005 + 0.02 * unit(rng);
        cfg.r_w = 0.3 + 0.65 * unit(rng);
        cfg.r_s = 0.3 + 0.65 * unit(rng);
        cfg.phi_w = 0.8 * (unit(rng) - 0.5);
        cfg.phi_s = 0.8 * (unit(rng) - 0.5);
        cfg.arm_length = 4000.0;
        cfg.recycling_length = 10.0;
        cfg.pump_power = 1.0 + 10.0 * unit(rng);
        cfg.mass = 40.0;
        cfg.delta_arm = hz_to_rad(20.0 * (unit(rng) - 0.5));
        cfg.omega0 = omega_from_wavelength_nm(1064.0);
        const ModeParams mp = aligo_mode_params(cfg);
        const MeanFields f = mean_fields(cfg, mp);
        const C xi = C(0.0, mp.delta_arm) / C(mp.gamma_s, -mp.delta_s);
        if (std::abs(xi) > 0.0)
            worst_field = std::max(
                worst_field,
                std::abs(f.e_minus - xi * f.e_plus) / std::abs(xi * f.e_plus));

        // delta = 0 degeneracies.
        ModeParams q = p;
        q.delta_arm = 0.0;
        const auto c0 = derive_coefficients(q);
        degeneracies_ok = degeneracies_ok && c0.kappa == C(0.0, 0.0) &&
                          c0.xi == C(0.0, 0.0) && c0.i2 == 0.0 &&
                          c0.d == C(1.0, 0.0);

        // Equal decay rates kill the alpha coefficients.
        ModeParams e = p;
        e.gamma_w = e.gamma_s;
        const auto ce = derive_coefficients(e);
        worst_alpha = std::max({worst_alpha, std::abs(ce.alpha1) * ce.td_s,
                                std::abs(ce.alpha2) * std::abs(ce.td_w)});
    }

    const bool pass = worst_kappa < 1e-10 && worst_d < 1e-10 &&
                      worst_field < 1e-10 && worst_alpha < 1e-10 &&
                      degeneracies_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "worst: kappa dual %.1e, d identity %.1e, E-=xiE+ %.1e, "
                  "equal-decay alpha %.1e, degeneracies %s",
                  worst_kappa, worst_d, worst_field, worst_alpha,
                  degeneracies_ok ? "exact" : "VIOLATED");
    report(10, "algebraic identity suite at 1e-10", pass, buf);
}

} // namespace

int main() {
    std::puts("optical-spring stability acceptance suite");
    table_criterion(1, "published aLIGO table points are stable",
                    {"aligo", "aligo-equal"});
    table_criterion(2, "published MSI table points are stable",
                    {"msi", "msi-equal"});
    criterion3_instability_anchor();
    criterion4_agreement();
    criterion5_perturbation();
    criterion6_min_detuning();
    criterion7_susceptibility_shape();
    criterion8_delta_steering();
    criterion9_output_power();
    criterion10_identities();

    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
