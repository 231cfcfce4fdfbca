#include "ospring/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

AnalysisReport analyze(const ModeParams& params) {
    AnalysisReport report;
    report.params = params;
    report.coefficients = derive_coefficients(params);
    report.poly = characteristic_polynomial(report.coefficients);
    report.roots = solve_roots(report.poly);
    report.stable = report.roots.stable;
    report.fields = output_power_estimate(params);

    try {
        report.perturbative = first_order_roots(
            report.coefficients, zero_order_roots(report.coefficients));
        report.perturbative_status = "ok";
    } catch (const PerturbationError& e) {
        report.perturbative_status = e.what();
    }
    try {
        report.delta_min = min_detuning(report.coefficients);
        report.delta_min_status = "ok";
    } catch (const PerturbationError& e) {
        report.delta_min_status = e.what();
    }
    return report;
}

namespace {

json complex_json(const Complex& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

json params_json(const ModeParams& p) {
    return json{
        {"topology", topology_name(p.topology)},
        {"gamma_w_hz", rad_to_hz(p.gamma_w)},
        {"gamma_s_hz", rad_to_hz(p.gamma_s)},
        {"delta_w_hz", rad_to_hz(p.delta_w)},
        {"delta_s_hz", rad_to_hz(p.delta_s)},
        {"delta_hz", rad_to_hz(p.delta_arm)},
        {"mass_kg", p.mass},
        {"arm_length_m", p.arm_length},
        {"circulating_power_w", p.circ_power},
        {"omega0_rad_s", p.omega0},
        {"rz", p.r_z},
    };
}

json coefficients_json(const DerivedCoefficients& c) {
    return json{
        {"lambda_plus", complex_json(c.lambda_plus)},
        {"lambda_minus", complex_json(c.lambda_minus)},
        {"big_delta", complex_json(c.big_delta)},
        {"kappa", complex_json(c.kappa)},
        {"xi", complex_json(c.xi)},
        {"d", complex_json(c.d)},
        {"tg_w", c.tg_w},
        {"tg_s", c.tg_s},
        {"td_w", c.td_w},
        {"td_s", c.td_s},
        {"j_plus", c.j_plus},
        {"i1", c.i1},
        {"i2", c.i2},
        {"alpha1", c.alpha1},
        {"alpha2", c.alpha2},
        {"delta_eff", c.delta_eff},
        {"mu_kg", c.mu},
    };
}

json roots_json(const RootReport& r) {
    json roots = json::array();
    for (const auto& z : r.roots) roots.push_back(complex_json(z));
    json residuals = json::array();
    for (double v : r.residuals) residuals.push_back(v);
    return json{
        {"roots", roots},       {"residuals", residuals},
        {"max_real", r.max_real}, {"stable", r.stable},
        {"rh_stable", r.rh_stable}, {"rh_degenerate", r.rh_degenerate},
    };
}

json perturbative_json(const PerturbativeRoots& p) {
    json zero = json::array();
    for (const auto& z : p.zero_order) zero.push_back(complex_json(z));
    json first = json::array();
    for (const auto& z : p.first_order) first.push_back(complex_json(z));
    return json{
        {"p", p.p},
        {"beta1", p.beta1},
        {"gamma1", p.gamma1},
        {"delta1", p.delta1},
        {"gamma3", p.gamma3},
        {"delta3", p.delta3},
        {"zero_order", zero},
        {"b", complex_json(p.b)},
        {"first_order", first},
        {"im_b_warning", p.imb_warning},
        {"predicted_stable", p.predicted_stable},
    };
}

} // namespace

std::string to_json(const AnalysisReport& report) {
    json doc;
    doc["params"] = params_json(report.params);
    doc["coefficients"] = coefficients_json(report.coefficients);
    json coeffs = json::array();
    for (double c : report.poly.coeffs) coeffs.push_back(c);
    doc["char_poly"] = coeffs;
    doc["root_report"] = roots_json(report.roots);
    doc["perturbative_status"] = report.perturbative_status;
    if (report.perturbative)
        doc["perturbative"] = perturbative_json(*report.perturbative);
    doc["delta_min_status"] = report.delta_min_status;
    if (report.delta_min) doc["delta_min_hz"] = rad_to_hz(*report.delta_min);
    doc["output_power_w"] = report.fields.i_out;
    doc["signal_mode_power_w"] = report.fields.i_minus;
    doc["stable"] = report.stable;
    return doc.dump(2) + "\n";
}

std::string to_csv(const AnalysisReport& report) {
    std::ostringstream out;
    out << "key,value\n";
    const auto row = [&](const std::string& key, double v) {
        out << key << ',' << format_double(v) << '\n';
    };
    out << "topology," << topology_name(report.params.topology) << '\n';
    row("gamma_w_hz", rad_to_hz(report.params.gamma_w));
    row("gamma_s_hz", rad_to_hz(report.params.gamma_s));
    row("delta_w_hz", rad_to_hz(report.params.delta_w));
    row("delta_s_hz", rad_to_hz(report.params.delta_s));
    row("delta_hz", rad_to_hz(report.params.delta_arm));
    row("mass_kg", report.params.mass);
    row("arm_length_m", report.params.arm_length);
    row("circulating_power_w", report.params.circ_power);
    row("rz", report.params.r_z);
    for (int i = 0; i < 6; ++i) {
        row("root" + std::to_string(i + 1) + "_re",
            report.roots.roots[i].real());
        row("root" + std::to_string(i + 1) + "_im",
            report.roots.roots[i].imag());
    }
    row("max_real", report.roots.max_real);
    out << "stable," << (report.stable ? 1 : 0) << '\n';
    out << "rh_stable," << (report.roots.rh_stable ? 1 : 0) << '\n';
    out << "perturbative_status," << report.perturbative_status << '\n';
    if (report.perturbative) {
        row("p", report.perturbative->p);
        row("gamma1", report.perturbative->gamma1);
        row("delta1", report.perturbative->delta1);
        out << "predicted_stable,"
            << (report.perturbative->predicted_stable ? 1 : 0) << '\n';
    }
    if (report.delta_min) row("delta_min_hz", rad_to_hz(*report.delta_min));
    row("output_power_w", report.fields.i_out);
    return out.str();
}

std::string susceptibility_csv(std::span<const SusceptibilitySample> samples) {
    std::ostringstream out;
    out << "omega_rad_s,chi_re,chi_im,chi_abs\n";
    for (const auto& s : samples)
        out << format_double(s.omega) << ',' << format_double(s.chi.real())
            << ',' << format_double(s.chi.imag()) << ','
            << format_double(s.chi_abs) << '\n';
    return out.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
    std::ostringstream out;
    out << "value,max_real,stable,rh_stable,perturbative\n";
    for (const auto& p : points) {
        std::string status = p.status;
        for (auto& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        out << format_double(p.value) << ',' << format_double(p.max_real)
            << ',' << (p.stable ? 1 : 0) << ',' << (p.rh_stable ? 1 : 0) << ','
            << status << '\n';
    }
    return out.str();
}

} // namespace ospring
