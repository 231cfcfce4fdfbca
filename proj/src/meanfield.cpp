#include "ospring/meanfield.hpp"

#include <cmath>
#include <complex>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// Relative guard for denominators that can collapse.
constexpr double kSingularTol = 1e-12;

} // namespace

double PhysicalConfig::gamma_arm() const {
    return t_arm * t_arm / (4.0 * one_way_time());
}

double PhysicalConfig::one_way_time() const {
    return arm_length / kSpeedOfLight;
}

double PhysicalConfig::round_trip_time() const {
    return 2.0 * (arm_length + recycling_length) / kSpeedOfLight;
}

void PhysicalConfig::validate() const {
    if (topology == Topology::Aligo && !(t_arm > 0.0 && t_arm < 1.0))
        throw ConfigError("t_arm", "must lie in (0, 1)");
    // r = 0 is a removed recycling mirror; only r = 1 is excluded.
    if (!(r_w >= 0.0 && r_w < 1.0))
        throw ConfigError("r_w", "must lie in [0, 1)");
    if (!(r_s >= 0.0 && r_s < 1.0))
        throw ConfigError("r_s", "must lie in [0, 1)");
    if (!(arm_length > 0.0)) throw ConfigError("arm_length_m", "must be positive");
    if (!(recycling_length >= 0.0))
        throw ConfigError("recycling_length_m", "must be non-negative");
    if (!(pump_power >= 0.0))
        throw ConfigError("pump_power_w", "must be non-negative");
    if (!(mass > 0.0)) throw ConfigError("mass_kg", "must be positive");
    if (!(omega0 > 0.0)) throw ConfigError("wavelength_nm", "must be positive");
    if (!(r_z > 0.0 && r_z <= 1.0)) throw ConfigError("rz", "must lie in (0, 1]");
    if (topology == Topology::Msi && !(r_z < 1.0))
        throw ConfigError("rz", "MSI topology requires rz < 1");
}

std::vector<std::string> PhysicalConfig::warnings() const {
    std::vector<std::string> w;
    if (recycling_length >= arm_length / 100.0)
        w.push_back(
            "recycling_length_m: recycling cavity is not short against the "
            "arm (expected l < L/100); the long-wave closed forms degrade");
    return w;
}

namespace {

// Recycling-cavity response Gamma = gamma - i*delta for one mirror.
// theta_sq = exp(i * round-trip phase).
struct CavityResponse {
    double gamma;
    double delta;
};

CavityResponse recycling_response(double gamma_arm, double r, double phi,
                                  const char* key) {
    const Complex theta_sq = std::exp(kI * phi);
    const Complex denom = 1.0 - r * theta_sq;
    if (std::abs(denom) < kSingularTol)
        throw SingularityError(std::string(key) +
                               ": degenerate recycling cavity, |1 - R "
                               "exp(i phi)| below 1e-12");
    const double norm2 = std::norm(denom);
    CavityResponse out;
    out.gamma = gamma_arm * (1.0 - r * r) / norm2;
    out.delta = -2.0 * gamma_arm * r * std::sin(phi) / norm2;
    return out;
}

ModeParams passthrough(const PhysicalConfig& cfg) {
    ModeParams p;
    p.topology = cfg.topology;
    p.delta_arm = cfg.delta_arm;
    p.mass = cfg.mass;
    p.arm_length = cfg.arm_length;
    p.omega0 = cfg.omega0;
    p.r_z = cfg.r_z;
    return p;
}

} // namespace

ModeParams aligo_mode_params(const PhysicalConfig& cfg) {
    cfg.validate();
    const double gT = cfg.gamma_arm();
    const auto w = recycling_response(gT, cfg.r_w, cfg.phi_w, "phi_w_rad");
    const auto s = recycling_response(gT, cfg.r_s, cfg.phi_s, "phi_s_rad");

    ModeParams p = passthrough(cfg);
    p.gamma_w = w.gamma;
    p.delta_w = w.delta;
    p.gamma_s = s.gamma;
    p.delta_s = s.delta;
    return p;
}

ModeParams michelson_mode_params(const PhysicalConfig& cfg) {
    cfg.validate();
    if (cfg.r_w == 0.0 || cfg.r_s == 0.0)
        throw ConfigError("r_w", "the recycled-Michelson closed forms need "
                                 "both recycling mirrors present");
    const double tau_rt = cfg.round_trip_time();
    const auto response = [&](double r_abs, double phi) {
        const Complex r = r_abs * std::exp(kI * phi);
        const Complex gamma_cx = (1.0 - r) / (r * tau_rt);
        return CavityResponse{gamma_cx.real(), -gamma_cx.imag()};
    };
    const auto w = response(cfg.r_w, cfg.phi_w);
    const auto s = response(cfg.r_s, cfg.phi_s);

    ModeParams p = passthrough(cfg);
    p.gamma_w = w.gamma;
    p.delta_w = w.delta;
    p.gamma_s = s.gamma;
    p.delta_s = s.delta;
    return p;
}

ModeParams msi_mode_params(const PhysicalConfig& cfg) {
    cfg.validate();
    if (cfg.r_z >= 1.0)
        throw ConfigError("rz",
                          "rz = 1 is a plain Michelson; use the aligo or "
                          "michelson topology instead");
    if (cfg.r_w == 0.0 || cfg.r_s == 0.0)
        throw ConfigError("r_w", "the Michelson-Sagnac closed forms need "
                                 "both recycling mirrors present");
    const double t_z = std::sqrt(1.0 - cfg.r_z * cfg.r_z);
    const double tau_rt = cfg.round_trip_time();

    // r~_w = r_w (R_z + i T_z), r~_s = r_s (R_z - i T_z); the membrane
    // phase-dresses the two recycling cavities with opposite signs.
    const auto response = [&](double r_abs, double phi, double tz_sign) {
        const Complex dressed =
            r_abs * std::exp(kI * phi) * Complex(cfg.r_z, tz_sign * t_z);
        const Complex gamma_cx = (1.0 - dressed) / (dressed * tau_rt);
        return CavityResponse{gamma_cx.real(), -gamma_cx.imag()};
    };
    const auto w = response(cfg.r_w, cfg.phi_w, +1.0);
    const auto s = response(cfg.r_s, cfg.phi_s, -1.0);

    ModeParams p = passthrough(cfg);
    p.topology = Topology::Msi;
    p.gamma_w = w.gamma;
    p.delta_w = w.delta;
    p.gamma_s = s.gamma;
    p.delta_s = s.delta;
    return p;
}

MeanFields mean_fields(const PhysicalConfig& cfg, const ModeParams& params) {
    cfg.validate();
    if (cfg.topology != Topology::Aligo)
        throw ConfigError("topology",
                          "mean_fields is defined for the aligo topology; "
                          "set circulating_power_w directly otherwise");

    const double tau = cfg.one_way_time();
    const double delta = params.delta_arm;
    const Complex gamma_w_cx(params.gamma_w, -params.delta_w);
    const Complex gamma_s_cx(params.gamma_s, -params.delta_s);

    const Complex denom = gamma_s_cx * gamma_w_cx + delta * delta;
    const double denom_scale =
        std::abs(gamma_s_cx) * std::abs(gamma_w_cx) + delta * delta;
    if (std::abs(denom) < kSingularTol * denom_scale)
        throw SingularityError(
            "mean_fields: |Gamma_s Gamma_w + delta^2| vanishes (resonance "
            "singularity)");

    // Exact phase of the pump after the recycling cavity:
    // exp(i alpha_w) = Theta_w |1 - R_w Theta_w^2| / (1 - R_w Theta_w^2).
    const Complex theta_w = std::exp(kI * (cfg.phi_w / 2.0));
    const Complex one_minus = 1.0 - cfg.r_w * theta_w * theta_w;
    const Complex phase_w = theta_w * std::abs(one_minus) / one_minus;

    const double a_p = std::sqrt(cfg.pump_power / (kHbar * cfg.omega0));
    const Complex common =
        std::sqrt(params.gamma_w / tau) * a_p * phase_w / denom;

    MeanFields f;
    f.e_plus = common * gamma_s_cx;
    f.e_minus = common * (kI * delta);
    f.i_plus = kHbar * cfg.omega0 * std::norm(f.e_plus);
    f.i_minus = kHbar * cfg.omega0 * std::norm(f.e_minus);
    f.i_out = 2.0 * params.gamma_s * tau * f.i_minus;
    return f;
}

MeanFields output_power_estimate(const ModeParams& params) {
    const Complex gamma_s_cx(params.gamma_s, -params.delta_s);
    const Complex xi = kI * params.delta_arm / gamma_s_cx;

    MeanFields f;
    f.e_plus = std::sqrt(params.circ_power / (kHbar * params.omega0));
    f.e_minus = xi * f.e_plus;
    f.i_plus = params.circ_power;
    f.i_minus = std::norm(xi) * params.circ_power;
    f.i_out = 2.0 * params.gamma_s * params.one_way_time() * f.i_minus;
    return f;
}

ModeParams to_mode_params(const PhysicalConfig& cfg) {
    switch (cfg.topology) {
        case Topology::Aligo: {
            ModeParams p = aligo_mode_params(cfg);
            p.circ_power = mean_fields(cfg, p).i_plus;
            p.validate();
            return p;
        }
        case Topology::Michelson: {
            ModeParams p = michelson_mode_params(cfg);
            p.circ_power = cfg.circ_power;
            p.validate();
            return p;
        }
        case Topology::Msi: {
            ModeParams p = msi_mode_params(cfg);
            p.circ_power = cfg.circ_power;
            p.validate();
            return p;
        }
    }
    throw ConfigError("topology", "unhandled topology");
}

PhysicalConfig load_physical_config(const std::string& text) {
    const auto kv = detail::parse_key_values(text);

    PhysicalConfig cfg;
    cfg.topology = parse_topology(kv.get("topology"));
    cfg.t_arm = cfg.topology == Topology::Aligo ? kv.get_number("t_arm")
                                                : kv.get_number_or("t_arm", 0.0);
    cfg.r_w = kv.get_number("r_w");
    cfg.r_s = kv.get_number("r_s");
    cfg.phi_w = kv.get_number("phi_w_rad");
    cfg.phi_s = kv.get_number("phi_s_rad");
    cfg.arm_length = kv.get_number("arm_length_m");
    cfg.recycling_length = kv.get_number_or("recycling_length_m", 0.0);
    cfg.pump_power = kv.get_number("pump_power_w");
    cfg.mass = kv.get_number("mass_kg");

    const bool angular = kv.get_bool_or("frequencies_are_angular", false);
    const double delta = kv.get_number("delta_hz");
    cfg.delta_arm = angular ? delta : hz_to_rad(delta);
    cfg.omega0 = omega_from_wavelength_nm(kv.get_number_or("wavelength_nm", 1064.0));
    cfg.r_z = kv.get_number_or("rz", 1.0);
    cfg.circ_power = kv.get_number_or("circulating_power_w", 0.0);

    cfg.validate();
    return cfg;
}

} // namespace ospring
