#ifndef OSPRING_MEANFIELD_HPP
#define OSPRING_MEANFIELD_HPP

#include <complex>
#include <string>
#include <vector>

#include "ospring/params.hpp"

namespace ospring {

// Raw hardware description: mirror transmittances/reflectivities, cavity
// geometry and pump. Everything the effective-mode closed forms need.
struct PhysicalConfig {
    Topology topology = Topology::Aligo;

    double t_arm = 0.0;             // arm input-mirror amplitude transmittance
    double r_w = 0.0;               // PRM amplitude reflectivity
    double r_s = 0.0;               // SRM amplitude reflectivity
    double phi_w = 0.0;             // PR cavity round-trip phase [rad]
    double phi_s = 0.0;             // SR cavity round-trip phase [rad]
    double arm_length = 0.0;        // L [m]
    double recycling_length = 0.0;  // l [m]
    double pump_power = 0.0;        // |A_p|^2 * hbar*omega0 [W]
    double mass = 0.0;              // [kg]
    double delta_arm = 0.0;         // arm detuning [rad/s]
    double omega0 = 0.0;            // [rad/s]
    double r_z = 1.0;               // membrane amplitude reflectivity (MSI)
    double circ_power = 0.0;        // optional override [W]; the ALIGO path
                                    // computes it from the mean fields

    double gamma_arm() const;        // gamma_T = T^2 / (4 tau)
    double one_way_time() const;     // tau = L / c
    double round_trip_time() const;  // tau' = 2 (L + l) / c

    void validate() const;
    // Soft checks (e.g. l << L) that do not reject the config.
    std::vector<std::string> warnings() const;
};

struct MeanFields {
    std::complex<double> e_plus{};   // symmetric-mode amplitude [sqrt(1/s)]
    std::complex<double> e_minus{};  // antisymmetric-mode amplitude
    double i_plus = 0.0;             // circulating power, symmetric [W]
    double i_minus = 0.0;            // circulating power, antisymmetric [W]
    double i_out = 0.0;              // mean output power at signal port [W]
};

// Effective mode parameters of the dual-recycled Fabry-Perot topology from
// the complex recycling-cavity response; circ_power is left at zero until
// mean_fields fills it.
ModeParams aligo_mode_params(const PhysicalConfig& cfg);

// Michelson without arm cavities: Gamma = (1 - r) / (r tau') exactly.
ModeParams michelson_mode_params(const PhysicalConfig& cfg);

// Michelson-Sagnac: recycling response dressed by the membrane,
// r~_w = r_w (R_z + i T_z), r~_s = r_s (R_z - i T_z). Requires r_z < 1.
ModeParams msi_mode_params(const PhysicalConfig& cfg);

// Mean circulating fields for the pumped (no dark-port drive) interferometer
// and the derived powers. ALIGO topology only.
MeanFields mean_fields(const PhysicalConfig& cfg, const ModeParams& params);

// Same powers when only mode-level parameters are known: |E-/E+| = |xi|,
// output amplitude sqrt(2 gamma_s tau) E-.
MeanFields output_power_estimate(const ModeParams& params);

// Dispatch on cfg.topology; fills circ_power for the ALIGO path.
ModeParams to_mode_params(const PhysicalConfig& cfg);

// Hardware config document (keys t_arm, r_w, r_s, phi_w_rad, ...).
PhysicalConfig load_physical_config(const std::string& text);

} // namespace ospring

#endif // OSPRING_MEANFIELD_HPP
