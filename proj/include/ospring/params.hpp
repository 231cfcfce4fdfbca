#ifndef OSPRING_PARAMS_HPP
#define OSPRING_PARAMS_HPP

#include <string>
#include <string_view>
#include <vector>

namespace ospring {

enum class Topology { Aligo, Michelson, Msi };

std::string topology_name(Topology t);
Topology parse_topology(std::string_view name);

// Effective per-mode description consumed by the characteristic equation:
// two partial optical modes (pumped/symmetric "w", signal/antisymmetric "s"),
// an arm detuning coupling them, and the mechanics they drive.
//
// All rates and detunings are angular (rad/s); loaders convert from Hz.
struct ModeParams {
    Topology topology = Topology::Aligo;

    double gamma_w = 0.0;     // decay rate of symmetric mode [rad/s]
    double gamma_s = 0.0;     // decay rate of antisymmetric mode [rad/s]
    double delta_w = 0.0;     // symmetric-mode detuning [rad/s]
    double delta_s = 0.0;     // antisymmetric-mode detuning [rad/s]
    double delta_arm = 0.0;   // arm detuning [rad/s]
    double mass = 0.0;        // mirror / membrane mass [kg]
    double arm_length = 0.0;  // L [m]
    double circ_power = 0.0;  // power circulating in symmetric mode [W]
    double omega0 = 0.0;      // laser angular frequency [rad/s]
    double r_z = 1.0;         // middle-mirror amplitude reflectivity, (0,1]

    // m/2 for the differential mode of two arm mirrors, m for a membrane.
    double reduced_mass() const {
        return topology == Topology::Msi ? mass : mass / 2.0;
    }
    double wave_vector() const;       // k = omega0 / c  [1/m]
    double one_way_time() const;      // tau = L / c  [s]

    // Throws ConfigError naming the offending key on any violated invariant.
    void validate() const;
};

// Built-in parameter tables. Known names: aligo, aligo-equal, msi, msi-equal
// ("-equal" picks the equal-decay variants of the tables).
ModeParams preset(std::string_view name);
std::vector<std::string> preset_names();

// Flat key/value config text ("key = value" lines, '#' comments).
// Frequencies are Hz unless frequencies_are_angular is set.
ModeParams load_config(const std::string& text);
std::string save_config(const ModeParams& p);

// True when the text looks like a hardware description (meanfield keys)
// rather than a ModeParams document.
bool is_physical_config(const std::string& text);

namespace detail {
// Shared by both config loaders.
struct KeyValues {
    std::vector<std::pair<std::string, std::string>> items;
    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;          // throws if absent
    double get_number(const std::string& key) const;
    double get_number_or(const std::string& key, double fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
};
KeyValues parse_key_values(const std::string& text);
} // namespace detail

} // namespace ospring

#endif // OSPRING_PARAMS_HPP
