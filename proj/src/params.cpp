#include "ospring/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "ospring/errors.hpp"
#include "ospring/units.hpp"

namespace ospring {

namespace {

std::string trim(std::string_view s) {
    const auto* first = s.begin();
    const auto* last = s.end();
    while (first != last && std::isspace(static_cast<unsigned char>(*first)))
        ++first;
    while (last != first && std::isspace(static_cast<unsigned char>(last[-1])))
        --last;
    return std::string(first, last);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string topology_name(Topology t) {
    switch (t) {
        case Topology::Aligo: return "aligo";
        case Topology::Michelson: return "michelson";
        case Topology::Msi: return "msi";
    }
    return "aligo";
}

Topology parse_topology(std::string_view name) {
    const std::string n = lower(trim(name));
    if (n == "aligo") return Topology::Aligo;
    if (n == "michelson") return Topology::Michelson;
    if (n == "msi") return Topology::Msi;
    throw ConfigError("topology", "unknown topology '" + n +
                                      "' (expected aligo, michelson or msi)");
}

double ModeParams::wave_vector() const { return omega0 / kSpeedOfLight; }
double ModeParams::one_way_time() const { return arm_length / kSpeedOfLight; }

void ModeParams::validate() const {
    if (!(gamma_w > 0.0)) throw ConfigError("gamma_w_hz", "must be positive");
    if (!(gamma_s > 0.0)) throw ConfigError("gamma_s_hz", "must be positive");
    if (!(mass > 0.0)) throw ConfigError("mass_kg", "must be positive");
    if (!(arm_length > 0.0))
        throw ConfigError("arm_length_m", "must be positive");
    if (!(circ_power >= 0.0))
        throw ConfigError("circulating_power_w", "must be non-negative");
    if (!(omega0 > 0.0)) throw ConfigError("wavelength_nm", "must be positive");
    if (!(r_z > 0.0 && r_z <= 1.0))
        throw ConfigError("rz", "must lie in (0, 1]");
    if (topology == Topology::Msi && !(r_z < 1.0))
        throw ConfigError("rz", "MSI topology requires rz < 1");
    if (topology != Topology::Msi && r_z != 1.0)
        throw ConfigError("rz", "only the MSI topology admits rz < 1");
    if (!std::isfinite(delta_w) || !std::isfinite(delta_s) ||
        !std::isfinite(delta_arm))
        throw ConfigError("delta_hz", "detunings must be finite");
}

namespace detail {

bool KeyValues::has(const std::string& key) const {
    return std::any_of(items.begin(), items.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

std::string KeyValues::get(const std::string& key) const {
    for (const auto& [k, v] : items)
        if (k == key) return v;
    throw ConfigError(key, "missing key");
}

double KeyValues::get_number(const std::string& key) const {
    const std::string raw = get(key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError(key, "not a finite number: '" + raw + "'");
    return v;
}

double KeyValues::get_number_or(const std::string& key,
                                double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

bool KeyValues::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = lower(get(key));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, "not a boolean: '" + v + "'");
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno),
                              "expected 'key = value', got '" + stripped + "'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno), "empty key");
        if (kv.has(key)) throw ConfigError(key, "duplicate key");
        kv.items.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

} // namespace detail

bool is_physical_config(const std::string& text) {
    const auto kv = detail::parse_key_values(text);
    return kv.has("t_arm") || kv.has("pump_power_w");
}

ModeParams load_config(const std::string& text) {
    const auto kv = detail::parse_key_values(text);

    static const std::set<std::string> known = {
        "topology",       "gamma_w_hz",          "gamma_s_hz",
        "delta_w_hz",     "delta_s_hz",          "delta_hz",
        "mass_kg",        "arm_length_m",        "circulating_power_w",
        "wavelength_nm",  "omega0_rad_s",        "rz",
        "frequencies_are_angular",
    };
    for (const auto& [k, v] : kv.items)
        if (!known.count(k))
            throw ConfigError(k, "unknown key for a mode-parameter config");

    ModeParams p;
    p.topology = parse_topology(kv.get("topology"));

    const bool angular = kv.get_bool_or("frequencies_are_angular", false);
    const auto freq = [&](const std::string& key) {
        const double v = kv.get_number(key);
        return angular ? v : hz_to_rad(v);
    };

    p.gamma_w = freq("gamma_w_hz");
    p.gamma_s = freq("gamma_s_hz");
    p.delta_w = freq("delta_w_hz");
    p.delta_s = freq("delta_s_hz");
    p.delta_arm = freq("delta_hz");
    p.mass = kv.get_number("mass_kg");
    p.arm_length = kv.get_number("arm_length_m");
    p.circ_power = kv.get_number("circulating_power_w");
    // omega0_rad_s (written by save_config) takes precedence so a saved
    // config reloads bit-exactly; wavelength_nm is the human-facing form.
    if (kv.has("omega0_rad_s"))
        p.omega0 = kv.get_number("omega0_rad_s");
    else
        p.omega0 =
            omega_from_wavelength_nm(kv.get_number_or("wavelength_nm", 1064.0));
    p.r_z = kv.get_number_or("rz", 1.0);

    p.validate();
    return p;
}

std::string save_config(const ModeParams& p) {
    // Angular values are written verbatim (frequencies_are_angular = true),
    // so a load() of the output reproduces the struct bit for bit.
    std::ostringstream out;
    out << "topology = " << topology_name(p.topology) << "\n"
        << "frequencies_are_angular = true\n"
        << "gamma_w_hz = " << fmt17(p.gamma_w) << "\n"
        << "gamma_s_hz = " << fmt17(p.gamma_s) << "\n"
        << "delta_w_hz = " << fmt17(p.delta_w) << "\n"
        << "delta_s_hz = " << fmt17(p.delta_s) << "\n"
        << "delta_hz = " << fmt17(p.delta_arm) << "\n"
        << "mass_kg = " << fmt17(p.mass) << "\n"
        << "arm_length_m = " << fmt17(p.arm_length) << "\n"
        << "circulating_power_w = " << fmt17(p.circ_power) << "\n"
        << "omega0_rad_s = " << fmt17(p.omega0) << "\n"
        << "rz = " << fmt17(p.r_z) << "\n";
    return out.str();
}

namespace {

ModeParams table_aligo(bool equal_decay) {
    ModeParams p;
    p.topology = Topology::Aligo;
    p.gamma_w = hz_to_rad(equal_decay ? 3.0 : 1.5);
    p.gamma_s = hz_to_rad(equal_decay ? 3.0 : 0.3);
    p.delta_w = hz_to_rad(-23.0);
    p.delta_s = hz_to_rad(42.4);
    p.delta_arm = hz_to_rad(equal_decay ? 4.6 : 1.51);
    p.mass = 40.0;
    p.arm_length = 4000.0;
    p.circ_power = 24e3;
    p.omega0 = omega_from_wavelength_nm(1064.0);
    p.r_z = 1.0;
    return p;
}

ModeParams table_msi(bool equal_decay) {
    ModeParams p;
    p.topology = Topology::Msi;
    p.gamma_w = hz_to_rad(equal_decay ? 10e3 : 5e3);
    p.gamma_s = hz_to_rad(equal_decay ? 10e3 : 1e3);
    p.delta_w = hz_to_rad(-77.2e3);
    p.delta_s = hz_to_rad(141.0e3);
    p.delta_arm = hz_to_rad(equal_decay ? 15e3 : 5e3);
    p.mass = 1e-10;
    p.arm_length = 0.087;
    p.circ_power = 0.318;
    p.omega0 = omega_from_wavelength_nm(1064.0);
    p.r_z = std::sqrt(0.17);
    return p;
}

} // namespace

ModeParams preset(std::string_view name) {
    const std::string n = lower(trim(name));
    ModeParams p;
    if (n == "aligo")
        p = table_aligo(false);
    else if (n == "aligo-equal")
        p = table_aligo(true);
    else if (n == "msi")
        p = table_msi(false);
    else if (n == "msi-equal")
        p = table_msi(true);
    else
        throw ConfigError("preset", "unknown preset '" + n + "'");
    p.validate();
    return p;
}

std::vector<std::string> preset_names() {
    return {"aligo", "aligo-equal", "msi", "msi-equal"};
}

} // namespace ospring
