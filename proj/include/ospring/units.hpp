#ifndef OSPRING_UNITS_HPP
#define OSPRING_UNITS_HPP

namespace ospring {

// Physical constants (SI).
inline constexpr double kSpeedOfLight = 299'792'458.0;       // m/s
inline constexpr double kHbar         = 1.054571817e-34;     // J s
inline constexpr double kTwoPi        = 6.283185307179586476925286766559;

// All user-facing frequencies are ordinary frequencies in Hz; everything
// internal is angular (rad/s). Conversion happens at the boundary only.
inline constexpr double hz_to_rad(double f_hz) { return kTwoPi * f_hz; }
inline constexpr double rad_to_hz(double w) { return w / kTwoPi; }

// Laser angular frequency from vacuum wavelength in nanometres.
inline constexpr double omega_from_wavelength_nm(double nm) {
    return kTwoPi * kSpeedOfLight / (nm * 1e-9);
}

} // namespace ospring

#endif // OSPRING_UNITS_HPP
