#pragma once

#include <numbers>

namespace cpspdc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Speed of light in nm/ps.
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;
/// Speed of light in m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

inline constexpr double nm_to_um(double nm) { return nm * 1e-3; }
inline constexpr double mm_to_um(double mm) { return mm * 1e3; }

/// Angular frequency in rad/ps for a vacuum wavelength in nm.
inline constexpr double angular_frequency(double wavelength_nm) {
  return kTwoPi * kSpeedOfLightNmPerPs / wavelength_nm;
}

inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace cpspdc
