#pragma once

namespace wdn::units {

inline constexpr double kPascalPerPsi = 6894.757;
inline constexpr double kWaterDensity = 1000.0;  // kg/m^3
inline constexpr double kGravity = 9.80665;      // m/s^2
// Meters of water column per psi (~0.70307).
inline constexpr double kMetersPerPsi = kPascalPerPsi / (kWaterDensity * kGravity);

inline constexpr double kMetersPerFoot = 0.3048;
inline constexpr double kMetersPerInch = 0.0254;
inline constexpr double kCubicMetersPerGallon = 0.003785411784;
inline constexpr double kCmsPerGpm = kCubicMetersPerGallon / 60.0;

double psi_to_head_m(double psi);
double head_m_to_psi(double meters);

}  // namespace wdn::units
