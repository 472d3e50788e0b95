#pragma once

#include <numbers>

namespace pcfpair {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = std::numbers::pi;

/// Angular frequency (rad/s) of a vacuum wavelength given in nm.
inline double nm_to_omega(double lambda_nm) {
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-9);
}

inline double omega_to_nm(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega * 1e9;
}

/// Small-bandwidth conversion Δω = 2πc Δλ / λ².
inline double bandwidth_nm_to_omega(double dlambda_nm, double lambda_nm) {
  const double l = lambda_nm * 1e-9;
  return 2.0 * kPi * kSpeedOfLight * dlambda_nm * 1e-9 / (l * l);
}

inline double bandwidth_omega_to_nm(double domega, double lambda_nm) {
  const double l = lambda_nm * 1e-9;
  return domega * l * l / (2.0 * kPi * kSpeedOfLight) * 1e9;
}

}  // namespace pcfpair
