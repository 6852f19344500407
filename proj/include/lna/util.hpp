#pragma once

#include <cmath>
#include <complex>

namespace lna {

using Complex = std::complex<double>;

namespace constants {
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double electron_charge = 1.602176634e-19; // C
inline constexpr double noise_ref_temp = 290.0;         // K, noise-figure reference
} // namespace constants

/// Power ratio to dB (10*log10).
inline double power_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Wave/voltage magnitude to dB (20*log10).
inline double mag_db(double mag) { return 20.0 * std::log10(mag); }

inline double db_to_mag(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

inline double deg_to_rad(double deg) { return deg * constants::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / constants::pi; }

/// Thermal voltage kT/q.
inline double thermal_voltage(double temp_k) {
    return constants::boltzmann * temp_k / constants::electron_charge;
}

} // namespace lna
