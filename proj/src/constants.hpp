#pragma once

#include <numbers>

namespace demag::constants {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double mu_B = 9.2740100783e-24;     // J/T
inline constexpr double mu_0 = 1.25663706212e-6;     // T m/A
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double pi = std::numbers::pi;

// Unit helpers used at the I/O boundary.
inline constexpr double gauss = 1e-4;        // T
inline constexpr double microkelvin = 1e-6;  // K

}  // namespace demag::constants
