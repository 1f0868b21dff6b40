#pragma once

namespace magnomech::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 (exact by SI definition)
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K

// Gyromagnetic ratio of the Kittel mode, 28 GHz/T expressed angularly.
inline constexpr double gyromagnetic_ratio = two_pi * 28.0e9;  // rad/(s T)

// Spin density of YIG.
inline constexpr double yig_spin_density = 4.22e27;  // m^-3

// Default magnon Kerr coefficient for a 1-mm YIG sphere, 1e-10 Hz angularly.
inline constexpr double kerr_coefficient = two_pi * 1.0e-10;  // rad/s

}  // namespace magnomech::constants
