#pragma once

#include <numbers>

// Unit conventions used throughout the library:
//   frequencies            Hz
//   Rabi frequencies/rates rad/s
//   times                  s
//   magnetic fields        gauss
//   intensities            multiples of the saturation intensity
namespace lss::constants {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bohr magneton over Planck's constant, Hz per gauss.
inline constexpr double kBohrMagnetonOverH = 1.399624e6;

// Landé factor of the 87Rb 5S1/2 F=2 manifold.
inline constexpr double kLandeF2 = 0.5;

// 87Rb D1 line.
inline constexpr double kD1NaturalLinewidth = kTwoPi * 5.75e6;     // rad/s
inline constexpr double kD1ExcitedHyperfineSplitting = 816.656e6;  // Hz, F'=1 <-> F'=2
inline constexpr double kD1SaturationIntensity = 44.84;            // W/m^2, isotropic

}  // namespace lss::constants
