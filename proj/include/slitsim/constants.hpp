#pragma once

#include <numbers>

namespace slitsim::constants {

// CODATA-2018 exact values. SI units throughout the library; the only
// non-SI unit accepted at any interface is the atomic mass unit, converted
// once in BeamSpec.
inline constexpr double planck = 6.62607015e-34;  // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double amu_kg = 1.66053907e-27;  // kg

}  // namespace slitsim::constants
