#pragma once

#include <numbers>

namespace qfel::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact / recommended values, SI.
inline constexpr double c_light = 299792458.0;            // m/s
inline constexpr double m_electron = 9.1093837015e-31;    // kg
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double e_charge = 1.602176634e-19;       // C
inline constexpr double alpha_fine = 7.2973525693e-3;
inline constexpr double r_electron = 2.8179403262e-15;    // m, classical radius
inline constexpr double lambdabar_compton = 3.8615926796e-13;  // m, hbar/(m_e c)

}  // namespace qfel::constants
