#pragma once

#include <cmath>

namespace nanotrap::constants {

// SI defining constants (2019 redefinition) and CODATA-2018 values.
inline constexpr double c_light   = 299792458.0;          // m/s, exact
inline constexpr double h_planck  = 6.62607015e-34;       // J s, exact
inline constexpr double hbar      = h_planck / (2.0 * M_PI);
inline constexpr double k_boltz   = 1.380649e-23;         // J/K, exact
inline constexpr double e_charge  = 1.602176634e-19;      // C, exact
inline constexpr double eps0      = 8.8541878128e-12;     // F/m
inline constexpr double mu0       = 1.25663706212e-6;     // N/A^2
inline constexpr double bohr_a0   = 5.29177210903e-11;    // m

// e*a0 in C m, and the atomic unit of polarizability e^2 a0^2 / E_h in SI.
inline constexpr double ea0       = e_charge * bohr_a0;
inline constexpr double hartree   = 4.3597447222071e-18;  // J
inline constexpr double au_polarizability = ea0 * ea0 / hartree;  // C m^2 / V

inline constexpr double cm1_to_hz = 100.0 * c_light;      // 1 cm^-1 in Hz

/// Fused-silica refractive index, three-term Sellmeier fit (lambda in meters).
/// Valid over the visible/near-IR range used here.
inline double silica_index(double lambda_m) {
    const double l2 = (lambda_m * 1e6) * (lambda_m * 1e6);  // um^2
    const double n2 = 1.0
        + 0.6961663 * l2 / (l2 - 0.0684043 * 0.0684043)
        + 0.4079426 * l2 / (l2 - 0.1162414 * 0.1162414)
        + 0.8974794 * l2 / (l2 - 9.896161 * 9.896161);
    return std::sqrt(n2);
}

}  // namespace nanotrap::constants
