#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nanotrap/atomic_data.hpp"

namespace nanotrap::polarizability {

struct OnResonance : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoSignChange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar / vector / tensor dynamic polarizabilities of one hyperfine level
/// at one optical angular frequency.  SI units (C m^2 / V); au accessors
/// divide by the atomic unit of polarizability.
struct PolarizabilitySet {
    std::string level;
    double F = 0.0;
    double omega = 0.0;  // rad/s
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;  // SI

    double a0_au() const;
    double a1_au() const;
    double a2_au() const;
};

/// Hyperfine-resolved second-order sums over the database lines, rotating and
/// counter-rotating denominators included, Gamma = 0 in the real parts.
/// The rank-2 term of J = 1/2 levels is dropped (it is suppressed by
/// hfs/detuning and the trap model neglects it); polarizabilities_exact keeps
/// it, and is the route checked against the brute-force perturbation oracle.
PolarizabilitySet polarizabilities(const atomic::AtomDatabase& db,
                                   const std::string& level, double F, double omega,
                                   double resonance_guard = 2.0 * M_PI * 1e9);

PolarizabilitySet polarizabilities_exact(const atomic::AtomDatabase& db,
                                         const std::string& level, double F, double omega,
                                         double resonance_guard = 2.0 * M_PI * 1e9);

/// Light shift (Hz) of one sublevel in a linearly polarized beam of the given
/// intensity, polarization along the quantization axis.  Scalar + tensor; the
/// vector term vanishes for linear polarization.
double linear_shift_hz(const PolarizabilitySet& p, double m_f, double intensity);

struct SpectrumRow {
    double lambda;
    std::string level;
    double F;
    double m_f;
    double shift_hz;
};

/// Per-sublevel light shifts of the listed (level, F) states on a wavelength
/// grid at fixed intensity (linear polarization).
std::vector<SpectrumRow> scalar_light_shift_spectrum(
    const atomic::AtomDatabase& db,
    const std::vector<std::pair<std::string, double>>& states,
    double lambda_lo, double lambda_hi, int n_points, double intensity);

struct MagicResult {
    double lambda;         // m
    double slope_hz_per_m; // d(differential shift)/d(lambda) at the crossing
};

/// Root of U_ground(lambda) - U_excited(lambda) at fixed intensity for linear
/// polarization.  Brent iteration; |dlambda| tolerance 0.01 nm or better.
MagicResult find_magic_wavelength(const atomic::AtomDatabase& db,
                                  double lambda_lo, double lambda_hi,
                                  const std::string& ground_level, double ground_f,
                                  const std::string& excited_level, double excited_f,
                                  double excited_mf,
                                  double intensity = 2.9e9);

}  // namespace nanotrap::polarizability
