#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace nanotrap::waveguide {

struct NoGuidedRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsideFiber : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MixedWavelengthGroup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Step-index cylinder: radius and the two refractive indices.
struct FiberSpec {
    double radius;  // m
    double n1;      // core
    double n2;      // cladding (vacuum = 1)

    // n1 <= n2 is not a usage error: solve_he11 reports it as NoGuidedRoot
    void validate() const {
        if (!(radius > 0.0)) throw std::invalid_argument("fiber radius must be > 0");
        if (!(n2 >= 1.0) || !(n1 > 0.0)) throw std::invalid_argument("need n1 > 0, n2 >= 1");
    }
};

enum class Direction { forward, backward };

/// One trapping beam: wavelength, power, propagation sense, input linear
/// polarization axis, and the coherence bookkeeping.  Beams in the same
/// coherence group interfere; distinct groups add incoherently.
/// detuning_offset shifts the beam's optical frequency by +-delta_fb/2.
struct BeamSpec {
    double wavelength;          // m (nominal)
    double power;               // W
    Direction direction = Direction::forward;
    double polarization_angle = 0.0;  // rad, phi_0 against x
    int coherence_group = 0;
    double detuning_offset = 0.0;     // Hz

    double optical_frequency() const;  // c/lambda + offset
    double effective_wavelength() const;
};

struct CylPoint {
    double r;    // m
    double phi;  // rad
    double z;    // m
};

/// Positive-frequency field amplitude at a point, Cartesian components.
/// Physical field is Re[e_plus * exp(+i w t)].
struct ComplexField {
    CylPoint point;
    Eigen::Vector3cd e_plus;  // V/m
};

/// HE11 dispersion solution for one (lambda, fiber).
/// Invariants: k0 n2 < beta < k0 n1, h^2 = k0^2 n1^2 - beta^2,
/// q^2 = beta^2 - k0^2 n2^2, and s is the standard ratio built from
/// (h a, q a) and the J1/K1 logarithmic derivatives.
struct GuidedModeSolution {
    double wavelength;  // m
    FiberSpec fiber;
    double beta;  // rad/m
    double h;     // rad/m
    double q;     // rad/m
    double s;     // dimensionless
    double a_lin_per_sqrt_watt;  // V/m per sqrt(W), from the Poynting norm

    double k0() const { return 2.0 * M_PI / wavelength; }
};

/// Characteristic function of the HE branch (root at the guided beta).
/// Exposed for the dispersion-residual tests.
double he11_characteristic(double beta, double lambda, const FiberSpec& fiber);

/// Solve the exact HE11 eigenvalue problem.  Scans (k0 n2, k0 n1) for the
/// sign change (largest-beta root), then bisection + secant polish to
/// |dbeta/beta| < 1e-12.  Throws NoGuidedRoot / NonConvergence.
GuidedModeSolution solve_he11(double lambda, const FiberSpec& fiber,
                              int scan_points = 10000);

/// A_lin scale so the mode carries power p_watts (time-averaged longitudinal
/// Poynting flux over the whole transverse plane).
double normalize_amplitude(const GuidedModeSolution& sol, double p_watts);

/// Exterior evanescent field of one beam (r >= a), paper field conventions:
/// forward beams carry exp(-i beta z), backward beams exp(+i beta z) with the
/// longitudinal component negated.
ComplexField mode_field(const GuidedModeSolution& sol, const BeamSpec& beam,
                        const CylPoint& point);

struct PreparedBeam {
    GuidedModeSolution sol;
    BeamSpec beam;
};

/// Coherent sum over beams of one coherence group.  All beams must share the
/// nominal wavelength to within rel_tol.
ComplexField superpose_group(std::span<const PreparedBeam> beams, const CylPoint& point,
                             double rel_tol = 1e-6);

/// All six cylindrical field components at radius r (angular factors for the
/// phi0 = 0 orientation stripped: E_r, H_phi, E_z ~ cos(phi); E_phi, H_r,
/// H_z ~ sin(phi)).  Valid inside and outside; used by the power integral and
/// the boundary-continuity tests.
struct CylProfiles {
    std::complex<double> e_r, e_phi, e_z;
    std::complex<double> h_r, h_phi, h_z;
};
CylProfiles mode_profiles(const GuidedModeSolution& sol, double r, double a_lin = 1.0);

/// Longitudinal Poynting flux of the full mode at amplitude a_lin.
double mode_power(const GuidedModeSolution& sol, double a_lin = 1.0);

}  // namespace nanotrap::waveguide
