#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "nanotrap/polarizability.hpp"
#include "nanotrap/trap_config.hpp"
#include "nanotrap/waveguide.hpp"

namespace nanotrap::light_shift {

struct ZeroField : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Im[E(-) x E(+)] / (E(-).E(+)): direction and degree of the local field
/// ellipticity.  Zero for any real-up-to-global-phase polarization; unit
/// length for full circular polarization.
struct EllipticityVector {
    waveguide::CylPoint point;
    Eigen::Vector3d v;
};

EllipticityVector ellipticity_vector(const waveguide::ComplexField& field);

/// Angular momentum matrices (Fx, Fy, Fz) on |F, m_F>, m_F = -F..F.
std::array<Eigen::MatrixXcd, 3> f_matrices(double F);

/// ac-Stark Hamiltonian on one hyperfine manifold, split into the scalar,
/// vector and tensor parts.  Entries are energy/h in Hz.
///
///   H = -(1/4h) [ a0 (E*.E) 1  +  a1 i(E* x E).F / F
///                + a2 3/(F(2F-1)) sum_ij E*_i E_j ((FiFj+FjFi)/2 - dij F^2/3) ]
///
/// with E the positive-frequency amplitude (physical field Re[E e^{+iwt}],
/// intensity (c eps0 / 2)|E|^2).  The overall sign makes the ground-state
/// scalar shift negative for red detuning.
struct StarkHamiltonian {
    trap::Manifold manifold;
    Eigen::MatrixXcd h0, h1, h2;  // Hz

    Eigen::MatrixXcd total() const { return h0 + h1 + h2; }
};

StarkHamiltonian stark_hamiltonian(const Eigen::Vector3cd& e_plus,
                                   const polarizability::PolarizabilitySet& pols,
                                   const trap::Manifold& manifold);

/// Light-shift Hamiltonian of the full beam arrangement at one point: coherent
/// field sum within each coherence group, incoherent (Hamiltonian) sum across
/// groups, each group's polarizabilities at its own optical frequency.
StarkHamiltonian total_stark_hamiltonian(const waveguide::CylPoint& point,
                                         const trap::PreparedTrap& prepared,
                                         const trap::Manifold& manifold);

/// Check mode for the coherence-group model: groups of nearly equal frequency
/// (the delta_fb pair) are summed coherently with their beat phase swept over
/// one period on an n-point quadrature, with polarizabilities at the
/// cluster's power-weighted mean frequency.  Compare against
/// total_stark_hamiltonian to validate the time-averaging argument.
Eigen::MatrixXcd beat_averaged_hamiltonian(const waveguide::CylPoint& point,
                                           const trap::PreparedTrap& prepared,
                                           const trap::Manifold& manifold,
                                           int n_quad = 64);

}  // namespace nanotrap::light_shift
