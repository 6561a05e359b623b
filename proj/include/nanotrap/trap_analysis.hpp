#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nanotrap/light_shift.hpp"
#include "nanotrap/trap_config.hpp"

namespace nanotrap::trap_analysis {

struct NoMinimum : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoorFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveFrequency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using trap::Manifold;
using trap::PreparedTrap;
using waveguide::CylPoint;

/// Eigenvalues/eigenvectors of the total (light + surface) Hamiltonian at one
/// point, eigenvalues in Hz sorted ascending, eigenvectors in |F, m_F>.
struct AdiabaticLevels {
    CylPoint point;
    Manifold manifold;
    Eigen::VectorXd eigenvalues_hz;
    Eigen::MatrixXcd eigenvectors;
};

AdiabaticLevels adiabatic_levels(const CylPoint& point, const PreparedTrap& prepared,
                                 const Manifold& manifold);

/// Total Hamiltonian (light shift + surface) in Hz.
Eigen::MatrixXcd total_hamiltonian(const CylPoint& point, const PreparedTrap& prepared,
                                   const Manifold& manifold);

/// Scalar part of the total potential: Tr H / dim.  This is the
/// sublevel-averaged potential the spatial characterization uses.
double mean_potential_hz(const CylPoint& point, const PreparedTrap& prepared,
                         const Manifold& manifold);

enum class ScanAxis { radial, azimuthal, axial };

struct ScanGrid {
    ScanAxis axis = ScanAxis::radial;
    double r = 0.0;    // fixed coords (the scanned one is ignored)
    double phi = 0.0;
    double z = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    CylPoint point_at(int i) const;
    double coord_at(int i) const;
};

struct ScanRow {
    double coord;
    int eigenvalue_index;
    std::string manifold;
    double energy_hz;
    double energy_mk;
};

enum class ExecutionMode { serial, parallel };

/// Per-point sorted eigenvalues on the grid, one row per (point, eigenvalue,
/// manifold), assembled in grid order.  The parallel kernel distributes
/// points over OpenMP threads and writes by index, so both modes produce
/// identical tables.
std::vector<ScanRow> scan_potential(const PreparedTrap& prepared,
                                    const std::vector<Manifold>& manifolds,
                                    const ScanGrid& grid,
                                    ExecutionMode mode = ExecutionMode::parallel);

struct TrapMinimum {
    CylPoint location;
    double depth_hz;       // U(min) relative to U(infinity) = 0
    double depth_mk;
    double escape_depth_hz;  // U(saddle toward the surface) - U(min)
};

struct MinimumSearchOptions {
    double r_lo_offset = 50e-9;
    double r_hi_offset = 600e-9;
    int n_r = 100;
    int n_phi = 72;
    int n_z = 50;
    double d_min = 20e-9;   // surface guard for all evaluations
    double tol = 1e-10;     // 0.1 nm
};

/// 3D minimum of the sublevel-averaged ground potential: coarse grid then
/// Nelder-Mead refinement.  Throws NoMinimum when no interior local minimum
/// exists along r (e.g. the attractive beams pull straight into the surface).
TrapMinimum find_trap_minimum(const PreparedTrap& prepared, const Manifold& manifold,
                              const MinimumSearchOptions& opts = {});

struct TrapFrequencies {
    double nu_r, nu_phi, nu_z;  // Hz
};

struct FitWindows {
    double radial = 10e-9;       // m
    double axial = 10e-9;        // m
    double azimuthal_deg = 5.0;  // converted to arc length at r_trap
    int n_points = 11;
    double min_r_squared = 0.99;
};

/// Quadratic least-squares fits of the sublevel-averaged potential along the
/// three principal axes through the minimum; nu = sqrt(k/m)/2pi.
TrapFrequencies trap_frequencies(const PreparedTrap& prepared, const TrapMinimum& min,
                                 const Manifold& manifold, const FitWindows& win = {});

/// sigma = sqrt(hbar / (4 pi m nu))
double motional_width(double nu_hz, double mass_kg);

struct SplittingPoint {
    double arc_m;        // displacement along the azimuthal arc
    double span_hz;      // max - min eigenvalue within the manifold
    double f_diff_hz;    // mean(U_F) - mean(U_Fref): hyperfine transition shift
};

struct SplittingMap {
    std::vector<SplittingPoint> points;
    double sigma_m;            // motional half-width used for the spread
    double span_at_min_hz;
    double span_spread_hz;     // |span(sigma) - span(min)|
    double f_diff_spread_hz;   // |f_diff(sigma) - f_diff(min)|
    double tau_s;              // 1 / span_at_min
    double tau_m_s;            // 1 / f_diff_spread
};

/// Sublevel splittings along the azimuthal arc through the minimum, plus the
/// spread over the motional width and the coherence-time estimates.
/// f_diff is measured against the other ground hyperfine manifold (F-1).
SplittingMap splitting_map(const PreparedTrap& prepared, const TrapMinimum& min,
                           const Manifold& manifold, double nu_phi_hz,
                           int n_points = 41, double arc_span_m = 60e-9);

struct TrapCharacterization {
    TrapMinimum minimum;
    TrapFrequencies frequencies;
    SplittingMap splittings;
    double sigma_r_m, sigma_phi_m, sigma_z_m;
};

TrapCharacterization characterize(const PreparedTrap& prepared, const Manifold& manifold);

}  // namespace nanotrap::trap_analysis
