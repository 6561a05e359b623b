#pragma once

#include <map>
#include <string>
#include <vector>

#include "nanotrap/atomic_data.hpp"
#include "nanotrap/polarizability.hpp"
#include "nanotrap/surface.hpp"
#include "nanotrap/waveguide.hpp"

namespace nanotrap::trap {

/// One hyperfine manifold |level; F>, basis |F, m_F> ordered m_F = -F..F.
struct Manifold {
    std::string level;
    double J = 0.0;
    double F = 0.0;

    int dim() const { return static_cast<int>(std::lround(2.0 * F + 1.0)); }
    std::string name() const;  // e.g. "6S1/2_F4"
    bool operator<(const Manifold& o) const {
        return std::tie(level, F) < std::tie(o.level, o.F);
    }
};

Manifold make_manifold(const atomic::AtomDatabase& db, const std::string& level, double F);

/// Declarative description of a complete trap: fiber, beams, surface model,
/// compensation detuning, and which manifolds to analyze.
struct TrapConfiguration {
    waveguide::FiberSpec fiber;
    bool n1_from_sellmeier = true;  // evaluate n1 at each beam wavelength
    std::vector<waveguide::BeamSpec> beams;
    surface::SurfaceModel surface;
    double delta_fb_hz = 0.0;
    std::vector<std::pair<std::string, double>> manifolds;  // (level, F)

    void validate() const;
};

/// Everything solved/precomputed: per-beam mode solutions (at each beam's
/// actual optical frequency) and per-beam polarizabilities for every
/// manifold.  Immutable; safe to share across threads.
class PreparedTrap {
public:
    PreparedTrap(const TrapConfiguration& config, const atomic::AtomDatabase& db);

    const TrapConfiguration& config() const { return config_; }
    const atomic::AtomDatabase& db() const { return *db_; }

    const std::vector<int>& group_ids() const { return group_ids_; }
    const std::vector<waveguide::PreparedBeam>& group_beams(int group) const;
    const polarizability::PolarizabilitySet& pols(int beam_index,
                                                  const Manifold& manifold) const;
    int beam_index(int group, size_t position_in_group) const;

    Manifold manifold(const std::string& level, double F) const;
    bool is_excited(const Manifold& m) const;  // surface-scale rule

    /// Spatial period of the standing-wave lattice along z (pi/beta of the
    /// longest-wavelength counter-propagating coherent pair); 0 if none.
    double axial_period() const { return axial_period_; }

private:
    TrapConfiguration config_;
    const atomic::AtomDatabase* db_;
    std::vector<int> group_ids_;
    std::map<int, std::vector<waveguide::PreparedBeam>> groups_;
    std::map<int, std::vector<int>> group_beam_indices_;
    std::vector<std::map<std::string, polarizability::PolarizabilitySet>> pols_;
    double axial_period_ = 0.0;
    int ground_index_ = -1;
};

}  // namespace nanotrap::trap
