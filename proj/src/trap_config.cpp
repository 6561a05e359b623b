#include "nanotrap/trap_config.hpp"

#include <algorithm>
#include <cmath>

#include "nanotrap/constants.hpp"

namespace nanotrap::trap {

namespace cn = nanotrap::constants;

std::string Manifold::name() const {
    const int fi = static_cast<int>(std::lround(F));
    return level + "_F" + std::to_string(fi);
}

Manifold make_manifold(const atomic::AtomDatabase& db, const std::string& level, double F) {
    const auto& lev = db.level(level);
    const double I = db.constants.nuclear_spin;
    if (F < std::abs(lev.J - I) - 0.1 || F > lev.J + I + 0.1)
        throw std::invalid_argument("F outside the hyperfine range of " + level);
    return Manifold{level, lev.J, F};
}

void TrapConfiguration::validate() const {
    fiber.validate();
    surface.validate();
    if (beams.empty()) throw std::invalid_argument("trap needs at least one beam");
    for (const auto& b : beams) {
        if (!(b.wavelength > 0.0)) throw std::invalid_argument("beam wavelength must be > 0");
        if (b.power < 0.0) throw std::invalid_argument("beam power must be >= 0");
    }
    if (delta_fb_hz != 0.0) {
        // the compensated pair must sit in distinct groups with +-delta_fb/2 offsets
        bool found = false;
        for (const auto& b1 : beams) {
            for (const auto& b2 : beams) {
                if (&b1 == &b2) continue;
                if (b1.coherence_group != b2.coherence_group &&
                    std::abs(b1.wavelength - b2.wavelength) < 1e-15 &&
                    std::abs(b1.detuning_offset - delta_fb_hz / 2.0) < 1.0 &&
                    std::abs(b2.detuning_offset + delta_fb_hz / 2.0) < 1.0)
                    found = true;
            }
        }
        if (!found)
            throw std::invalid_argument(
                "delta_fb != 0 requires a same-wavelength pair in distinct coherence "
                "groups with +-delta_fb/2 detuning offsets");
    }
    for (const auto& b1 : beams) {
        for (const auto& b2 : beams) {
            if (b1.coherence_group == b2.coherence_group &&
                std::abs(b1.optical_frequency() - b2.optical_frequency()) > 1.0)
                throw std::invalid_argument(
                    "beams in one coherence group must share an optical frequency");
        }
    }
    if (manifolds.empty()) throw std::invalid_argument("no manifolds to analyze");
}

PreparedTrap::PreparedTrap(const TrapConfiguration& config, const atomic::AtomDatabase& db)
    : config_(config), db_(&db) {
    config_.validate();

    // ground level = lowest energy in the database (surface-scale rule)
    double e_min = std::numeric_limits<double>::max();
    for (size_t i = 0; i < db.levels.size(); ++i) {
        if (db.levels[i].energy_hz < e_min) {
            e_min = db.levels[i].energy_hz;
            ground_index_ = static_cast<int>(i);
        }
    }

    pols_.resize(config_.beams.size());
    for (size_t i = 0; i < config_.beams.size(); ++i) {
        const auto& beam = config_.beams[i];
        waveguide::FiberSpec fiber = config_.fiber;
        const double lam_eff = beam.effective_wavelength();
        if (config_.n1_from_sellmeier) fiber.n1 = cn::silica_index(lam_eff);
        waveguide::PreparedBeam pb{waveguide::solve_he11(lam_eff, fiber), beam};
        groups_[beam.coherence_group].push_back(pb);
        group_beam_indices_[beam.coherence_group].push_back(static_cast<int>(i));

        const double omega = 2.0 * M_PI * beam.optical_frequency();
        // configured manifolds plus their hyperfine neighbors (the splitting
        // maps measure F <-> F+-1 transition shifts)
        std::vector<std::pair<std::string, double>> wanted = config_.manifolds;
        for (const auto& [level, F] : config_.manifolds) {
            const auto& lev = db.level(level);
            const double I = db.constants.nuclear_spin;
            for (double g : {F - 1.0, F + 1.0})
                if (g >= std::abs(lev.J - I) - 0.1 && g <= lev.J + I + 0.1)
                    wanted.emplace_back(level, g);
        }
        for (const auto& [level, F] : wanted) {
            pols_[i][Manifold{level, db.level(level).J, F}.name()] =
                polarizability::polarizabilities(db, level, F, omega);
        }
    }
    for (const auto& [gid, beams] : groups_) group_ids_.push_back(gid);

    // axial lattice period: longest-wavelength coherent fwd/bwd pair
    for (const auto& [gid, beams] : groups_) {
        bool fwd = false, bwd = false;
        for (const auto& pb : beams) {
            (pb.beam.direction == waveguide::Direction::forward ? fwd : bwd) = true;
        }
        if (fwd && bwd) {
            const double period = M_PI / beams.front().sol.beta;
            axial_period_ = std::max(axial_period_, period);
        }
    }
}

const std::vector<waveguide::PreparedBeam>& PreparedTrap::group_beams(int group) const {
    return groups_.at(group);
}

int PreparedTrap::beam_index(int group, size_t position_in_group) const {
    return group_beam_indices_.at(group).at(position_in_group);
}

const polarizability::PolarizabilitySet& PreparedTrap::pols(int beam_index,
                                                            const Manifold& manifold) const {
    return pols_.at(beam_index).at(manifold.name());
}

Manifold PreparedTrap::manifold(const std::string& level, double F) const {
    return make_manifold(*db_, level, F);
}

bool PreparedTrap::is_excited(const Manifold& m) const {
    return db_->index_of(m.level) != ground_index_;
}

}  // namespace nanotrap::trap
