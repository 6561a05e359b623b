#pragma once

#include <stdexcept>

namespace nanotrap::surface {

struct NonPositiveDistance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Planar van der Waals atom-surface potential -C3/d^3.  C3 is configured as
/// C3/h in kHz um^3; the excited manifold gets an extra multiplier.
struct SurfaceModel {
    double c3_over_h_khz_um3 = 1.2;
    double excited_scale = 2.0;

    void validate() const {
        if (!(c3_over_h_khz_um3 > 0.0)) throw std::invalid_argument("C3 must be > 0");
        if (!(excited_scale > 0.0)) throw std::invalid_argument("excited_scale must be > 0");
    }

    double c3_over_h_hz_m3() const { return c3_over_h_khz_um3 * 1e3 * 1e-18; }
};

/// Potential in Hz (energy/h) at distance d from the surface; identical for
/// all sublevels within a manifold.
double surface_potential_hz(const SurfaceModel& model, double d, bool excited_manifold);

}  // namespace nanotrap::surface
