#include "nanotrap/surface.hpp"

namespace nanotrap::surface {

double surface_potential_hz(const SurfaceModel& model, double d, bool excited_manifold) {
    if (!(d > 0.0)) throw NonPositiveDistance("surface distance must be > 0");
    const double u = -model.c3_over_h_hz_m3() / (d * d * d);
    return excited_manifold ? model.excited_scale * u : u;
}

}  // namespace nanotrap::surface
