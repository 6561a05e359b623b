#include "nanotrap/trap_analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "nanotrap/constants.hpp"
#include "nanotrap/surface.hpp"

namespace nanotrap::trap_analysis {

namespace cn = nanotrap::constants;

namespace {

double hz_to_mk(double hz) { return hz * cn::h_planck / cn::k_boltz * 1e3; }

}  // namespace

Eigen::MatrixXcd total_hamiltonian(const CylPoint& point, const PreparedTrap& prepared,
                                   const Manifold& manifold) {
    const auto ls = light_shift::total_stark_hamiltonian(point, prepared, manifold);
    const double d = point.r - prepared.config().fiber.radius;
    const double us = surface::surface_potential_hz(prepared.config().surface, d,
                                                    prepared.is_excited(manifold));
    Eigen::MatrixXcd h = ls.total();
    h += us * Eigen::MatrixXcd::Identity(manifold.dim(), manifold.dim());
    return h;
}

double mean_potential_hz(const CylPoint& point, const PreparedTrap& prepared,
                         const Manifold& manifold) {
    const auto h = total_hamiltonian(point, prepared, manifold);
    return h.trace().real() / manifold.dim();
}

AdiabaticLevels adiabatic_levels(const CylPoint& point, const PreparedTrap& prepared,
                                 const Manifold& manifold) {
    const Eigen::MatrixXcd h = total_hamiltonian(point, prepared, manifold);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    AdiabaticLevels out;
    out.point = point;
    out.manifold = manifold;
    out.eigenvalues_hz = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

CylPoint ScanGrid::point_at(int i) const {
    const double t = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1.0);
    CylPoint p{r, phi, z};
    switch (axis) {
        case ScanAxis::radial: p.r = t; break;
        case ScanAxis::azimuthal: p.phi = t; break;
        case ScanAxis::axial: p.z = t; break;
    }
    return p;
}

double ScanGrid::coord_at(int i) const {
    return (n == 1) ? lo : lo + (hi - lo) * i / (n - 1.0);
}

std::vector<ScanRow> scan_potential(const PreparedTrap& prepared,
                                    const std::vector<Manifold>& manifolds,
                                    const ScanGrid& grid, ExecutionMode mode) {
    if (grid.n < 1) throw std::invalid_argument("scan needs at least one point");
    // keep every sample at least 20 nm off the surface: the -C3/d^3 term
    // diverges there and the trap physics lives much farther out
    constexpr double kMinSurfaceDistance = 20e-9;
    const double guard_r = prepared.config().fiber.radius + kMinSurfaceDistance;
    const double min_r = (grid.axis == ScanAxis::radial) ? std::min(grid.lo, grid.hi)
                                                         : grid.r;
    if (min_r < guard_r)
        throw std::invalid_argument("scan grid reaches closer than 20 nm to the surface");
    int rows_per_point = 0;
    for (const auto& m : manifolds) rows_per_point += m.dim();
    std::vector<ScanRow> rows(static_cast<size_t>(grid.n) * rows_per_point);

    auto fill_point = [&](int i) {
        const CylPoint p = grid.point_at(i);
        const double coord = grid.coord_at(i);
        size_t k = static_cast<size_t>(i) * rows_per_point;
        for (const auto& m : manifolds) {
            const auto lev = adiabatic_levels(p, prepared, m);
            for (int e = 0; e < m.dim(); ++e) {
                rows[k++] = ScanRow{coord, e, m.name(), lev.eigenvalues_hz[e],
                                    hz_to_mk(lev.eigenvalues_hz[e])};
            }
        }
    };

    if (mode == ExecutionMode::serial) {
        for (int i = 0; i < grid.n; ++i) fill_point(i);
    } else {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < grid.n; ++i) fill_point(i);
    }
    return rows;
}

namespace {

// Nelder-Mead around the coarse minimum, parametrized as (r, arc, z) in
// meters so one tolerance covers all axes.  The z coordinate participates
// only when a standing-wave lattice pins the axial position.
CylPoint nelder_mead(const PreparedTrap& prepared, const Manifold& manifold,
                     CylPoint start, double r_guard_lo, double tol) {
    const bool with_z = prepared.axial_period() > 0.0;
    const int dim = with_z ? 3 : 2;

    auto to_point = [&](const Eigen::Vector3d& x) {
        return CylPoint{std::max(x[0], r_guard_lo), start.phi + x[1] / start.r,
                        with_z ? x[2] : start.z};
    };
    auto eval = [&](const Eigen::Vector3d& x) {
        return mean_potential_hz(to_point(x), prepared, manifold);
    };

    std::vector<Eigen::Vector3d> simplex(dim + 1, Eigen::Vector3d(start.r, 0.0, start.z));
    for (int i = 0; i < dim; ++i) simplex[i + 1][i] += 5e-9;
    std::vector<double> f(dim + 1);
    for (int i = 0; i <= dim; ++i) f[i] = eval(simplex[i]);

    for (int it = 0; it < 500; ++it) {
        std::vector<int> order(dim + 1);
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
        {
            std::vector<Eigen::Vector3d> s2(dim + 1);
            std::vector<double> f2(dim + 1);
            for (int i = 0; i <= dim; ++i) {
                s2[i] = simplex[order[i]];
                f2[i] = f[order[i]];
            }
            simplex.swap(s2);
            f.swap(f2);
        }

        if ((simplex[dim] - simplex[0]).norm() < tol) break;

        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (int i = 0; i < dim; ++i) centroid += simplex[i];
        centroid /= dim;

        const Eigen::Vector3d refl = centroid + (centroid - simplex[dim]);
        const double fr = eval(refl);
        if (fr < f[0]) {
            const Eigen::Vector3d expand = centroid + 2.0 * (centroid - simplex[dim]);
            const double fe = eval(expand);
            if (fe < fr) { simplex[dim] = expand; f[dim] = fe; }
            else { simplex[dim] = refl; f[dim] = fr; }
        } else if (fr < f[dim - 1]) {
            simplex[dim] = refl;
            f[dim] = fr;
        } else {
            const Eigen::Vector3d con = centroid + 0.5 * (simplex[dim] - centroid);
            const double fc = eval(con);
            if (fc < f[dim]) { simplex[dim] = con; f[dim] = fc; }
            else {
                for (int i = 1; i <= dim; ++i) {
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                    f[i] = eval(simplex[i]);
                }
            }
        }
    }
    return to_point(simplex[0]);
}

}  // namespace

TrapMinimum find_trap_minimum(const PreparedTrap& prepared, const Manifold& manifold,
                              const MinimumSearchOptions& opts) {
    const double a = prepared.config().fiber.radius;
    const double r_lo = std::max(a + opts.r_lo_offset, a + opts.d_min);
    const double r_hi = a + opts.r_hi_offset;
    const double z_period = prepared.axial_period();
    const int n_z = (z_period > 0.0) ? opts.n_z : 1;

    // coarse grid on the sublevel-averaged potential; flat index keeps the
    // argmin deterministic under OpenMP
    const long n_total = static_cast<long>(opts.n_r) * opts.n_phi * n_z;
    std::vector<double> u_grid(n_total);
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < n_total; ++idx) {
        const int i = static_cast<int>(idx % opts.n_r);
        const int j = static_cast<int>((idx / opts.n_r) % opts.n_phi);
        const int k = static_cast<int>(idx / (static_cast<long>(opts.n_r) * opts.n_phi));
        const CylPoint p{r_lo + (r_hi - r_lo) * i / (opts.n_r - 1.0),
                         2.0 * M_PI * j / opts.n_phi,
                         (n_z == 1) ? 0.0 : z_period * k / (n_z - 1.0)};
        u_grid[idx] = mean_potential_hz(p, prepared, manifold);
    }
    const long best_idx = std::min_element(u_grid.begin(), u_grid.end()) - u_grid.begin();
    const double best = u_grid[best_idx];
    const int bi = static_cast<int>(best_idx % opts.n_r);
    const int bj = static_cast<int>((best_idx / opts.n_r) % opts.n_phi);
    const int bk = static_cast<int>(best_idx / (static_cast<long>(opts.n_r) * opts.n_phi));

    // interior local minimum along r required: the potential must rise on both
    // sides (a minimum pinned at the guard means the atom falls into the wall)
    if (bi <= 0 || bi >= opts.n_r - 1 || best >= 0.0)
        throw NoMinimum("no interior trap minimum: potential is monotone toward the "
                        "surface or unbound");
    {
        const double phi = 2.0 * M_PI * bj / opts.n_phi;
        const double z = (n_z == 1) ? 0.0 : z_period * bk / (n_z - 1.0);
        auto u_at = [&](int i) {
            return mean_potential_hz(
                CylPoint{r_lo + (r_hi - r_lo) * i / (opts.n_r - 1.0), phi, z}, prepared,
                manifold);
        };
        if (!(u_at(bi) < u_at(bi - 1) && u_at(bi) < u_at(bi + 1)))
            throw NoMinimum("coarse minimum is not an interior local minimum along r");
    }

    const CylPoint start{r_lo + (r_hi - r_lo) * bi / (opts.n_r - 1.0),
                         2.0 * M_PI * bj / opts.n_phi,
                         (n_z == 1) ? 0.0 : z_period * bk / (n_z - 1.0)};
    CylPoint loc = nelder_mead(prepared, manifold, start, a + opts.d_min, opts.tol);
    const double u_min = mean_potential_hz(loc, prepared, manifold);

    // saddle toward the surface along -r at the minimum's (phi, z)
    double u_saddle = -std::numeric_limits<double>::max();
    for (int i = 0; i < 200; ++i) {
        const double r = a + opts.d_min + (loc.r - a - opts.d_min) * i / 199.0;
        u_saddle = std::max(u_saddle,
                            mean_potential_hz(CylPoint{r, loc.phi, loc.z}, prepared, manifold));
    }

    TrapMinimum out;
    out.location = loc;
    out.depth_hz = u_min;
    out.depth_mk = hz_to_mk(u_min);
    out.escape_depth_hz = u_saddle - u_min;
    return out;
}

namespace {

struct QuadFit {
    double curvature;  // d2U/dx2 (Hz/m^2)
    double r_squared;
};

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& u) {
    const int n = static_cast<int>(x.size());
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) scale = 1.0;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double t = x[i] / scale;
        A(i, 0) = t * t;
        A(i, 1) = t;
        A(i, 2) = 1.0;
        b(i) = u[i];
    }
    const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd resid = b - A * coef;
    const double ssr = resid.squaredNorm();
    const double sst = (b.array() - b.mean()).matrix().squaredNorm();
    return {2.0 * coef[0] / (scale * scale), (sst > 0.0) ? 1.0 - ssr / sst : 1.0};
}

}  // namespace

TrapFrequencies trap_frequencies(const PreparedTrap& prepared, const TrapMinimum& min,
                                 const Manifold& manifold, const FitWindows& win) {
    const double mass = prepared.db().constants.mass_kg;
    auto fit_axis = [&](auto point_of, double halfwidth, const char* which) {
        std::vector<double> xs(win.n_points), us(win.n_points);
        for (int i = 0; i < win.n_points; ++i) {
            const double x = -halfwidth + 2.0 * halfwidth * i / (win.n_points - 1.0);
            xs[i] = x;
            us[i] = mean_potential_hz(point_of(x), prepared, manifold);
        }
        const QuadFit fit = fit_quadratic(xs, us);
        if (fit.r_squared < win.min_r_squared)
            throw PoorFit(std::string("potential is not harmonic along ") + which);
        if (!(fit.curvature > 0.0))
            throw PoorFit(std::string("no restoring curvature along ") + which);
        const double k_si = fit.curvature * cn::h_planck;  // J/m^2
        return std::sqrt(k_si / mass) / (2.0 * M_PI);
    };

    const CylPoint c = min.location;
    TrapFrequencies out;
    out.nu_r = fit_axis([&](double x) { return CylPoint{c.r + x, c.phi, c.z}; },
                        win.radial, "r");
    const double arc_half = c.r * win.azimuthal_deg * M_PI / 180.0;
    out.nu_phi = fit_axis([&](double s) { return CylPoint{c.r, c.phi + s / c.r, c.z}; },
                          arc_half, "phi");
    out.nu_z = fit_axis([&](double x) { return CylPoint{c.r, c.phi, c.z + x}; },
                        win.axial, "z");
    return out;
}

double motional_width(double nu_hz, double mass_kg) {
    if (!(nu_hz > 0.0)) throw NonPositiveFrequency("motional width needs nu > 0");
    return std::sqrt(cn::hbar / (4.0 * M_PI * mass_kg * nu_hz));
}

SplittingMap splitting_map(const PreparedTrap& prepared, const TrapMinimum& min,
                           const Manifold& manifold, double nu_phi_hz, int n_points,
                           double arc_span_m) {
    const double mass = prepared.db().constants.mass_kg;
    const double sigma = motional_width(nu_phi_hz, mass);

    // reference manifold for the hyperfine transition shift: the neighboring F
    const double I = prepared.db().constants.nuclear_spin;
    const double j = prepared.db().level(manifold.level).J;
    const double ref_f = (manifold.F - 1.0 >= std::abs(j - I) - 0.1) ? manifold.F - 1.0
                                                                     : manifold.F + 1.0;
    const Manifold ref = prepared.manifold(manifold.level, ref_f);

    auto at = [&](double arc) {
        const CylPoint p{min.location.r, min.location.phi + arc / min.location.r,
                         min.location.z};
        const auto lev = adiabatic_levels(p, prepared, manifold);
        const int d = manifold.dim();
        SplittingPoint sp;
        sp.arc_m = arc;
        sp.span_hz = lev.eigenvalues_hz[d - 1] - lev.eigenvalues_hz[0];
        sp.f_diff_hz = mean_potential_hz(p, prepared, manifold) -
                       mean_potential_hz(p, prepared, ref);
        return sp;
    };

    SplittingMap out;
    for (int i = 0; i < n_points; ++i) {
        const double arc = -arc_span_m + 2.0 * arc_span_m * i / (n_points - 1.0);
        out.points.push_back(at(arc));
    }
    const SplittingPoint at_min = at(0.0), at_sigma = at(sigma);
    out.sigma_m = sigma;
    out.span_at_min_hz = at_min.span_hz;
    out.span_spread_hz = std::abs(at_sigma.span_hz - at_min.span_hz);
    out.f_diff_spread_hz = std::abs(at_sigma.f_diff_hz - at_min.f_diff_hz);
    out.tau_s = (at_min.span_hz > 0.0) ? 1.0 / at_min.span_hz
                                       : std::numeric_limits<double>::infinity();
    out.tau_m_s = (out.f_diff_spread_hz > 0.0)
                      ? 1.0 / out.f_diff_spread_hz
                      : std::numeric_limits<double>::infinity();
    return out;
}

TrapCharacterization characterize(const PreparedTrap& prepared, const Manifold& manifold) {
    TrapCharacterization out;
    out.minimum = find_trap_minimum(prepared, manifold);
    out.frequencies = trap_frequencies(prepared, out.minimum, manifold);
    const double mass = prepared.db().constants.mass_kg;
    out.sigma_r_m = motional_width(out.frequencies.nu_r, mass);
    out.sigma_phi_m = motional_width(out.frequencies.nu_phi, mass);
    out.sigma_z_m = motional_width(out.frequencies.nu_z, mass);
    out.splittings = splitting_map(prepared, out.minimum, manifold, out.frequencies.nu_phi);
    return out;
}

}  // namespace nanotrap::trap_analysis
