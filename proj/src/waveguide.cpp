#include "nanotrap/waveguide.hpp"

#include <algorithm>
#include <cmath>

#include "nanotrap/constants.hpp"
#include "nanotrap/special_functions.hpp"

namespace nanotrap::waveguide {

namespace cn = nanotrap::constants;
namespace sf = nanotrap::sf;

double BeamSpec::optical_frequency() const {
    return cn::c_light / wavelength + detuning_offset;
}

double BeamSpec::effective_wavelength() const {
    return cn::c_light / optical_frequency();
}

namespace {

struct CharParams {
    double k0, n1, n2, a;
};

// HE (minus) branch of the exact two-layer eigenvalue equation, written so
// the guided root is its only zero in (k0 n2, k0 n1) for the fibers at hand.
double he_branch(double beta, const CharParams& p) {
    const double h2 = p.k0 * p.k0 * p.n1 * p.n1 - beta * beta;
    const double q2 = beta * beta - p.k0 * p.k0 * p.n2 * p.n2;
    if (h2 <= 0.0 || q2 <= 0.0) return NAN;
    const double h = std::sqrt(h2), q = std::sqrt(q2);
    const double u = h * p.a, w = q * p.a;
    const double JJ = sf::bessel_j1_prime(u) / (u * sf::bessel_j(1, u));
    const double KK = sf::bessel_k1_prime(w) / (w * sf::bessel_k(1, w));
    const double n1sq = p.n1 * p.n1, n2sq = p.n2 * p.n2;
    const double R = std::sqrt(std::pow((n1sq - n2sq) / (2.0 * n1sq) * KK, 2) +
                               std::pow(beta / (p.n1 * p.k0) * (1.0 / (u * u) + 1.0 / (w * w)), 2));
    return JJ + (n1sq + n2sq) / (2.0 * n1sq) * KK + R;
}

double s_parameter(double h, double q, double a) {
    const double u = h * a, w = q * a;
    return (1.0 / (u * u) + 1.0 / (w * w)) /
           (sf::bessel_j1_prime(u) / (u * sf::bessel_j(1, u)) +
            sf::bessel_k1_prime(w) / (w * sf::bessel_k(1, w)));
}

}  // namespace

double he11_characteristic(double beta, double lambda, const FiberSpec& fiber) {
    CharParams p{2.0 * M_PI / lambda, fiber.n1, fiber.n2, fiber.radius};
    return he_branch(beta, p);
}

GuidedModeSolution solve_he11(double lambda, const FiberSpec& fiber, int scan_points) {
    if (!(lambda > 0.0)) throw std::invalid_argument("wavelength must be > 0");
    fiber.validate();
    if (!(fiber.n1 > fiber.n2))
        throw NoGuidedRoot("no index contrast (n1 <= n2): no bound mode exists");
    const double k0 = 2.0 * M_PI / lambda;
    CharParams p{k0, fiber.n1, fiber.n2, fiber.radius};

    const double lo = k0 * fiber.n2, hi = k0 * fiber.n1;
    const double eps = (hi - lo) * 1e-9;

    // scan for sign changes; HE11 is the largest-beta root
    double b_lo = NAN, b_hi = NAN;
    double prev_b = lo + eps;
    double prev_f = he_branch(prev_b, p);
    for (int i = 1; i <= scan_points; ++i) {
        const double b = lo + eps + (hi - lo - 2.0 * eps) * i / scan_points;
        const double f = he_branch(b, p);
        if (std::isfinite(prev_f) && std::isfinite(f) && std::signbit(prev_f) != std::signbit(f)) {
            b_lo = prev_b;
            b_hi = b;
        }
        prev_b = b;
        prev_f = f;
    }
    if (!std::isfinite(b_lo))
        throw NoGuidedRoot("no HE11 sign change in (k0 n2, k0 n1)");

    // bisection
    double f_lo = he_branch(b_lo, p);
    for (int it = 0; it < 200 && (b_hi - b_lo) > 1e-14 * b_hi; ++it) {
        const double mid = 0.5 * (b_lo + b_hi);
        const double fm = he_branch(mid, p);
        if (std::signbit(fm) == std::signbit(f_lo)) {
            b_lo = mid;
            f_lo = fm;
        } else {
            b_hi = mid;
        }
    }
    // secant polish
    double x0 = b_lo, x1 = b_hi;
    double f0 = he_branch(x0, p), f1 = he_branch(x1, p);
    for (int it = 0; it < 8 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > lo && x2 < hi)) break;
        x0 = x1; f0 = f1;
        x1 = x2; f1 = he_branch(x2, p);
    }
    const double beta = x1;
    if (!(beta > lo && beta < hi))
        throw NonConvergence("HE11 root polish left the guided bracket");

    GuidedModeSolution sol;
    sol.wavelength = lambda;
    sol.fiber = fiber;
    sol.beta = beta;
    sol.h = std::sqrt(k0 * k0 * fiber.n1 * fiber.n1 - beta * beta);
    sol.q = std::sqrt(beta * beta - k0 * k0 * fiber.n2 * fiber.n2);
    sol.s = s_parameter(sol.h, sol.q, fiber.radius);
    sol.a_lin_per_sqrt_watt = 0.0;
    sol.a_lin_per_sqrt_watt = 1.0 / std::sqrt(mode_power(sol, 1.0));
    return sol;
}

CylProfiles mode_profiles(const GuidedModeSolution& sol, double r, double a_lin) {
    using namespace std::complex_literals;
    const double a = sol.fiber.radius;
    const double omega = 2.0 * M_PI * cn::c_light / sol.wavelength;
    const double beta = sol.beta, h = sol.h, q = sol.q;

    // longitudinal amplitudes: E_z ~ T J1(hr) cos(phi), H_z ~ BH J1(hr) sin(phi)
    const std::complex<double> T = 1i * a_lin;
    const std::complex<double> BH = -sol.s * beta / (omega * cn::mu0) * T;

    double kappa2, n, Z, Zp;
    std::complex<double> AE, AH;
    if (r < a) {
        kappa2 = h * h;
        n = sol.fiber.n1;
        Z = sf::bessel_j(1, h * r);
        Zp = h * 0.5 * (sf::bessel_j(0, h * r) - sf::bessel_j(2, h * r));
        AE = T;
        AH = BH;
    } else {
        kappa2 = -q * q;
        n = sol.fiber.n2;
        Z = sf::bessel_k(1, q * r);
        Zp = -q * 0.5 * (sf::bessel_k(0, q * r) + sf::bessel_k(2, q * r));
        const double match = sf::bessel_j(1, h * a) / sf::bessel_k(1, q * a);
        AE = T * match;
        AH = BH * match;
    }

    CylProfiles f;
    const std::complex<double> ib = -1i * beta / kappa2;
    f.e_z = AE * Z;
    f.h_z = AH * Z;
    f.e_r = ib * (AE * Zp + (omega * cn::mu0 / beta) * AH * Z / r);
    f.e_phi = ib * (-AE * Z / r - (omega * cn::mu0 / beta) * AH * Zp);
    f.h_r = ib * (AH * Zp + (omega * cn::eps0 * n * n / beta) * AE * Z / r);
    f.h_phi = ib * (AH * Z / r + (omega * cn::eps0 * n * n / beta) * AE * Zp);
    return f;
}

double mode_power(const GuidedModeSolution& sol, double a_lin) {
    const double a = sol.fiber.radius;
    auto sz = [&](double r) {
        const CylProfiles f = mode_profiles(sol, r, a_lin);
        return 0.5 * std::real(f.e_r * std::conj(f.h_phi) - f.e_phi * std::conj(f.h_r)) * r;
    };
    // cos^2 / sin^2 angular integrals each give pi
    const auto gl = sf::gauss_legendre(80);
    double total = 0.0;
    const double r_max = a + 45.0 / sol.q;
    const double panels[3][2] = {{a * 1e-9, a}, {a, a + 0.25 * (r_max - a)},
                                 {a + 0.25 * (r_max - a), r_max}};
    for (const auto& pan : panels) {
        const double half = 0.5 * (pan[1] - pan[0]), mid = 0.5 * (pan[1] + pan[0]);
        double acc = 0.0;
        for (int i = 0; i < gl.n; ++i) acc += gl.weights[i] * sz(mid + half * gl.nodes[i]);
        total += half * acc;
    }
    return M_PI * total;
}

double normalize_amplitude(const GuidedModeSolution& sol, double p_watts) {
    if (p_watts < 0.0) throw std::invalid_argument("power must be >= 0");
    return sol.a_lin_per_sqrt_watt * std::sqrt(p_watts);
}

ComplexField mode_field(const GuidedModeSolution& sol, const BeamSpec& beam,
                        const CylPoint& point) {
    using namespace std::complex_literals;
    const double a = sol.fiber.radius;
    if (point.r < a) throw InsideFiber("mode_field is exterior-only (r >= a)");

    const double beta = sol.beta, h = sol.h, q = sol.q, s = sol.s;
    const double phi0 = beam.polarization_angle;
    const double a_lin = normalize_amplitude(sol, beam.power);

    const double j1u = sf::bessel_j(1, h * a);
    const double k1w = sf::bessel_k(1, q * a);
    const double pref = a_lin * beta * j1u / (2.0 * q * k1w);
    const double k0r = sf::bessel_k(0, q * point.r);
    const double k2r = sf::bessel_k(2, q * point.r);
    const double k1r = sf::bessel_k(1, q * point.r);

    const double ex = pref * ((1.0 - s) * k0r * std::cos(phi0) +
                              (1.0 + s) * k2r * std::cos(2.0 * point.phi - phi0));
    const double ey = pref * ((1.0 - s) * k0r * std::sin(phi0) +
                              (1.0 + s) * k2r * std::sin(2.0 * point.phi - phi0));
    const std::complex<double> ez =
        1i * a_lin * (j1u / k1w) * k1r * std::cos(point.phi - phi0);

    const double dir = (beam.direction == Direction::forward) ? 1.0 : -1.0;
    const std::complex<double> zphase = std::exp(-1i * dir * beta * point.z);

    ComplexField out;
    out.point = point;
    out.e_plus = Eigen::Vector3cd(ex * zphase, ey * zphase, dir * ez * zphase);
    return out;
}

ComplexField superpose_group(std::span<const PreparedBeam> beams, const CylPoint& point,
                             double rel_tol) {
    if (beams.empty()) throw std::invalid_argument("empty coherence group");
    const double lam0 = beams.front().beam.wavelength;
    for (const auto& pb : beams) {
        if (std::abs(pb.beam.wavelength - lam0) > rel_tol * lam0)
            throw MixedWavelengthGroup("beams in one coherence group differ in wavelength");
    }
    ComplexField out;
    out.point = point;
    out.e_plus = Eigen::Vector3cd::Zero();
    for (const auto& pb : beams) out.e_plus += mode_field(pb.sol, pb.beam, point).e_plus;
    return out;
}

}  // namespace nanotrap::waveguide
