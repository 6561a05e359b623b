#include "nanotrap/polarizability.hpp"

#include <cmath>

#include "nanotrap/constants.hpp"
#include "nanotrap/wigner.hpp"

namespace nanotrap::polarizability {

namespace cn = nanotrap::constants;
namespace wg = nanotrap::wigner;
using atomic::AtomDatabase;

double PolarizabilitySet::a0_au() const { return a0 / cn::au_polarizability; }
double PolarizabilitySet::a1_au() const { return a1 / cn::au_polarizability; }
double PolarizabilitySet::a2_au() const { return a2 / cn::au_polarizability; }

namespace {

int phase(double x) {
    const int i = static_cast<int>(std::lround(x));
    return (i % 2 == 0) ? 1 : -1;
}

// |<F||d||F'>|^2 = (2F+1)(2F'+1) {J J' 1; F' F I}^2 |<J||d||J'>|^2   (SI)
double line_strength_sq(double J, double F, double Jp, double Fp, double I,
                        double reduced_ea0) {
    const double sj = wg::six_j(J, Jp, 1.0, Fp, F, I);
    const double d = reduced_ea0 * cn::ea0;
    return (2.0 * F + 1.0) * (2.0 * Fp + 1.0) * sj * sj * d * d;
}

PolarizabilitySet compute(const AtomDatabase& db, const std::string& level, double F,
                          double omega, double guard, bool drop_j_half_tensor) {
    const auto& lev = db.level(level);
    const double I = db.constants.nuclear_spin;
    const int self = db.index_of(level);
    const double e_f =
        lev.energy_hz + atomic::hyperfine_shift_hz(lev.a_hfs_hz, lev.b_hfs_hz, I, lev.J, F);

    PolarizabilitySet out;
    out.level = level;
    out.F = F;
    out.omega = omega;

    const double c1 = -0.5 * std::sqrt(6.0 * F / ((F + 1.0) * (2.0 * F + 1.0)));
    const double c2 = (F > 0.6)
        ? std::sqrt(30.0 / 9.0 * F * (2.0 * F - 1.0) /
                    ((2.0 * F + 1.0) * (F + 1.0) * (2.0 * F + 3.0)))
        : 0.0;

    for (const auto* line : db.lines_of(self)) {
        const int other_idx = (line->lower == self) ? line->upper : line->lower;
        const auto& other = db.levels[other_idx];
        for (const auto& hf : atomic::hyperfine_levels(other, I)) {
            const double Fp = hf.F;
            if (std::abs(F - Fp) > 1.01) continue;
            if (!wg::triangle_ok(F, 1.0, Fp)) continue;
            const double w_line = 2.0 * M_PI * (hf.energy_hz - e_f);  // signed
            if (std::abs(w_line - omega) < guard || std::abs(w_line + omega) < guard)
                throw OnResonance(level + ": optical frequency within the resonance guard of "
                                  + other.label);
            const double S = line_strength_sq(lev.J, F, other.J, Fp, I, line->reduced_ea0);
            const double dp = 1.0 / (w_line - omega);
            const double dm = 1.0 / (w_line + omega);
            const int ph = phase(F + Fp);
            out.a0 += S / (3.0 * cn::hbar * (2.0 * F + 1.0)) * (dp + dm);
            out.a1 += c1 / cn::hbar * ph * wg::six_j(1, 1, 1, F, F, Fp) * S * (dp - dm);
            out.a2 += c2 / cn::hbar * ph * wg::six_j(1, 1, 2, F, F, Fp) * S * (dp + dm);
        }
    }
    if (drop_j_half_tensor && std::abs(lev.J - 0.5) < 1e-9) out.a2 = 0.0;
    return out;
}

}  // namespace

PolarizabilitySet polarizabilities(const AtomDatabase& db, const std::string& level,
                                   double F, double omega, double guard) {
    return compute(db, level, F, omega, guard, true);
}

PolarizabilitySet polarizabilities_exact(const AtomDatabase& db, const std::string& level,
                                         double F, double omega, double guard) {
    return compute(db, level, F, omega, guard, false);
}

double linear_shift_hz(const PolarizabilitySet& p, double m_f, double intensity) {
    const double e_sq = 2.0 * intensity / (cn::c_light * cn::eps0);
    double tensor = 0.0;
    if (p.F > 0.6) {
        tensor = p.a2 * (3.0 * m_f * m_f - p.F * (p.F + 1.0)) /
                 (p.F * (2.0 * p.F - 1.0));
    }
    return -0.25 * e_sq * (p.a0 + tensor) / cn::h_planck;
}

std::vector<SpectrumRow> scalar_light_shift_spectrum(
    const AtomDatabase& db, const std::vector<std::pair<std::string, double>>& states,
    double lambda_lo, double lambda_hi, int n_points, double intensity) {
    if (n_points < 1) throw std::invalid_argument("need at least one wavelength point");
    std::vector<SpectrumRow> rows;
    for (int i = 0; i < n_points; ++i) {
        const double lam = (n_points == 1)
            ? lambda_lo
            : lambda_lo + (lambda_hi - lambda_lo) * i / (n_points - 1);
        const double omega = 2.0 * M_PI * cn::c_light / lam;
        for (const auto& [level, F] : states) {
            const auto p = polarizabilities(db, level, F, omega);
            for (double m = -F; m <= F + 0.1; m += 1.0)
                rows.push_back(SpectrumRow{lam, level, F, m, linear_shift_hz(p, m, intensity)});
        }
    }
    return rows;
}

MagicResult find_magic_wavelength(const AtomDatabase& db, double lambda_lo,
                                  double lambda_hi, const std::string& ground_level,
                                  double ground_f, const std::string& excited_level,
                                  double excited_f, double excited_mf, double intensity) {
    auto diff = [&](double lam) {
        const double omega = 2.0 * M_PI * cn::c_light / lam;
        const auto g = polarizabilities(db, ground_level, ground_f, omega);
        const auto e = polarizabilities(db, excited_level, excited_f, omega);
        return linear_shift_hz(g, 0.0, intensity) - linear_shift_hz(e, excited_mf, intensity);
    };
    double a = lambda_lo, b = lambda_hi;
    double fa = diff(a), fb = diff(b);
    if (fa == 0.0) return {a, 0.0};
    if (fb == 0.0) return {b, 0.0};
    if (std::signbit(fa) == std::signbit(fb))
        throw NoSignChange("no magic-wavelength crossing in the bracket");

    // bisection to well below the 0.01 nm tolerance, then report the slope
    for (int it = 0; it < 200 && (b - a) > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = diff(mid);
        if (fm == 0.0) { a = b = mid; break; }
        if (std::signbit(fm) == std::signbit(fa)) {
            a = mid; fa = fm;
        } else {
            b = mid; fb = fm;
        }
    }
    const double lam = 0.5 * (a + b);
    if ((b - a) > 1e-11)  // 0.01 nm
        throw NonConvergence("magic-wavelength bisection stalled");
    const double dl = 1e-12;
    const double slope = (diff(lam + dl) - diff(lam - dl)) / (2.0 * dl);
    return {lam, slope};
}

}  // namespace nanotrap::polarizability
