#include "nanotrap/light_shift.hpp"

#include <cmath>
#include <complex>

#include "nanotrap/constants.hpp"

namespace nanotrap::light_shift {

namespace cn = nanotrap::constants;
using waveguide::ComplexField;
using waveguide::CylPoint;

namespace {

// plain bilinear cross product: Eigen's cross() conjugates the result for
// complex scalars, which is not what the field bilinears here need
Eigen::Vector3cd cross3(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return Eigen::Vector3cd(a[1] * b[2] - a[2] * b[1],
                            a[2] * b[0] - a[0] * b[2],
                            a[0] * b[1] - a[1] * b[0]);
}

}  // namespace

EllipticityVector ellipticity_vector(const ComplexField& field) {
    const Eigen::Vector3cd& e = field.e_plus;
    const double norm2 = e.squaredNorm();
    if (!(norm2 > 0.0)) throw ZeroField("ellipticity of a zero field is undefined");
    const Eigen::Vector3cd cross = cross3(e.conjugate(), e);
    EllipticityVector out;
    out.point = field.point;
    out.v = cross.imag() / norm2;
    return out;
}

std::array<Eigen::MatrixXcd, 3> f_matrices(double F) {
    const int dim = static_cast<int>(std::lround(2.0 * F + 1.0));
    Eigen::MatrixXcd fz = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd fp = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = -F + k;
        fz(k, k) = m;
        if (k + 1 < dim) fp(k + 1, k) = std::sqrt(F * (F + 1.0) - m * (m + 1.0));
    }
    const Eigen::MatrixXcd fm = fp.adjoint();
    std::array<Eigen::MatrixXcd, 3> out;
    out[0] = 0.5 * (fp + fm);
    out[1] = std::complex<double>(0.0, -0.5) * (fp - fm);
    out[2] = fz;
    return out;
}

StarkHamiltonian stark_hamiltonian(const Eigen::Vector3cd& e_plus,
                                   const polarizability::PolarizabilitySet& pols,
                                   const trap::Manifold& manifold) {
    if (std::abs(pols.F - manifold.F) > 1e-9 || pols.level != manifold.level)
        throw DimensionMismatch("polarizability set does not match the manifold");
    const int dim = manifold.dim();
    const double F = manifold.F;
    const auto Fv = f_matrices(F);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    const double pref = -0.25 / cn::h_planck;

    StarkHamiltonian out;
    out.manifold = manifold;
    out.h0 = pref * pols.a0 * e_plus.squaredNorm() * id;

    out.h1 = Eigen::MatrixXcd::Zero(dim, dim);
    if (F > 0.4) {
        const Eigen::Vector3d w =
            (std::complex<double>(0, 1) * cross3(e_plus.conjugate(), e_plus)).real();
        Eigen::MatrixXcd h1 = Eigen::MatrixXcd::Zero(dim, dim);
        for (int k = 0; k < 3; ++k) h1 += w[k] * Fv[k];
        out.h1 = pref * pols.a1 / F * h1;
    }

    out.h2 = Eigen::MatrixXcd::Zero(dim, dim);
    if (F > 0.6 && pols.a2 != 0.0) {
        const double f2 = F * (F + 1.0) / 3.0;
        Eigen::MatrixXcd h2 = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                Eigen::MatrixXcd q = 0.5 * (Fv[i] * Fv[j] + Fv[j] * Fv[i]);
                if (i == j) q -= f2 * id;
                h2 += std::conj(e_plus[i]) * e_plus[j] * q;
            }
        }
        out.h2 = pref * pols.a2 * 3.0 / (F * (2.0 * F - 1.0)) * h2;
    }
    return out;
}

StarkHamiltonian total_stark_hamiltonian(const CylPoint& point,
                                         const trap::PreparedTrap& prepared,
                                         const trap::Manifold& manifold) {
    const int dim = manifold.dim();
    StarkHamiltonian total;
    total.manifold = manifold;
    total.h0 = Eigen::MatrixXcd::Zero(dim, dim);
    total.h1 = Eigen::MatrixXcd::Zero(dim, dim);
    total.h2 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int gid : prepared.group_ids()) {
        const auto& beams = prepared.group_beams(gid);
        const ComplexField field = waveguide::superpose_group(beams, point);
        // one polarizability set per group: beams in a group share a frequency
        const auto& pols = prepared.pols(prepared.beam_index(gid, 0), manifold);
        const StarkHamiltonian part = stark_hamiltonian(field.e_plus, pols, manifold);
        total.h0 += part.h0;
        total.h1 += part.h1;
        total.h2 += part.h2;
    }
    return total;
}

Eigen::MatrixXcd beat_averaged_hamiltonian(const CylPoint& point,
                                           const trap::PreparedTrap& prepared,
                                           const trap::Manifold& manifold, int n_quad) {
    // groups within a small frequency offset of each other (the delta_fb pair)
    // form one beat cluster: their relative phase is swept over a full period.
    // Distant clusters stay incoherent exactly as in the group model.
    const auto& gids = prepared.group_ids();
    struct Cluster {
        std::vector<Eigen::Vector3cd> fields;
        double power_nu = 0.0, power = 0.0;
    };
    std::vector<double> nus;
    std::vector<Cluster> clusters;
    constexpr double kClusterWindow = 1e12;  // Hz
    for (int gid : gids) {
        const auto& beams = prepared.group_beams(gid);
        const double nu = beams.front().beam.optical_frequency();
        int slot = -1;
        for (size_t c = 0; c < nus.size(); ++c)
            if (std::abs(nu - nus[c]) < kClusterWindow) slot = static_cast<int>(c);
        if (slot < 0) {
            nus.push_back(nu);
            clusters.emplace_back();
            slot = static_cast<int>(clusters.size()) - 1;
        }
        clusters[slot].fields.push_back(waveguide::superpose_group(beams, point).e_plus);
        for (const auto& pb : beams) {
            clusters[slot].power_nu += pb.beam.power * pb.beam.optical_frequency();
            clusters[slot].power += pb.beam.power;
        }
    }

    const int dim = manifold.dim();
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& cl : clusters) {
        const double omega_mean = 2.0 * M_PI * cl.power_nu / cl.power;
        const auto pols = polarizability::polarizabilities(prepared.db(), manifold.level,
                                                           manifold.F, omega_mean);
        if (cl.fields.size() == 1) {
            total += stark_hamiltonian(cl.fields[0], pols, manifold).total();
            continue;
        }
        if (cl.fields.size() > 3)
            throw std::invalid_argument("beat-average check supports up to three "
                                        "same-frequency groups");
        const int n_outer = n_quad;
        const int n_inner = (cl.fields.size() == 3) ? n_quad : 1;
        Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < n_outer; ++i) {
            for (int j = 0; j < n_inner; ++j) {
                Eigen::Vector3cd e = cl.fields[0];
                e += std::exp(std::complex<double>(0, 2.0 * M_PI * i / n_quad)) *
                     cl.fields[1];
                if (cl.fields.size() == 3)
                    e += std::exp(std::complex<double>(0, 2.0 * M_PI * j / n_quad)) *
                         cl.fields[2];
                avg += stark_hamiltonian(e, pols, manifold).total();
            }
        }
        total += avg / static_cast<double>(n_outer * n_inner);
    }
    return total;
}

}  // namespace nanotrap::light_shift
