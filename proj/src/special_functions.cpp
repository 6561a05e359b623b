#include "nanotrap/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nanotrap::sf {

double bessel_j(int l, double x) {
    return std::cyl_bessel_j(static_cast<double>(l), x);
}

double bessel_k(int l, double x) {
    return std::cyl_bessel_k(static_cast<double>(l), x);
}

double bessel_j1_prime(double x) {
    return 0.5 * (bessel_j(0, x) - bessel_j(2, x));
}

double bessel_k1_prime(double x) {
    return -0.5 * (bessel_k(0, x) + bessel_k(2, x));
}

namespace {

// Newton iteration on P_n; nodes seeded by the Chebyshev-like estimate.
void build_gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace

Quadrature gauss_legendre(int n) {
    if (n < 2 || n > 512) throw std::invalid_argument("gauss_legendre: bad order");
    static std::mutex mtx;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<double> x, w;
        build_gauss_legendre(n, x, w);
        it = cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
    }
    return Quadrature{it->second.first.data(), it->second.second.data(), n};
}

}  // namespace nanotrap::sf
