#include "nanotrap/wigner.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nanotrap::wigner {

namespace {

constexpr int kMaxFact = 120;

const std::array<long double, kMaxFact + 1>& fact_table() {
    static const auto table = [] {
        std::array<long double, kMaxFact + 1> f{};
        f[0] = 1.0L;
        for (int i = 1; i <= kMaxFact; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    return table;
}

long double fact(int n) {
    if (n < 0) throw std::domain_error("factorial of negative integer");
    return fact_table()[n];
}

// twice the quantum number, rounded; rejects non-(half)integer input
int twice(double j) {
    int t = static_cast<int>(std::lround(2.0 * j));
    if (std::abs(2.0 * j - t) > 1e-9)
        throw std::invalid_argument("angular momentum must be integer or half-integer");
    return t;
}

bool triangle2(int tj1, int tj2, int tj3) {
    if ((tj1 + tj2 + tj3) % 2 != 0) return false;
    return tj3 >= std::abs(tj1 - tj2) && tj3 <= tj1 + tj2;
}

// sqrt of the triangle coefficient, all args doubled
long double sqrt_delta(int ta, int tb, int tc) {
    return std::sqrt(fact((ta + tb - tc) / 2) * fact((ta - tb + tc) / 2) *
                     fact((-ta + tb + tc) / 2) / fact((ta + tb + tc) / 2 + 1));
}

int parity(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

bool triangle_ok(double j1, double j2, double j3) {
    return triangle2(twice(j1), twice(j2), twice(j3));
}

double three_j(double j1, double j2, double j3, double m1, double m2, double m3) {
    const int tj1 = twice(j1), tj2 = twice(j2), tj3 = twice(j3);
    const int tm1 = twice(m1), tm2 = twice(m2), tm3 = twice(m3);
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (!triangle2(tj1, tj2, tj3)) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0) return 0.0;

    // Racah sum
    const int kmin = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int kmax = std::min({(tj1 + tj2 - tj3) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        long double term = fact(k) * fact((tj1 + tj2 - tj3) / 2 - k) *
                           fact((tj1 - tm1) / 2 - k) * fact((tj2 + tm2) / 2 - k) *
                           fact((tj3 - tj2 + tm1) / 2 + k) * fact((tj3 - tj1 - tm2) / 2 + k);
        sum += parity(k) / term;
    }
    long double pref = sqrt_delta(tj1, tj2, tj3) *
        std::sqrt(fact((tj1 + tm1) / 2) * fact((tj1 - tm1) / 2) *
                  fact((tj2 + tm2) / 2) * fact((tj2 - tm2) / 2) *
                  fact((tj3 + tm3) / 2) * fact((tj3 - tm3) / 2));
    int ph = parity((tj1 - tj2 - tm3) / 2);
    return static_cast<double>(ph * pref * sum);
}

double six_j(double j1, double j2, double j3, double j4, double j5, double j6) {
    const int ta = twice(j1), tb = twice(j2), tc = twice(j3);
    const int td = twice(j4), te = twice(j5), tf = twice(j6);
    if (!triangle2(ta, tb, tc) || !triangle2(ta, te, tf) ||
        !triangle2(td, tb, tf) || !triangle2(td, te, tc))
        return 0.0;

    long double pref = sqrt_delta(ta, tb, tc) * sqrt_delta(ta, te, tf) *
                       sqrt_delta(td, tb, tf) * sqrt_delta(td, te, tc);
    const int s1 = (ta + tb + tc) / 2, s2 = (ta + te + tf) / 2;
    const int s3 = (td + tb + tf) / 2, s4 = (td + te + tc) / 2;
    const int q1 = (ta + tb + td + te) / 2, q2 = (tb + tc + te + tf) / 2,
              q3 = (tc + ta + tf + td) / 2;
    const int kmin = std::max({s1, s2, s3, s4});
    const int kmax = std::min({q1, q2, q3});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        long double term = fact(k + 1) /
            (fact(k - s1) * fact(k - s2) * fact(k - s3) * fact(k - s4) *
             fact(q1 - k) * fact(q2 - k) * fact(q3 - k));
        sum += parity(k) * term;
    }
    return static_cast<double>(pref * sum);
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
    if (std::abs(m1 + m2 - m) > 1e-9) return 0.0;
    const int ph = parity((twice(j1) - twice(j2) + twice(m)) / 2);
    return ph * std::sqrt(2.0 * j + 1.0) * three_j(j1, j2, j, m1, m2, -m);
}

}  // namespace nanotrap::wigner
