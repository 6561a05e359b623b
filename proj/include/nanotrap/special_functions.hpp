#pragma once

namespace nanotrap::sf {

// Bessel J_l and modified Bessel K_l for the orders used by the HE11 mode
// (l = 0, 1, 2), plus first derivatives of the l = 1 functions.
// Backed by the C++17 cylindrical Bessel functions; the unit tests validate
// them against independent series/asymptotic evaluations to 1e-12 relative
// over the argument range the mode solver visits (0.1 .. 20 and beyond).

double bessel_j(int l, double x);
double bessel_k(int l, double x);

double bessel_j1_prime(double x);  // J1'(x) = (J0 - J2)/2
double bessel_k1_prime(double x);  // K1'(x) = -(K0 + K2)/2

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
struct Quadrature {
    const double* nodes;
    const double* weights;
    int n;
};
Quadrature gauss_legendre(int n);

}  // namespace nanotrap::sf
