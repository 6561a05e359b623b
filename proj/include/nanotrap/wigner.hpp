#pragma once

namespace nanotrap::wigner {

// Wigner 3-j and 6-j symbols and Clebsch-Gordan coefficients for the small
// angular momenta of the hyperfine problem (j <= ~8).  Racah's closed-form
// sums evaluated with an extended-precision factorial table; the unit tests
// pin them against exact rational values and orthogonality sums at 1e-12.
//
// Arguments are the actual (possibly half-integer) quantum numbers.

double three_j(double j1, double j2, double j3, double m1, double m2, double m3);
double six_j(double j1, double j2, double j3, double j4, double j5, double j6);
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m);

bool triangle_ok(double j1, double j2, double j3);

}  // namespace nanotrap::wigner
