// Double-precision Bessel J0, J1, Y0, Y1 and Hankel H0^(1), H1^(1).
// Target accuracy 1e-10 absolute over the arguments used by the Green
// kernel (up to k*sqrt(2) at the highest wavenumbers, and beyond).
#pragma once

#include <complex>

namespace invmed {

double bessel_j0(double x);  // x >= 0
double bessel_j1(double x);  // x >= 0
double bessel_y0(double x);  // x > 0
double bessel_y1(double x);  // x > 0

// H_order^(1)(x) = J_order(x) + i*Y_order(x), order 0 or 1.
std::complex<double> hankel1(int order, double x);

}  // namespace invmed
