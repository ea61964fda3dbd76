#pragma once

// J-Bessel functions of integer order.

#include <vector>

namespace momentlab {

/// J_n(x) for 0 <= n <= 1e4, 0 <= x <= 1e8.
///  - x <= n/2: ascending series (long double, log-scaled prefactor);
///  - x >= max(25, n^2): Hankel's asymptotic expansion;
///  - otherwise: J_0, J_1 anchored (Hankel for x >= 25, Miller's normalized
///    backward recurrence below), forward recurrence up to order ~x and a
///    backward ratio recurrence above it.
double bessel_j(int n, double x);

/// J_0(x), ..., J_nmax(x) in one pass.
std::vector<double> bessel_j_orders(double x, int nmax);

/// The ascending series alone; exposed for cross-checks.
double bessel_j_series(int n, double x);

/// Hankel's expansion alone; accurate when x is large compared with n^2.
double bessel_j_hankel(int n, double x);

}  // namespace momentlab
