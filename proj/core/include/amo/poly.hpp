#pragma once

#include <complex>
#include <vector>

namespace amo {

/// Dense polynomial with complex coefficients, ascending degree order.
using CPoly = std::vector<std::complex<double>>;
/// Dense polynomial with real coefficients, ascending degree order.
using RPoly = std::vector<double>;

namespace poly {

CPoly add(const CPoly& a, const CPoly& b);
CPoly mul(const CPoly& a, const CPoly& b);
CPoly scale(const CPoly& a, std::complex<double> s);
std::complex<double> eval(const CPoly& a, std::complex<double> z);
CPoly derivative(const CPoly& a);

double eval(const RPoly& a, double x);
RPoly derivative(const RPoly& a);

/// Drops a (numerically) zero leading coefficient tail; keeps at least one term.
CPoly trim(CPoly a, double tol = 0.0);

}  // namespace poly
}  // namespace amo
