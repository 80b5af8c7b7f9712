#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "amo/rational.hpp"

namespace amo {

/// Frequency parameter: either an exact rational approximant p/q or a real number.
struct Alpha {
    double val = 0.0;
    std::optional<Rational> rat;

    Alpha() = default;
    Alpha(Rational r) : val(r.value()), rat(r) {}
    explicit Alpha(double v) : val(v) {}

    bool is_rational() const { return rat.has_value(); }
    /// Phase 2*pi*alpha*n, computed mod 2*pi exactly for rational alpha.
    double phase(long long n) const;
};

struct AmoParams {
    Alpha alpha;
    double beta = 0.0;
    double theta = 0.0;  // stored unreduced; canonicalize only on display
};

struct Perturbation {
    double delta = 1.0;

    Perturbation() = default;
    explicit Perturbation(double d);
    bool is_hermitian() const { return delta == 1.0; }
};

/// Symmetric tridiagonal truncation with unit off-diagonals and Dirichlet ends.
struct TridiagonalOperator {
    std::vector<double> diagonal;  // size N >= 2

    int size() const { return static_cast<int>(diagonal.size()); }
};

/// v_n = beta * (delta * e^{i(2 pi alpha n + theta)} + delta^{-1} e^{-i(2 pi alpha n + theta)}).
/// Real when delta == 1 (then v_n = 2 beta cos(2 pi alpha n + theta)).
std::complex<double> potential_sample(const AmoParams& params, const Perturbation& pert,
                                      long long n);

/// Real potential sample for the self-adjoint case (delta = 1).
double potential_real(const AmoParams& params, long long n);

/// Finite-volume truncation, self-adjoint case only (delta must be 1).
TridiagonalOperator truncation_matrix(const AmoParams& params, int N);

}  // namespace amo
