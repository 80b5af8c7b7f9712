#pragma once

#include <complex>

#include "amo/operator_model.hpp"
#include "amo/poly.hpp"
#include "amo/rational.hpp"

namespace amo {

using Complex = std::complex<double>;

/// 2x2 complex matrix of the one-step transfer cocycle; determinant 1 by construction.
struct TransferMatrix {
    Complex a, b, c, d;

    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }

    friend TransferMatrix operator*(const TransferMatrix& l, const TransferMatrix& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
};

/// [[z - v, -1], [1, 0]] — one step of the difference equation
/// xi_{n+1} = (z - v_n) xi_n - xi_{n-1}.
TransferMatrix step_matrix(Complex z, Complex v);

/// Ordered period product step(v_{q-1}) * ... * step(v_0).
/// alpha must be rational with denominator q.
TransferMatrix monodromy(Complex z, const AmoParams& params, const Perturbation& pert, int q);

/// Trace of the period-q monodromy as an exact degree-q polynomial in z.
struct DiscriminantPoly {
    CPoly coeffs;  // ascending, degree exactly q, leading coefficient 1
    Rational alpha;
    double beta = 0.0;
    double theta = 0.0;
    double delta = 1.0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex eval(Complex z) const { return poly::eval(coeffs, z); }
};

/// Coefficients carried exactly through the 2x2 product; O(q^2). q <= 200.
DiscriminantPoly discriminant_poly(const Rational& alpha, double beta, double theta,
                                   const Perturbation& pert);

/// Chambers decomposition Delta(z, theta) = A(z) - c * cos(q theta), delta = 1 only.
struct ChambersForm {
    RPoly A;          // real coefficients, degree q
    double c = 0.0;   // signed amplitude; |c| = 2 beta^q when the fit is healthy
    double residual;  // scale-normalized max mismatch over the theta grid x z-sample
};

/// Least-squares fit over a uniform theta grid; throws decomposition_failed when
/// the normalized residual exceeds 1e-6 (an implementation bug, not a math failure).
ChambersForm chambers_decompose(const Rational& alpha, double beta, const Perturbation& pert,
                                int theta_grid_size);

/// Scaled evaluation of Delta(E, theta) and d Delta/dE for the self-adjoint case:
/// value = t * exp(log_scale). Stable at any q (no coefficient cancellation).
struct ScaledTrace {
    double t;
    double dt;
    double log_scale;
};
ScaledTrace discriminant_scaled(double E, const Rational& alpha, double beta, double theta);

/// Finite-volume Lyapunov exponent of the cocycle at z: norm-growth rate with
/// per-step max-norm renormalization, fixed summation order. N >= 100.
double lyapunov_finite(Complex z, const AmoParams& params, const Perturbation& pert,
                       long long N);

}  // namespace amo
