#include "amo/operator_model.hpp"

#include <cmath>
#include <numbers>

#include "amo/errors.hpp"

namespace amo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Alpha::phase(long long n) const {
    if (rat) {
        // exact period-q arithmetic keeps the phase error independent of n
        long long q = rat->q;
        long long r = ((rat->p % q) * (n % q)) % q;
        if (r < 0) r += q;
        return kTwoPi * static_cast<double>(r) / static_cast<double>(q);
    }
    return kTwoPi * val * static_cast<double>(n);
}

Perturbation::Perturbation(double d) : delta(d) {
    if (!(d > 0.0)) throw domain_error("Perturbation: delta must be > 0");
}

std::complex<double> potential_sample(const AmoParams& params, const Perturbation& pert,
                                      long long n) {
    double arg = params.alpha.phase(n) + params.theta;
    std::complex<double> e{std::cos(arg), std::sin(arg)};
    return params.beta * (pert.delta * e + std::conj(e) / pert.delta);
}

double potential_real(const AmoParams& params, long long n) {
    return 2.0 * params.beta * std::cos(params.alpha.phase(n) + params.theta);
}

TridiagonalOperator truncation_matrix(const AmoParams& params, int N) {
    if (N < 2) throw domain_error("truncation_matrix: N must be >= 2");
    TridiagonalOperator op;
    op.diagonal.resize(N);
    for (int n = 0; n < N; ++n) op.diagonal[n] = potential_real(params, n);
    return op;
}

}  // namespace amo
