#pragma once

#include <complex>
#include <string>
#include <vector>

#include "amo/rational.hpp"

namespace amo {

/// Empirical pass/fail gates, kept in one place so reports stay comparable
/// across toolkit versions.
struct Thresholds {
    static constexpr const char* version = "1";

    static constexpr double duality_edge = 1e-8;
    static constexpr double thouless_dev = 0.02;
    static constexpr double equilibrium_quantile = 0.05;
    static constexpr double theorem1_dev = 0.15;
    static constexpr double theorem1_growth = 1.2;  // slack factor, nonincreasing check
    static constexpr double localization_logbeta = 0.15;
    static constexpr double localization_lyapunov = 0.10;
    static constexpr double localization_control = 0.05;  // beta <= 1 negative control
};

struct VerificationReport {
    struct Entry {
        std::string name;
        double deviation;
        double threshold;
    };
    std::string claim;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<Entry> checks;
    std::vector<std::string> notes;
    bool pass = false;  // all deviations <= thresholds
    double runtime_seconds = 0.0;
};

/// bands_union_theta(alpha, beta) vs beta * bands_union_theta(alpha, 1/beta), edge-for-edge.
VerificationReport check_duality(const Rational& alpha, double beta);

/// |lyapunov_finite(z, N) - log_potential(z, ids_measure(alpha, beta, M))| over samples.
/// Samples must stay at distance >= 0.1 from the band set.
VerificationReport check_thouless(const Rational& alpha, double beta,
                                  const std::vector<std::complex<double>>& z_samples,
                                  long long N, int M);

/// Quantile comparison of ids_measure against the equilibrium measure of the union bands.
VerificationReport check_equilibrium(const Rational& alpha, double beta, int M);

/// Level set of the conductor potential at log(beta) + |log(delta)| vs the H_delta cloud,
/// per convergent; reports Hausdorff deviations and their monotonicity in q.
VerificationReport check_theorem1(const std::vector<Rational>& convergents, double beta,
                                  double delta);

/// Decay rates of localization probes at IDS-quantile energies vs log(beta) and
/// the finite-volume Lyapunov exponent.
VerificationReport check_localization(const Rational& alpha, double beta, int samples);

}  // namespace amo
