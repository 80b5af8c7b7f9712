#pragma once

#include <vector>

#include "amo/operator_model.hpp"
#include "amo/rational.hpp"

namespace amo {

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Sorted disjoint closed intervals.
struct BandSet {
    std::vector<Band> bands;

    bool contains(double E, double tol = 0.0) const;
    double total_measure() const;
    double min() const { return bands.front().lo; }
    double max() const { return bands.back().hi; }
};

/// Discrete probability measure on the real line: s_1 < ... < s_M, weights > 0.
struct StepMeasure {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
    /// Smallest support point with cumulative mass >= t.
    double quantile(double t) const;
    /// Mass of (-inf, E].
    double cdf(double E) const;
};

struct GapReport {
    double total_measure = 0.0;
    int band_count = 0;
    struct Gap {
        double left, right, length;
    };
    std::vector<Gap> gaps;
};

struct LocalizationResult {
    double eigenvalue = 0.0;
    double decay_rate = 0.0;
    double fit_residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Number of eigenvalues of the truncation strictly below E (Sturm sign count).
int sturm_count(const TridiagonalOperator& op, double E);

/// All N eigenvalues by bisection on the Sturm count, each to absolute tolerance tol.
std::vector<double> sturm_eigenvalues(const TridiagonalOperator& op, double tol);

/// Spectrum of the period-q operator at fixed theta: Delta^{-1}([-2, 2]).
BandSet bands_fixed_theta(const Rational& alpha, double beta, double theta);

/// Union over theta: {E : |A(E)| <= 2 + 2|beta|^q} with A the Chambers polynomial,
/// evaluated through the stable trace recurrence.
BandSet bands_union_theta(const Rational& alpha, double beta);

/// Integrated density of states at E: theta-averaged normalized eigenvalue count.
double ids_estimate(const AmoParams& params, double E, int N, int theta_samples);

/// Equal-weight M-point quantile discretization of the union-spectrum IDS
/// (pullback-arcsine density per monotone branch of A).
StepMeasure ids_measure(const Rational& alpha, double beta, int M);

/// Inverse-iteration localization probe at E_target on an N-site truncation.
/// The shift is snapped to the nearest truncation eigenvalue before iterating.
LocalizationResult localization_probe(const AmoParams& params, double E_target, int N);

/// Normalized eigenvector of the eigenvalue nearest E_target (same snapped
/// inverse iteration as the probe). Useful to classify boundary-localized
/// modes of Dirichlet truncations.
std::vector<double> eigenvector_nearest(const TridiagonalOperator& op, double E_target);

GapReport gap_report(const BandSet& bands);

}  // namespace amo
