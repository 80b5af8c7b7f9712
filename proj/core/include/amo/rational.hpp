#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace amo {

/// Reduced fraction p/q with q >= 1.
struct Rational {
    std::int64_t p = 0;
    std::int64_t q = 1;

    Rational() = default;
    /// Normalizes: reduces by gcd, moves the sign to p. Throws domain_error on q == 0.
    Rational(std::int64_t num, std::int64_t den);

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Continued fraction [a_1, a_2, ...] of a number in (0,1); all quotients >= 1.
struct ContinuedFraction {
    std::vector<std::int64_t> quotients;

    /// Value reconstructed from the quotients (bottom-up evaluation).
    double value() const;
};

/// Continued-fraction expansion of x in (0,1), at most `depth` quotients.
/// Stops early when the remaining fractional part drops below 1e-12
/// (exact rationals terminate; rounding garbage is never emitted).
ContinuedFraction cf_expand(double x, int depth);

/// Convergents p_k/q_k via the standard three-term recurrence.
/// Denominators are capped at 1e6; convergents past the cap are dropped.
std::vector<Rational> convergents(const ContinuedFraction& cf);

/// Named irrational presets for the CLI and tests.
///   golden     : (sqrt(5)-1)/2, the badly approximable extreme
///   liouville4 : sum of 10^(-k!) for k = 1..4, a very well approximable number
double preset_alpha(const std::string& name);

}  // namespace amo
