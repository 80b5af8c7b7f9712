#include "amo/rational.hpp"

#include <cmath>
#include <numeric>

#include "amo/errors.hpp"

namespace amo {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw domain_error("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    p = num / g;
    q = den / g;
}

std::string Rational::str() const {
    return std::to_string(p) + "/" + std::to_string(q);
}

double ContinuedFraction::value() const {
    double v = 0.0;
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it)
        v = 1.0 / (static_cast<double>(*it) + v);
    return v;
}

ContinuedFraction cf_expand(double x, int depth) {
    if (!(x > 0.0 && x < 1.0)) throw domain_error("cf_expand: x must lie in (0,1)");
    if (depth < 1) throw domain_error("cf_expand: depth must be >= 1");

    ContinuedFraction cf;
    double frac = x;
    for (int k = 0; k < depth; ++k) {
        // below this the quotient is dominated by accumulated rounding
        if (frac < 1e-12) break;
        double inv = 1.0 / frac;
        double a = std::floor(inv);
        cf.quotients.push_back(static_cast<std::int64_t>(a));
        frac = inv - a;
    }
    return cf;
}

std::vector<Rational> convergents(const ContinuedFraction& cf) {
    if (cf.quotients.empty()) throw domain_error("convergents: empty continued fraction");

    constexpr std::int64_t kDenomCap = 1000000;
    std::vector<Rational> out;
    // seeds for x = [0; a1, a2, ...]: the implicit zeroth convergent is 0/1
    std::int64_t pm1 = 0, pm2 = 1;  // p_{k-1}, p_{k-2}
    std::int64_t qm1 = 1, qm2 = 0;
    for (std::int64_t a : cf.quotients) {
        std::int64_t pk = a * pm1 + pm2;
        std::int64_t qk = a * qm1 + qm2;
        if (qk > kDenomCap) break;
        out.emplace_back(pk, qk);
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
    }
    return out;
}

double preset_alpha(const std::string& name) {
    if (name == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
    if (name == "liouville4") {
        // sum 10^(-k!) for k = 1..4: k! = 1, 2, 6, 24
        return 1e-1 + 1e-2 + 1e-6 + 1e-24;
    }
    throw domain_error("unknown alpha preset: " + name);
}

}  // namespace amo
