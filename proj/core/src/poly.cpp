#include "amo/poly.hpp"

#include <algorithm>
#include <cmath>

namespace amo::poly {

CPoly add(const CPoly& a, const CPoly& b) {
    CPoly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

CPoly mul(const CPoly& a, const CPoly& b) {
    if (a.empty() || b.empty()) return {};
    CPoly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

CPoly scale(const CPoly& a, std::complex<double> s) {
    CPoly r = a;
    for (auto& c : r) c *= s;
    return r;
}

std::complex<double> eval(const CPoly& a, std::complex<double> z) {
    std::complex<double> r = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * z + *it;
    return r;
}

CPoly derivative(const CPoly& a) {
    if (a.size() <= 1) return {std::complex<double>(0.0)};
    CPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
    return r;
}

double eval(const RPoly& a, double x) {
    double r = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
    return r;
}

RPoly derivative(const RPoly& a) {
    if (a.size() <= 1) return {0.0};
    RPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
    return r;
}

CPoly trim(CPoly a, double tol) {
    while (a.size() > 1 && std::abs(a.back()) <= tol) a.pop_back();
    return a;
}

}  // namespace amo::poly
