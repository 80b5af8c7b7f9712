#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace amo {

/// Invalid input values (out-of-range parameters, malformed objects).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds a documented cap (e.g. q over the coefficient limit).
struct size_error : std::length_error {
    using std::length_error::length_error;
};

/// A numerical routine failed to reach its contract.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Chambers fit residual above the bug-signalling threshold.
struct decomposition_failed : numeric_error {
    decomposition_failed(const std::string& what, double res)
        : numeric_error(what), residual(res) {}
    double residual;
};

/// Simultaneous root iteration ran out of iterations; carries the best iterate.
struct roots_failed : numeric_error {
    roots_failed(const std::string& what, std::vector<std::complex<double>> it)
        : numeric_error(what), best_iterate(std::move(it)) {}
    std::vector<std::complex<double>> best_iterate;
};

/// Equilibrium problem on a degenerate (single-point) support.
struct capacity_zero_error : numeric_error {
    using numeric_error::numeric_error;
};

}  // namespace amo
