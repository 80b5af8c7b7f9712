#pragma once

#include <complex>
#include <vector>

#include "amo/spectra.hpp"

namespace amo {

/// Real scalar field sampled on a uniform grid over a rectangle (row-major, y outer).
struct ScalarField {
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    int nx = 0, ny = 0;
    std::vector<double> values;      // size nx * ny
    std::vector<char> singular;      // nonzero where a node hit a support point

    double x(int ix) const { return x_min + (x_max - x_min) * ix / (nx - 1); }
    double y(int iy) const { return y_min + (y_max - y_min) * iy / (ny - 1); }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    bool singular_at(int ix, int iy) const {
        return singular[static_cast<std::size_t>(iy) * nx + ix] != 0;
    }
};

struct Polyline {
    std::vector<std::complex<double>> points;
    bool closed = false;
};

struct LogPotentialValue {
    double value = 0.0;
    bool singular = false;  // some |z - s_j| < 1e-14; value is a -inf surrogate
};

struct RobinResult {
    double robin_constant = 0.0;
    double capacity = 0.0;
};

/// Sum_j w_j log|z - s_j|. Node collisions are flagged, not thrown.
LogPotentialValue log_potential(std::complex<double> z, const StepMeasure& mu);

/// Discrete equilibrium measure of the band set: fixed midpoint support grid
/// (M points split across bands proportionally to length), weights by projected
/// gradient ascent on the simplex. Stops at max weight change < 1e-10.
StepMeasure equilibrium_measure(const BandSet& bands, int M, int max_iters);

/// Diagonal-excluded discrete Robin constant and capacity e^{-I}.
/// Bias is O(log M / M); M >= 32 distinct points required.
RobinResult robin_capacity(const StepMeasure& mu);

ScalarField potential_field(const StepMeasure& mu, double x_min, double x_max, double y_min,
                            double y_max, int nx, int ny);

/// Marching-squares level set {field = c} with linear edge interpolation.
/// Cells touching singular nodes are skipped; saddles use the cell-average rule.
std::vector<Polyline> level_curves(const ScalarField& field, double c);

}  // namespace amo
