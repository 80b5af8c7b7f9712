#pragma once

#include <complex>
#include <vector>

#include "amo/operator_model.hpp"
#include "amo/poly.hpp"
#include "amo/rational.hpp"

namespace amo {

/// Approximant spectrum of H_delta: Floquet roots tagged by grid fiber.
struct PointCloud {
    struct Point {
        std::complex<double> z;
        int theta_index;
        int kappa_index;
    };
    std::vector<Point> points;
    int theta_grid = 0;
    int kappa_grid = 0;
    int skipped_grid_points = 0;  // (theta, kappa) pairs lost to roots_failed

    int size() const { return static_cast<int>(points.size()); }
};

struct HausdorffResult {
    double d_ab = 0.0;  // sup over a of dist to b
    double d_ba = 0.0;
    double d_max = 0.0;
};

/// All roots by Aberth simultaneous iteration, deterministically initialized on
/// the circle of radius 1 + max|c_k / c_deg|. Converged when max update < tol.
std::vector<std::complex<double>> poly_roots(const CPoly& coeffs, double tol = 1e-10,
                                             int max_iters = 300);

/// Union over the (theta, kappa) grids of the roots of Delta_delta(z, theta) - 2 cos kappa.
/// Canonical order: theta index, then kappa index, then roots by (re, im).
/// delta != 1 is capped at q <= 60 (coefficient dynamic range).
PointCloud hdelta_cloud(const Rational& alpha, double beta, const Perturbation& pert,
                        int theta_grid, int kappa_grid);

/// Directed sup-min distances both ways; brute force with spatial binning.
HausdorffResult hausdorff_distance(const std::vector<std::complex<double>>& a,
                                   const std::vector<std::complex<double>>& b);

}  // namespace amo
