#include "amo/nonhermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amo/errors.hpp"
#include "amo/transfer.hpp"

namespace amo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using C = std::complex<double>;

// Nearest-neighbor structure: uniform bins, outward ring search.
class BinnedSet {
  public:
    explicit BinnedSet(const std::vector<C>& pts) : pts_(pts) {
        double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
        for (const C& p : pts) {
            x0 = std::min(x0, p.real());
            x1 = std::max(x1, p.real());
            y0 = std::min(y0, p.imag());
            y1 = std::max(y1, p.imag());
        }
        double w = x1 - x0, h = y1 - y0;
        cs_ = std::sqrt(std::max(w * h, 1e-300) / static_cast<double>(pts.size()));
        cs_ = std::max(cs_, std::max(w, h) / 4096.0);
        if (cs_ <= 0.0) cs_ = 1.0;
        x0_ = x0;
        y0_ = y0;
        nx_ = static_cast<int>(w / cs_) + 1;
        ny_ = static_cast<int>(h / cs_) + 1;
        cells_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (std::size_t i = 0; i < pts.size(); ++i)
            cells_[cell_of(pts[i])].push_back(static_cast<int>(i));
    }

    double nearest(const C& p) const {
        // start from the in-grid cell closest to p; d0 corrects the ring lower
        // bound for queries outside the bounding box (possibly far outside)
        int cx = static_cast<int>(std::clamp(std::floor((p.real() - x0_) / cs_), 0.0,
                                             static_cast<double>(nx_ - 1)));
        int cy = static_cast<int>(std::clamp(std::floor((p.imag() - y0_) / cs_), 0.0,
                                             static_cast<double>(ny_ - 1)));
        double dx = std::max({x0_ - p.real(), p.real() - (x0_ + nx_ * cs_), 0.0});
        double dy = std::max({y0_ - p.imag(), p.imag() - (y0_ + ny_ * cs_), 0.0});
        double d0 = std::hypot(dx, dy);
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0;; ++r) {
            if (r > 1 && (r - 1) * cs_ - d0 > best) break;
            bool any = false;
            auto scan = [&](int ix, int iy) {
                if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return;
                any = true;
                for (int i : cells_[static_cast<std::size_t>(iy) * nx_ + ix])
                    best = std::min(best, std::abs(p - pts_[i]));
            };
            for (int ix = cx - r; ix <= cx + r; ++ix) {
                scan(ix, cy - r);
                if (r > 0) scan(ix, cy + r);
            }
            for (int iy = cy - r + 1; iy <= cy + r - 1; ++iy) {
                scan(cx - r, iy);
                scan(cx + r, iy);
            }
            // ring has left the grid: every cell has been visited
            if (!any && r > nx_ + ny_ + 2) break;
        }
        return best;
    }

  private:
    std::size_t cell_of(const C& p) const {
        int ix = std::clamp(static_cast<int>((p.real() - x0_) / cs_), 0, nx_ - 1);
        int iy = std::clamp(static_cast<int>((p.imag() - y0_) / cs_), 0, ny_ - 1);
        return static_cast<std::size_t>(iy) * nx_ + ix;
    }

    const std::vector<C>& pts_;
    double x0_, y0_, cs_;
    int nx_, ny_;
    std::vector<std::vector<int>> cells_;
};

}  // namespace

std::vector<C> poly_roots(const CPoly& coeffs, double tol, int max_iters) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && coeffs[deg] == C(0.0)) --deg;
    if (deg < 1) throw domain_error("poly_roots: degree must be >= 1");
    C lead = coeffs[deg];

    double radius = 1.0;
    for (int k = 0; k < deg; ++k) radius = std::max(radius, 1.0 + std::abs(coeffs[k] / lead));
    std::vector<C> z(deg);
    for (int k = 0; k < deg; ++k)
        z[k] = radius * std::exp(C(0.0, kTwoPi * k / deg + 0.4));

    CPoly p(coeffs.begin(), coeffs.begin() + deg + 1);
    CPoly dp = poly::derivative(p);
    for (int it = 0; it < max_iters; ++it) {
        double maxupd = 0.0;
        for (int k = 0; k < deg; ++k) {
            C pv = poly::eval(p, z[k]);
            if (pv == C(0.0)) continue;
            C dv = poly::eval(dp, z[k]);
            C w = (dv == C(0.0)) ? C(1e-6) : pv / dv;
            C s = 0.0;
            for (int j = 0; j < deg; ++j)
                if (j != k) s += C(1.0) / (z[k] - z[j]);
            C den = C(1.0) - w * s;
            C corr = (den == C(0.0)) ? w : w / den;
            z[k] -= corr;
            maxupd = std::max(maxupd, std::abs(corr));
        }
        if (maxupd < tol) {
            std::sort(z.begin(), z.end(), [](const C& a, const C& b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
            return z;
        }
    }
    throw roots_failed("poly_roots: no convergence", z);
}

PointCloud hdelta_cloud(const Rational& alpha, double beta, const Perturbation& pert,
                        int theta_grid, int kappa_grid) {
    if (theta_grid < 1 || kappa_grid < 1) throw domain_error("hdelta_cloud: empty grid");
    int q = static_cast<int>(alpha.q);
    if (!pert.is_hermitian() && q > 60)
        throw size_error("hdelta_cloud: q > 60 with delta != 1 exceeds coefficient range");

    PointCloud cloud;
    cloud.theta_grid = theta_grid;
    cloud.kappa_grid = kappa_grid;
    cloud.points.reserve(static_cast<std::size_t>(q) * theta_grid * kappa_grid);
    for (int j = 0; j < theta_grid; ++j) {
        DiscriminantPoly disc = discriminant_poly(alpha, beta, kTwoPi * j / theta_grid, pert);
        for (int k = 0; k < kappa_grid; ++k) {
            CPoly c = disc.coeffs;
            c[0] -= 2.0 * std::cos(kTwoPi * k / kappa_grid);
            try {
                for (C z : poly_roots(c)) {
                    // Hermitian case: the spectrum is real, so project away the
                    // conjugate-pair splitting the root finder produces at
                    // band-edge double roots.
                    if (pert.is_hermitian()) z = C(z.real(), 0.0);
                    cloud.points.push_back({z, j, k});
                }
            } catch (const roots_failed&) {
                ++cloud.skipped_grid_points;
            }
        }
    }
    return cloud;
}

HausdorffResult hausdorff_distance(const std::vector<C>& a, const std::vector<C>& b) {
    if (a.empty() || b.empty()) throw domain_error("hausdorff_distance: empty point set");
    BinnedSet bb(b), ba(a);
    HausdorffResult r;
    for (const C& p : a) r.d_ab = std::max(r.d_ab, bb.nearest(p));
    for (const C& p : b) r.d_ba = std::max(r.d_ba, ba.nearest(p));
    r.d_max = std::max(r.d_ab, r.d_ba);
    return r;
}

}  // namespace amo
