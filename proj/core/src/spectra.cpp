#include "amo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amo/errors.hpp"
#include "amo/transfer.hpp"

namespace amo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

// log(exp(a) + exp(b)) without overflow
double logaddexp(double a, double b) {
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// value relative to the threshold: sign(t) * exp(logs - logT + log|t|), saturated
double over_threshold(double t, double logs, double logT) {
    if (t == 0.0) return 0.0;
    double l = logs - logT + std::log(std::abs(t));
    return std::copysign(std::exp(std::min(l, 690.0)), t);
}

// Stable evaluator of a degree-q real "trace" function and its derivative.
struct TraceFn {
    Rational alpha;
    double beta;
    double theta;     // used only when !average
    bool average;     // average of theta = 0 and pi/q (theta-free Chambers A)

    ScaledTrace operator()(double E) const {
        if (!average) return discriminant_scaled(E, alpha, beta, theta);
        auto s1 = discriminant_scaled(E, alpha, beta, 0.0);
        auto s2 = discriminant_scaled(E, alpha, beta, kPi / static_cast<double>(alpha.q));
        double L = std::max(s1.log_scale, s2.log_scale);
        return {0.5 * (s1.t * std::exp(s1.log_scale - L) + s2.t * std::exp(s2.log_scale - L)),
                0.5 * (s1.dt * std::exp(s1.log_scale - L) + s2.dt * std::exp(s2.log_scale - L)),
                L};
    }
    double ratio(double E, double logT) const {
        auto s = (*this)(E);
        return over_threshold(s.t, s.log_scale, logT);
    }
};

// Critical points of the trace function: sign changes of the (scaled) derivative
// on a grid of 64q points, refined by bisection. Exactly q-1 expected; the grid
// is refined up to twice before giving up.
std::vector<double> critical_points(const TraceFn& f, int q, double lo, double hi) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        int ng = 64 * q << (2 * attempt);
        std::vector<double> crits;
        double step = (hi - lo) / (ng - 1);
        double prev = f(lo).dt;
        double prev_x = lo;
        for (int i = 1; i < ng; ++i) {
            double x = lo + step * i;
            double cur = f(x).dt;
            if (prev != 0.0 && std::signbit(prev) != std::signbit(cur)) {
                double a = prev_x, b = x, sa = prev;
                for (int it = 0; it < 80; ++it) {
                    double m = 0.5 * (a + b);
                    double dm = f(m).dt;
                    if (dm != 0.0 && std::signbit(dm) == std::signbit(sa))
                        a = m;
                    else
                        b = m;
                }
                crits.push_back(0.5 * (a + b));
            }
            prev = cur;
            prev_x = x;
        }
        if (static_cast<int>(crits.size()) == q - 1) return crits;
    }
    throw numeric_error("critical point count does not match q-1");
}

// Solve ratio(E) = target on the monotone branch [a, b].
double solve_on_branch(const TraceFn& f, double logT, double a, double b, double target,
                       bool increasing) {
    double x0 = a, x1 = b;
    for (int it = 0; it < 100; ++it) {
        double m = 0.5 * (x0 + x1);
        double fm = f.ratio(m, logT);
        if ((fm < target) == increasing)
            x0 = m;
        else
            x1 = m;
    }
    return 0.5 * (x0 + x1);
}

BandSet assemble_bands(const TraceFn& f, int q, double logT, double lo, double hi) {
    std::vector<double> bounds;
    bounds.push_back(lo);
    for (double c : critical_points(f, q, lo, hi)) bounds.push_back(c);
    bounds.push_back(hi);

    BandSet out;
    for (int i = 0; i < q; ++i) {
        double a = bounds[i], b = bounds[i + 1];
        double fa = f.ratio(a, logT), fb = f.ratio(b, logT);
        bool inc = fa < fb;
        double enter = inc ? -1.0 : 1.0;
        double exit = -enter;
        // slack absorbs rounding at tangencies: a critical point sitting exactly on
        // the threshold must act as a band edge, not open a spurious micro-gap
        constexpr double kTangencySlack = 1e-9;
        double l = (inc ? fa >= -1.0 - kTangencySlack : fa <= 1.0 + kTangencySlack)
                       ? a
                       : solve_on_branch(f, logT, a, b, enter, inc);
        double u = (inc ? fb <= 1.0 + kTangencySlack : fb >= -1.0 - kTangencySlack)
                       ? b
                       : solve_on_branch(f, logT, a, b, exit, inc);
        if (u < l) u = l;
        out.bands.push_back({l, u});
    }
    // merge bands touching within bisection noise
    std::vector<Band> merged;
    for (const auto& bd : out.bands) {
        if (!merged.empty() && bd.lo - merged.back().hi <= 1e-11)
            merged.back().hi = std::max(merged.back().hi, bd.hi);
        else
            merged.push_back(bd);
    }
    out.bands = std::move(merged);
    return out;
}

double hull_margin(double beta) { return 2.0 + 2.0 * std::abs(beta) + 0.5; }

double log_threshold_union(int q, double beta) {
    if (beta == 0.0) return std::log(2.0);
    return logaddexp(std::log(2.0), std::log(2.0) + q * std::log(std::abs(beta)));
}

// Solves (T - sigma) x = rhs for the unit-off-diagonal tridiagonal T,
// Gaussian elimination with partial pivoting (one fill-in superdiagonal).
std::vector<double> shifted_solve(const std::vector<double>& diag, double sigma,
                                  std::vector<double> r) {
    int n = static_cast<int>(diag.size());
    std::vector<double> d(n), du(n > 1 ? n - 1 : 0, 1.0), du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<double> dl(n > 1 ? n - 1 : 0, 1.0);
    for (int i = 0; i < n; ++i) d[i] = diag[i] - sigma;
    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = 1e-300;  // exact shift hit; keep iterating
            double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            r[i + 1] -= fact * r[i];
            if (i < n - 2) du2[i] = 0.0;
        } else {
            double fact = d[i] / dl[i];
            d[i] = dl[i];
            double tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if (i < n - 2) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = tmp;
            std::swap(r[i], r[i + 1]);
            r[i + 1] -= fact * r[i];
        }
    }
    std::vector<double> x(n);
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
    x[n - 1] = r[n - 1] / d[n - 1];
    if (n > 1) x[n - 2] = (r[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i) x[i] = (r[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    return x;
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double kth_eigenvalue(const TridiagonalOperator& op, int k, double tol) {
    double lo = op.diagonal[0], hi = op.diagonal[0];
    for (double v : op.diagonal) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    lo -= 2.0 + tol;
    hi += 2.0 + tol;
    while (hi - lo > tol) {
        double m = 0.5 * (lo + hi);
        if (sturm_count(op, m) >= k + 1)
            hi = m;
        else
            lo = m;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

bool BandSet::contains(double E, double tol) const {
    for (const auto& b : bands)
        if (E >= b.lo - tol && E <= b.hi + tol) return true;
    return false;
}

double BandSet::total_measure() const {
    double s = 0.0;
    for (const auto& b : bands) s += b.length();
    return s;
}

double StepMeasure::quantile(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        acc += weights[i];
        if (acc >= t - 1e-15) return points[i];
    }
    return points.back();
}

double StepMeasure::cdf(double E) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size() && points[i] <= E; ++i) acc += weights[i];
    return acc;
}

int sturm_count(const TridiagonalOperator& op, double E) {
    int cnt = 0;
    double t = 1.0;
    for (std::size_t i = 0; i < op.diagonal.size(); ++i) {
        t = op.diagonal[i] - E - (i ? 1.0 / t : 0.0);
        if (t == 0.0) t = -1e-300;
        if (t < 0.0) ++cnt;
    }
    return cnt;
}

std::vector<double> sturm_eigenvalues(const TridiagonalOperator& op, double tol) {
    if (tol <= 0.0) throw domain_error("sturm_eigenvalues: tol must be > 0");
    std::vector<double> eigs(op.size());
    for (int k = 0; k < op.size(); ++k) eigs[k] = kth_eigenvalue(op, k, tol);
    return eigs;
}

BandSet bands_fixed_theta(const Rational& alpha, double beta, double theta) {
    int q = static_cast<int>(alpha.q);
    TraceFn f{alpha, beta, theta, false};
    double m = hull_margin(beta);
    return assemble_bands(f, q, std::log(2.0), -m, m);
}

BandSet bands_union_theta(const Rational& alpha, double beta) {
    int q = static_cast<int>(alpha.q);
    TraceFn f{alpha, beta, 0.0, true};
    double m = hull_margin(beta);
    return assemble_bands(f, q, log_threshold_union(q, beta), -m, m);
}

double ids_estimate(const AmoParams& params, double E, int N, int theta_samples) {
    if (N < 100) throw domain_error("ids_estimate: N must be >= 100");
    if (theta_samples < 1) throw domain_error("ids_estimate: theta_samples must be >= 1");
    AmoParams p = params;
    double total = 0.0;
    for (int j = 0; j < theta_samples; ++j) {
        p.theta = params.theta + kTwoPi * j / theta_samples;
        total += sturm_count(truncation_matrix(p, N), E);
    }
    return total / (static_cast<double>(N) * theta_samples);
}

StepMeasure ids_measure(const Rational& alpha, double beta, int M) {
    if (M < 16) throw domain_error("ids_measure: M must be >= 16");
    int q = static_cast<int>(alpha.q);
    TraceFn f{alpha, beta, 0.0, true};
    double logT = log_threshold_union(q, beta);
    double hull = hull_margin(beta);

    std::vector<double> bounds;
    bounds.push_back(-hull);
    for (double c : critical_points(f, q, -hull, hull)) bounds.push_back(c);
    bounds.push_back(hull);

    StepMeasure mu;
    mu.points.reserve(M);
    for (int j = 0; j < M; ++j) {
        double u = (j + 0.5) / M;
        int br = std::min(static_cast<int>(u * q), q - 1);
        double sloc = std::clamp(u * q - br, 1e-12, 1.0 - 1e-12);
        double a = bounds[br], b = bounds[br + 1];
        bool inc = f.ratio(a, logT) < 0.0;
        // arcsine quantile on [-T, T] pulled back through the monotone branch
        double target = inc ? -std::cos(kPi * sloc) : std::cos(kPi * sloc);
        mu.points.push_back(solve_on_branch(f, logT, a, b, target, inc));
    }
    mu.weights.assign(M, 1.0 / M);
    // collapse numerically coincident quantiles (touching bands) into one atom
    StepMeasure out;
    for (int j = 0; j < M; ++j) {
        if (!out.points.empty() && mu.points[j] <= out.points.back()) {
            out.weights.back() += mu.weights[j];
        } else {
            out.points.push_back(mu.points[j]);
            out.weights.push_back(mu.weights[j]);
        }
    }
    return out;
}

namespace {

struct InverseIterate {
    std::vector<double> x;
    double eigenvalue = 0.0;
    bool converged = false;
    int iterations = 0;
};

InverseIterate inverse_iterate_nearest(const TridiagonalOperator& op, double E_target) {
    const std::vector<double>& v = op.diagonal;
    int N = static_cast<int>(v.size());

    // snap the shift to the nearest truncation eigenvalue
    int k = sturm_count(op, E_target);
    double sigma = E_target;
    {
        double best = 1e300;
        for (int c : {k - 1, k}) {
            if (c < 0 || c >= N) continue;
            double e = kth_eigenvalue(op, c, 1e-12);
            if (std::abs(e - E_target) < best) {
                best = std::abs(e - E_target);
                sigma = e;
            }
        }
    }

    InverseIterate res;
    std::vector<double> x(N, 0.0);
    x[N / 2] = 1.0;
    for (int it = 1; it <= 500; ++it) {
        res.iterations = it;
        std::vector<double> y = shifted_solve(v, sigma, x);
        double nrm = 0.0;
        for (double t : y) nrm += t * t;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        for (double& t : y) t /= nrm;
        // Rayleigh quotient and eigenpair residual
        double lam = 0.0;
        std::vector<double> Hy(N);
        for (int i = 0; i < N; ++i) {
            Hy[i] = v[i] * y[i];
            if (i > 0) Hy[i] += y[i - 1];
            if (i + 1 < N) Hy[i] += y[i + 1];
            lam += y[i] * Hy[i];
        }
        double rr = 0.0;
        for (int i = 0; i < N; ++i) {
            double d = Hy[i] - lam * y[i];
            rr += d * d;
        }
        rr = std::sqrt(rr);
        res.eigenvalue = lam;
        x = std::move(y);
        if (rr < 1e-10) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    return res;
}

}  // namespace

std::vector<double> eigenvector_nearest(const TridiagonalOperator& op, double E_target) {
    if (op.diagonal.size() < 2) throw domain_error("eigenvector_nearest: N must be >= 2");
    return inverse_iterate_nearest(op, E_target).x;
}

LocalizationResult localization_probe(const AmoParams& params, double E_target, int N) {
    if (N < 200) throw domain_error("localization_probe: N must be >= 200");
    TridiagonalOperator op = truncation_matrix(params, N);

    InverseIterate it = inverse_iterate_nearest(op, E_target);
    LocalizationResult res;
    res.eigenvalue = it.eigenvalue;
    res.converged = it.converged;
    res.iterations = it.iterations;
    std::vector<double> x = std::move(it.x);

    // decay fit: log|xi| vs distance from the peak, middle 80% of each side's
    // decay range, truncated at the rounding-noise plateau
    std::vector<double> a(N);
    int peak = 0;
    for (int i = 0; i < N; ++i) {
        a[i] = std::abs(x[i]);
        if (a[i] > a[peak]) peak = i;
    }
    std::vector<std::pair<double, double>> pts;
    for (int step : {1, -1}) {
        std::vector<std::pair<double, double>> side;
        double runmin = a[peak];
        for (int i = peak + step; i >= 0 && i < N; i += step) {
            if (a[i] < a[peak] * 1e-12) break;
            if (a[i] > runmin * 1e3) break;  // bounced into the noise plateau
            runmin = std::min(runmin, a[i]);
            side.emplace_back(std::abs(i - peak), std::log(a[i]));
        }
        if (side.empty()) continue;
        double D = side.back().first;
        for (const auto& [d, lv] : side)
            if (d >= 0.1 * D && d <= 0.9 * D) pts.push_back({d, lv});
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [d, lv] : pts) {
            sx += d;
            sy += lv;
            sxx += d * d;
            sxy += d * lv;
        }
        double n = static_cast<double>(pts.size());
        double det = n * sxx - sx * sx;
        if (det > 0.0) {
            double slope = (n * sxy - sx * sy) / det;
            double icept = (sy - slope * sx) / n;
            double rr = 0.0;
            for (const auto& [d, lv] : pts) {
                double e = slope * d + icept - lv;
                rr += e * e;
            }
            res.decay_rate = -slope;
            res.fit_residual = std::sqrt(rr / n);
        }
    }
    return res;
}

GapReport gap_report(const BandSet& bands) {
    GapReport r;
    r.total_measure = bands.total_measure();
    r.band_count = static_cast<int>(bands.bands.size());
    for (std::size_t i = 1; i < bands.bands.size(); ++i) {
        double l = bands.bands[i - 1].hi, u = bands.bands[i].lo;
        r.gaps.push_back({l, u, u - l});
    }
    return r;
}

}  // namespace amo
