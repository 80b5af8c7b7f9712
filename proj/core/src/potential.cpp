#include "amo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "amo/errors.hpp"

namespace amo {

namespace {

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::vector<double>& v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double cand = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - cand > 0.0) tau = cand;
    }
    for (double& x : v) x = std::max(x - tau, 0.0);
}

}  // namespace

LogPotentialValue log_potential(std::complex<double> z, const StepMeasure& mu) {
    double acc = 0.0;
    for (std::size_t j = 0; j < mu.points.size(); ++j) {
        double d = std::abs(z - mu.points[j]);
        if (d < 1e-14) return {-std::numeric_limits<double>::max(), true};
        acc += mu.weights[j] * std::log(d);
    }
    return {acc, false};
}

StepMeasure equilibrium_measure(const BandSet& bands, int M, int max_iters) {
    if (bands.bands.empty()) throw domain_error("equilibrium_measure: empty band set");
    if (M < 32) throw domain_error("equilibrium_measure: M must be >= 32");
    double total = bands.total_measure();
    if (total <= 0.0) throw capacity_zero_error("equilibrium_measure: single-point band set");

    // midpoint support grid, points per band proportional to length (>= 1 each)
    int nb = static_cast<int>(bands.bands.size());
    std::vector<int> ms(nb);
    for (int i = 0; i < nb; ++i)
        ms[i] = std::max<int>(1, std::lround(M * bands.bands[i].length() / total));
    auto sum_ms = [&] { return std::accumulate(ms.begin(), ms.end(), 0); };
    while (sum_ms() > M) {
        int i = static_cast<int>(std::max_element(ms.begin(), ms.end()) - ms.begin());
        --ms[i];
    }
    while (sum_ms() < M) {
        int best = 0;
        double bestd = -1.0;
        for (int i = 0; i < nb; ++i) {
            double d = bands.bands[i].length() / ms[i];
            if (d > bestd) {
                bestd = d;
                best = i;
            }
        }
        ++ms[best];
    }
    std::vector<double> pts, hs;
    pts.reserve(M);
    hs.reserve(M);
    for (int i = 0; i < nb; ++i) {
        const Band& b = bands.bands[i];
        double h = b.length() / ms[i];
        for (int j = 0; j < ms[i]; ++j) {
            pts.push_back(b.lo + h * (j + 0.5));
            hs.push_back(h);
        }
    }

    // energy kernel; the diagonal carries the cell self-energy of a uniform
    // sub-cell density (log h - 3/2), which keeps the maximizer from piling
    // mass onto isolated points
    std::vector<double> K(static_cast<std::size_t>(M) * M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < i; ++j) {
            double v = std::log(std::abs(pts[i] - pts[j]));
            K[static_cast<std::size_t>(i) * M + j] = v;
            K[static_cast<std::size_t>(j) * M + i] = v;
        }
        K[static_cast<std::size_t>(i) * M + i] = std::log(std::max(hs[i], 1e-300)) - 1.5;
    }
    auto matvec = [&](const std::vector<double>& w, std::vector<double>& out) {
        for (int i = 0; i < M; ++i) {
            const double* row = &K[static_cast<std::size_t>(i) * M];
            double s = 0.0;
            for (int j = 0; j < M; ++j) s += row[j] * w[j];
            out[i] = s;
        }
    };

    std::vector<double> w(M, 1.0 / M), Kw(M), trial(M), Ktrial(M);
    matvec(w, Kw);
    double obj = std::inner_product(w.begin(), w.end(), Kw.begin(), 0.0);
    double step = 1.0;
    for (int it = 0; it < max_iters; ++it) {
        double o2 = obj;
        while (true) {
            for (int i = 0; i < M; ++i) trial[i] = w[i] + 2.0 * step * Kw[i];
            project_simplex(trial);
            matvec(trial, Ktrial);
            o2 = std::inner_product(trial.begin(), trial.end(), Ktrial.begin(), 0.0);
            if (o2 >= obj || step < 1e-18) break;
            step *= 0.5;
        }
        double dw = 0.0;
        for (int i = 0; i < M; ++i) dw = std::max(dw, std::abs(trial[i] - w[i]));
        w.swap(trial);
        Kw.swap(Ktrial);
        obj = o2;
        step *= 1.3;
        if (dw < 1e-10) break;
    }

    StepMeasure mu;
    for (int i = 0; i < M; ++i) {
        if (w[i] > 0.0) {
            mu.points.push_back(pts[i]);
            mu.weights.push_back(w[i]);
        }
    }
    return mu;
}

RobinResult robin_capacity(const StepMeasure& mu) {
    int M = mu.size();
    if (M < 32) throw domain_error("robin_capacity: need at least 32 support points");
    double I = 0.0;
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < i; ++j) {
            double d = std::abs(mu.points[i] - mu.points[j]);
            if (d == 0.0) throw domain_error("robin_capacity: duplicate support points");
            I -= 2.0 * mu.weights[i] * mu.weights[j] * std::log(d);
        }
    }
    return {I, std::exp(-I)};
}

ScalarField potential_field(const StepMeasure& mu, double x_min, double x_max, double y_min,
                            double y_max, int nx, int ny) {
    if (nx < 2 || ny < 2) throw domain_error("potential_field: resolution must be >= 2");
    ScalarField f;
    f.x_min = x_min;
    f.x_max = x_max;
    f.y_min = y_min;
    f.y_max = y_max;
    f.nx = nx;
    f.ny = ny;
    f.values.resize(static_cast<std::size_t>(nx) * ny);
    f.singular.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            auto v = log_potential({f.x(ix), f.y(iy)}, mu);
            std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
            f.values[idx] = v.value;
            f.singular[idx] = v.singular ? 1 : 0;
        }
    }
    return f;
}

namespace {

// Edge identifiers for marching squares: 2 * node + (0 horizontal, 1 vertical),
// where the edge runs from the node toward +x or +y.
long long h_edge(int ix, int iy, int nx) { return 2LL * (static_cast<long long>(iy) * nx + ix); }
long long v_edge(int ix, int iy, int nx) {
    return 2LL * (static_cast<long long>(iy) * nx + ix) + 1;
}

}  // namespace

std::vector<Polyline> level_curves(const ScalarField& field, double c) {
    const int nx = field.nx, ny = field.ny;
    std::map<long long, std::complex<double>> crossing;
    auto cross_point = [&](long long edge, int ix, int iy, bool horiz) {
        auto it = crossing.find(edge);
        if (it != crossing.end()) return;
        double v0 = field.at(ix, iy);
        double v1 = horiz ? field.at(ix + 1, iy) : field.at(ix, iy + 1);
        double t = (c - v0) / (v1 - v0);
        t = std::clamp(t, 0.0, 1.0);
        double x = field.x(ix), y = field.y(iy);
        if (horiz)
            x += t * (field.x(ix + 1) - x);
        else
            y += t * (field.y(iy + 1) - y);
        crossing.emplace(edge, std::complex<double>(x, y));
    };

    std::vector<std::pair<long long, long long>> segments;
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            double v0 = field.at(ix, iy), v1 = field.at(ix + 1, iy);
            double v2 = field.at(ix + 1, iy + 1), v3 = field.at(ix, iy + 1);
            if (field.singular_at(ix, iy) || field.singular_at(ix + 1, iy) ||
                field.singular_at(ix + 1, iy + 1) || field.singular_at(ix, iy + 1))
                continue;
            if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2) ||
                !std::isfinite(v3))
                continue;
            int m = (v0 >= c) | ((v1 >= c) << 1) | ((v2 >= c) << 2) | ((v3 >= c) << 3);
            if (m == 0 || m == 15) continue;
            long long B = h_edge(ix, iy, nx), T = h_edge(ix, iy + 1, nx);
            long long L = v_edge(ix, iy, nx), R = v_edge(ix + 1, iy, nx);
            auto emit = [&](long long e0, long long e1) {
                if (e0 == B || e1 == B) cross_point(B, ix, iy, true);
                if (e0 == T || e1 == T) cross_point(T, ix, iy + 1, true);
                if (e0 == L || e1 == L) cross_point(L, ix, iy, false);
                if (e0 == R || e1 == R) cross_point(R, ix + 1, iy, false);
                segments.emplace_back(e0, e1);
            };
            switch (m) {
                case 1: case 14: emit(L, B); break;
                case 2: case 13: emit(B, R); break;
                case 3: case 12: emit(L, R); break;
                case 4: case 11: emit(R, T); break;
                case 6: case 9: emit(B, T); break;
                case 7: case 8: emit(T, L); break;
                case 5:
                case 10: {
                    bool center_hi = 0.25 * (v0 + v1 + v2 + v3) >= c;
                    bool pair_br = (m == 5) == center_hi;  // cell-average saddle rule
                    if (pair_br) {
                        emit(B, R);
                        emit(T, L);
                    } else {
                        emit(B, L);
                        emit(R, T);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // stitch segments into maximal chains through shared edge crossings
    std::multimap<long long, std::size_t> by_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_edge.emplace(segments[s].first, s);
        by_edge.emplace(segments[s].second, s);
    }
    std::vector<char> used(segments.size(), 0);
    std::vector<Polyline> out;
    double cell_diag = std::hypot((field.x_max - field.x_min) / (nx - 1),
                                  (field.y_max - field.y_min) / (ny - 1));

    auto walk = [&](std::size_t start, long long from_edge) {
        std::vector<long long> chain;
        long long cur = from_edge;
        std::size_t seg = start;
        while (true) {
            used[seg] = 1;
            long long nxt = segments[seg].first == cur ? segments[seg].second : segments[seg].first;
            chain.push_back(nxt);
            cur = nxt;
            auto [lo, hi] = by_edge.equal_range(cur);
            std::size_t cont = segments.size();
            for (auto it = lo; it != hi; ++it)
                if (!used[it->second]) cont = it->second;
            if (cont == segments.size()) break;
            seg = cont;
        }
        return chain;
    };

    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        // extend forward from one endpoint, then backward from the other
        std::vector<long long> fwd = walk(s, segments[s].first);
        std::vector<long long> chain;
        chain.push_back(segments[s].first);
        chain.insert(chain.end(), fwd.begin(), fwd.end());
        if (chain.front() != chain.back()) {
            auto [lo, hi] = by_edge.equal_range(chain.front());
            for (auto it = lo; it != hi; ++it) {
                if (!used[it->second]) {
                    std::vector<long long> bwd = walk(it->second, chain.front());
                    std::reverse(bwd.begin(), bwd.end());
                    bwd.insert(bwd.end(), chain.begin(), chain.end());
                    chain = std::move(bwd);
                    break;
                }
            }
        }
        Polyline pl;
        bool loop = chain.size() > 2 && chain.front() == chain.back();
        if (loop) chain.pop_back();
        for (long long e : chain) {
            auto p = crossing.at(e);
            if (pl.points.empty() || pl.points.back() != p) pl.points.push_back(p);
        }
        if (pl.points.size() < 2) continue;
        pl.closed = loop || std::abs(pl.points.front() - pl.points.back()) <= cell_diag;
        if (pl.closed && pl.points.size() < 3) continue;
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace amo
