#include "amo/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amo/errors.hpp"

namespace amo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TransferMatrix step_matrix(Complex z, Complex v) {
    return {z - v, Complex(-1.0), Complex(1.0), Complex(0.0)};
}

TransferMatrix monodromy(Complex z, const AmoParams& params, const Perturbation& pert, int q) {
    if (!params.alpha.is_rational() || params.alpha.rat->q != q)
        throw domain_error("monodromy: alpha must be rational with denominator q");
    TransferMatrix m{1.0, 0.0, 0.0, 1.0};
    for (int n = 0; n < q; ++n) m = step_matrix(z, potential_sample(params, pert, n)) * m;
    return m;
}

DiscriminantPoly discriminant_poly(const Rational& alpha, double beta, double theta,
                                   const Perturbation& pert) {
    const int q = static_cast<int>(alpha.q);
    if (q > 200) throw size_error("discriminant_poly: q > 200");

    AmoParams params{Alpha(alpha), beta, theta};
    // 2x2 matrix with polynomial entries; step multiply is shift-and-subtract
    CPoly a{1.0}, b{0.0}, c{0.0}, d{1.0};
    auto shift_sub = [](const CPoly& p, Complex v, const CPoly& s) {
        // (z - v) * p - s
        CPoly r(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            r[i + 1] += p[i];
            r[i] -= v * p[i];
        }
        for (std::size_t i = 0; i < s.size(); ++i) r[i] -= s[i];
        return r;
    };
    for (int n = 0; n < q; ++n) {
        Complex v = potential_sample(params, pert, n);
        CPoly na = shift_sub(a, v, c);
        CPoly nb = shift_sub(b, v, d);
        c = std::move(a);
        d = std::move(b);
        a = std::move(na);
        b = std::move(nb);
    }
    DiscriminantPoly out;
    out.coeffs = poly::add(a, d);
    out.coeffs.resize(q + 1);
    out.coeffs[q] = 1.0;  // exact by construction; clear rounding dust
    out.alpha = alpha;
    out.beta = beta;
    out.theta = theta;
    out.delta = pert.delta;
    return out;
}

ChambersForm chambers_decompose(const Rational& alpha, double beta, const Perturbation& pert,
                                int theta_grid_size) {
    if (!pert.is_hermitian()) throw domain_error("chambers_decompose: delta must be 1");
    if (theta_grid_size < 4) throw domain_error("chambers_decompose: theta grid < 4");
    const int q = static_cast<int>(alpha.q);

    // a grid commensurate with cos(q theta) cannot separate the basis
    int G = theta_grid_size;
    while ((2 * q) % G == 0) ++G;

    std::vector<DiscriminantPoly> discs;
    discs.reserve(G);
    for (int j = 0; j < G; ++j)
        discs.push_back(discriminant_poly(alpha, beta, kTwoPi * j / G, pert));

    // coefficient-wise least squares on {1, cos(q theta), sin(q theta)}
    double s_c = 0, s_s = 0, s_cc = 0, s_ss = 0, s_cs = 0;
    std::vector<double> cth(G), sth(G);
    for (int j = 0; j < G; ++j) {
        double a = q * kTwoPi * j / G;
        cth[j] = std::cos(a);
        sth[j] = std::sin(a);
        s_c += cth[j];
        s_s += sth[j];
        s_cc += cth[j] * cth[j];
        s_ss += sth[j] * sth[j];
        s_cs += cth[j] * sth[j];
    }
    double n = G;
    // normal matrix for basis {1, cos, sin}
    double m[3][3] = {{n, s_c, s_s}, {s_c, s_cc, s_cs}, {s_s, s_cs, s_ss}};

    auto solve3 = [&](const double rhs[3], double out[3]) {
        double a[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
            a[i][3] = rhs[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[col], a[piv]);
            if (std::abs(a[col][col]) < 1e-12 * n)
                throw decomposition_failed("chambers fit: degenerate theta grid", 1.0);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                double f = a[r][col] / a[col][col];
                for (int k = col; k < 4; ++k) a[r][k] -= f * a[col][k];
            }
        }
        for (int i = 0; i < 3; ++i) out[i] = a[i][3] / a[i][i];
    };

    ChambersForm form;
    form.A.assign(q + 1, 0.0);
    double c_from_const = 0.0;
    for (int k = 0; k <= q; ++k) {
        double rhs[3] = {0, 0, 0};
        for (int j = 0; j < G; ++j) {
            double y = discs[j].coeffs[k].real();
            rhs[0] += y;
            rhs[1] += y * cth[j];
            rhs[2] += y * sth[j];
        }
        double sol[3];
        solve3(rhs, sol);
        form.A[k] = sol[0];
        if (k == 0) c_from_const = -sol[1];  // Delta = A - c cos(q theta)
    }
    form.c = c_from_const;

    // residual against the independent monodromy evaluation, scale-normalized
    AmoParams params{Alpha(alpha), beta, 0.0};
    double res = 0.0;
    for (int mzi = 0; mzi < 20; ++mzi) {
        Complex z = 1.5 * std::exp(Complex(0.0, kTwoPi * mzi / 20.0));
        double scale = 1.0;
        double az = std::abs(z);
        double zp = 1.0;
        for (int k = 0; k <= q; ++k) {
            scale += std::abs(form.A[k]) * zp;
            zp *= az;
        }
        Complex Az = 0.0;
        for (int k = q; k >= 0; --k) Az = Az * z + form.A[k];
        for (int j = 0; j < G; ++j) {
            params.theta = kTwoPi * j / G;
            Complex tr = monodromy(z, params, pert, q).trace();
            double mis = std::abs(tr - (Az - form.c * cth[j]));
            res = std::max(res, mis / scale);
        }
    }
    form.residual = res;
    if (res > 1e-6)
        throw decomposition_failed("chambers fit residual above 1e-6", res);
    return form;
}

ScaledTrace discriminant_scaled(double E, const Rational& alpha, double beta, double theta) {
    const int q = static_cast<int>(alpha.q);
    AmoParams params{Alpha(alpha), beta, theta};
    // carry M and dM/dE through the product, rescaled together
    double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    double d00 = 0, d01 = 0, d10 = 0, d11 = 0;
    double logs = 0.0;
    for (int n = 0; n < q; ++n) {
        double w = E - potential_real(params, n);
        // S = [[w, -1], [1, 0]], dS/dE = [[1, 0], [0, 0]]
        double n00 = w * m00 - m10, n01 = w * m01 - m11;
        double e00 = w * d00 - d10 + m00, e01 = w * d01 - d11 + m01;
        d10 = d00;
        d11 = d01;
        d00 = e00;
        d01 = e01;
        m10 = m00;
        m11 = m01;
        m00 = n00;
        m01 = n01;
        double mx = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11),
                              std::abs(d00), std::abs(d01), std::abs(d10), std::abs(d11)});
        if (mx > 1e120) {
            double inv = 1.0 / mx;
            m00 *= inv; m01 *= inv; m10 *= inv; m11 *= inv;
            d00 *= inv; d01 *= inv; d10 *= inv; d11 *= inv;
            logs += std::log(mx);
        }
    }
    return {m00 + m11, d00 + d11, logs};
}

double lyapunov_finite(Complex z, const AmoParams& params, const Perturbation& pert,
                       long long N) {
    if (N < 100) throw domain_error("lyapunov_finite: N must be >= 100");
    Complex a = 1, b = 0, c = 0, d = 1;
    double acc = 0.0;
    for (long long n = 0; n < N; ++n) {
        Complex w = z - potential_sample(params, pert, n);
        Complex na = w * a - c, nb = w * b - d;
        c = a;
        d = b;
        a = na;
        b = nb;
        double mx = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        a /= mx;
        b /= mx;
        c /= mx;
        d /= mx;
        acc += std::log(mx);
    }
    return acc / static_cast<double>(N);
}

}  // namespace amo
