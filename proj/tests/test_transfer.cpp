#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <amo/errors.hpp>
#include <amo/transfer.hpp>

#include <cmath>
#include <numbers>

using namespace amo;

namespace {
constexpr double kPi = std::numbers::pi;

// deterministic pseudo-random complex samples
Complex sample_z(int k) {
    return {std::cos(2.7 * k + 0.4) * 3.0, std::sin(1.9 * k + 1.1) * 2.0};
}
}  // namespace

TEST_CASE("step_matrix closed forms") {
    auto m = step_matrix(0.0, 0.0);
    CHECK(m.a == Complex(0.0));
    CHECK(m.b == Complex(-1.0));
    CHECK(m.c == Complex(1.0));
    CHECK(m.d == Complex(0.0));
    auto m2 = step_matrix(3.0, 1.0);
    CHECK(m2.a == Complex(2.0));
    CHECK(m2.trace() == Complex(2.0));
    for (int k = 0; k < 10; ++k) {
        auto s = step_matrix(sample_z(k), sample_z(k + 17));
        CHECK(std::abs(s.det() - 1.0) < 1e-14);
    }
}

TEST_CASE("monodromy closed forms at q = 1 and q = 2") {
    Perturbation id;
    for (int k = 0; k < 5; ++k) {
        Complex z = sample_z(k);
        double beta = 0.5 + 0.5 * k;
        AmoParams p1{Alpha(Rational(0, 1)), beta, 0.0};
        CHECK(std::abs(monodromy(z, p1, id, 1).trace() - (z - 2.0 * beta)) < 1e-12);
        double theta = 0.3 * k;
        AmoParams p2{Alpha(Rational(1, 2)), beta, theta};
        Complex want = z * z - 4.0 * beta * beta * std::cos(theta) * std::cos(theta) - 2.0;
        CHECK(std::abs(monodromy(z, p2, id, 2).trace() - want) < 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("monodromy: determinant 1 up to q = 100, q mismatch throws") {
    Perturbation pert(1.3);
    AmoParams p{Alpha(Rational(89, 100)), 2.0, 0.7};
    auto m = monodromy(sample_z(3), p, pert, 100);
    // entries grow like e^{qL}; determinant error scales with the squared norm
    double n2 = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
    n2 *= n2;
    CHECK(std::abs(m.det() - 1.0) < 1e-12 * n2);
    CHECK_THROWS_AS(monodromy(0.0, p, pert, 99), domain_error);
}

TEST_CASE("discriminant_poly: hand forms and monodromy cross-check") {
    Perturbation id;
    auto d1 = discriminant_poly(Rational(0, 1), 1.5, 0.0, id);
    REQUIRE(d1.degree() == 1);
    CHECK(std::abs(d1.coeffs[0] - Complex(-3.0)) < 1e-14);
    CHECK(std::abs(d1.coeffs[1] - Complex(1.0)) == 0.0);

    double beta = 0.8, theta = 0.5;
    auto d2 = discriminant_poly(Rational(1, 2), beta, theta, id);
    REQUIRE(d2.degree() == 2);
    double c0 = -4.0 * beta * beta * std::cos(theta) * std::cos(theta) - 2.0;
    CHECK(std::abs(d2.coeffs[0] - Complex(c0)) < 1e-12);
    CHECK(std::abs(d2.coeffs[1]) < 1e-14);
    CHECK(std::abs(d2.coeffs[2] - Complex(1.0)) == 0.0);

    // same object two ways, 20 spot checks
    Perturbation pert(1.4);
    Rational a(5, 13);
    AmoParams params{Alpha(a), 1.2, 0.9};
    auto dp = discriminant_poly(a, 1.2, 0.9, pert);
    for (int k = 0; k < 20; ++k) {
        Complex z = sample_z(k);
        Complex pv = dp.eval(z);
        Complex tv = monodromy(z, params, pert, 13).trace();
        CHECK(std::abs(pv - tv) < 1e-9 * (1.0 + std::abs(pv)));
    }

    CHECK_THROWS_AS(discriminant_poly(Rational(1, 201), 1.0, 0.0, id), size_error);
}

TEST_CASE("chambers_decompose: closed forms at q = 1, 2") {
    Perturbation id;
    for (double beta : {0.5, 1.0, 2.0}) {
        auto f1 = chambers_decompose(Rational(0, 1), beta, id, 64);
        REQUIRE(f1.A.size() == 2);
        CHECK(f1.A[0] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(f1.A[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(f1.c) == doctest::Approx(2.0 * beta).epsilon(1e-10));

        auto f2 = chambers_decompose(Rational(1, 2), beta, id, 64);
        REQUIRE(f2.A.size() == 3);
        CHECK(f2.A[0] == doctest::Approx(-2.0 * beta * beta - 2.0).epsilon(1e-10));
        CHECK(f2.A[1] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(f2.A[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(f2.c) == doctest::Approx(2.0 * beta * beta).epsilon(1e-10));
    }
}

TEST_CASE("chambers_decompose: |c| = 2 beta^q and residual bound") {
    Perturbation id;
    for (int q : {1, 2, 3, 5}) {
        for (double beta : {0.5, 1.0, 2.0}) {
            auto f = chambers_decompose(Rational(1, q), beta, id, 64);
            CHECK(std::abs(f.c) ==
                  doctest::Approx(2.0 * std::pow(beta, q)).epsilon(1e-8));
            CHECK(f.residual < 1e-9);
        }
    }
    CHECK_THROWS_AS(chambers_decompose(Rational(1, 2), 1.0, Perturbation(2.0), 64),
                    domain_error);
    CHECK_THROWS_AS(chambers_decompose(Rational(1, 2), 1.0, id, 3), domain_error);
}

TEST_CASE("chambers identity across a theta grid and z sample") {
    Perturbation id;
    Rational a(2, 5);
    double beta = 1.3;
    auto f = chambers_decompose(a, beta, id, 64);
    for (int zi = 0; zi < 20; ++zi) {
        Complex z = 1.5 * std::exp(Complex(0.0, 2.0 * kPi * zi / 20.0));
        Complex Az = 0.0;
        for (int k = static_cast<int>(f.A.size()) - 1; k >= 0; --k) Az = Az * z + f.A[k];
        for (int j = 0; j < 64; ++j) {
            double theta = 2.0 * kPi * j / 64.0;
            AmoParams p{Alpha(a), beta, theta};
            Complex tr = monodromy(z, p, id, 5).trace();
            CHECK(std::abs(tr - (Az - f.c * std::cos(5.0 * theta))) < 1e-9);
        }
    }
}

TEST_CASE("discriminant_scaled matches the polynomial at moderate q") {
    Rational a(3, 7);
    double beta = 1.1, theta = 0.25;
    auto dp = discriminant_poly(a, beta, theta, Perturbation());
    for (double E : {-3.9, -1.0, 0.0, 0.7, 2.5, 4.2}) {
        auto s = discriminant_scaled(E, a, beta, theta);
        double v = s.t * std::exp(s.log_scale);
        CHECK(v == doctest::Approx(dp.eval(E).real()).epsilon(1e-9));
        // centered difference for the derivative
        double h = 1e-6;
        auto sp = discriminant_scaled(E + h, a, beta, theta);
        auto sm = discriminant_scaled(E - h, a, beta, theta);
        double fd = (sp.t * std::exp(sp.log_scale) - sm.t * std::exp(sm.log_scale)) / (2 * h);
        CHECK(s.dt * std::exp(s.log_scale) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("discriminant_scaled survives scales where coefficients overflow") {
    // beta^q ~ 3^200 overflows any coefficient-form evaluation
    Rational a(99, 200);
    auto s = discriminant_scaled(0.3, a, 3.0, 0.0);
    CHECK(std::isfinite(s.t));
    CHECK(std::isfinite(s.log_scale));
    // |Delta| ~ beta^q = 3^200, far beyond double range in coefficient form
    CHECK(std::log(std::abs(s.t)) + s.log_scale > 150.0);
}

TEST_CASE("lyapunov_finite: free-case closed forms") {
    Perturbation id;
    AmoParams free{Alpha(0.5), 0.0, 0.0};
    CHECK(std::abs(lyapunov_finite(0.0, free, id, 100000)) < 0.01);
    double want = std::log((5.0 + std::sqrt(21.0)) / 2.0);
    CHECK(lyapunov_finite(5.0, free, id, 100000) == doctest::Approx(want).epsilon(1e-3));
    CHECK_THROWS_AS(lyapunov_finite(0.0, free, id, 99), domain_error);
}

TEST_CASE("lyapunov_finite: nonnegative and theta-shift invariant") {
    Perturbation id;
    for (int k = 0; k < 6; ++k) {
        Complex z = sample_z(k);
        AmoParams p{Alpha(preset_alpha("golden")), 1.5, 0.0};
        double l0 = lyapunov_finite(z, p, id, 100000);
        CHECK(l0 >= -0.02);
        p.theta = 1.1;
        CHECK(std::abs(lyapunov_finite(z, p, id, 100000) - l0) < 0.02);
    }
}
