#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <amo/errors.hpp>
#include <amo/verify.hpp>

#include <cmath>
#include <string>

using namespace amo;

namespace {
bool has_note_containing(const VerificationReport& r, const std::string& needle) {
    for (const auto& n : r.notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

bool report_invariant(const VerificationReport& r) {
    bool all = true;
    for (const auto& e : r.checks)
        if (!(e.deviation <= e.threshold)) all = false;
    return r.pass == all;
}
}  // namespace

TEST_CASE("check_duality: passes on exact rational cases") {
    for (auto [p, q, beta] : {std::tuple{1, 2, 2.0}, {2, 5, 3.0}}) {
        auto r = check_duality(Rational(p, q), beta);
        CHECK(r.pass);
        CHECK(report_invariant(r));
        REQUIRE(!r.checks.empty());
        CHECK(r.checks[0].deviation <= 1e-8);
        CHECK(r.runtime_seconds >= 0.0);
        CHECK(r.claim == "duality");
    }
    // beta = 1 is self-dual: deviation is exactly zero
    auto self_dual = check_duality(Rational(3, 5), 1.0);
    CHECK(self_dual.pass);
    CHECK(self_dual.checks[0].deviation == 0.0);

    CHECK_THROWS_AS(check_duality(Rational(1, 2), 0.0), domain_error);
    CHECK_THROWS_AS(check_duality(Rational(1, 2), -2.0), domain_error);
}

TEST_CASE("check_equilibrium: IDS quantiles match the equilibrium measure") {
    auto r = check_equilibrium(Rational(1, 2), 1.0, 512);
    CHECK(r.pass);
    CHECK(report_invariant(r));
    REQUIRE(!r.checks.empty());
    CHECK(r.checks[0].deviation < 0.02);
    CHECK(r.checks[0].threshold == Thresholds::equilibrium_quantile);

    // beta = 0: both sides are the arcsine law on [-2, 2]
    auto r0 = check_equilibrium(Rational(2, 5), 0.0, 512);
    CHECK(r0.pass);
    CHECK(r0.checks[0].deviation < 0.02);
}

TEST_CASE("check_thouless: precondition on sample distance") {
    // z = 0 lies inside the beta = 1.5 union bands for alpha = 1/2
    CHECK_THROWS_AS(check_thouless(Rational(1, 2), 1.5, {{0.0, 0.0}}, 1000, 64),
                    domain_error);
}

TEST_CASE("check_localization: negative control at beta <= 1") {
    auto r = check_localization(Rational(34, 55), 0.5, 3);
    CHECK(report_invariant(r));
    CHECK(r.pass);
    REQUIRE(!r.checks.empty());
    bool found = false;
    for (const auto& e : r.checks)
        if (e.name == "max_decay_rate") {
            found = true;
            CHECK(e.deviation < Thresholds::localization_control);
            CHECK(e.threshold == Thresholds::localization_control);
        }
    CHECK(found);
    CHECK(has_note_containing(r, "negative control"));

    CHECK_THROWS_AS(check_localization(Rational(1, 2), 1.5, 0), domain_error);
    CHECK_THROWS_AS(check_localization(Rational(1, 2), -1.0, 3), domain_error);
}

TEST_CASE("check_theorem1: input validation") {
    CHECK_THROWS_AS(check_theorem1({}, 2.0, 1.5), domain_error);
    CHECK_THROWS_AS(check_theorem1({Rational(1, 2)}, 0.8, 1.5), domain_error);
}

TEST_CASE("reports carry resolved parameters") {
    auto r = check_duality(Rational(2, 5), 3.0);
    bool saw_alpha = false, saw_beta = false;
    for (const auto& [k, v] : r.params) {
        if (k == "alpha") saw_alpha = true;
        if (k == "beta") saw_beta = true;
    }
    CHECK(saw_alpha);
    CHECK(saw_beta);
}
