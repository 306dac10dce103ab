#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "setler/continuous.hpp"
#include "setler/discrete.hpp"

using namespace setler;

namespace {
constexpr double kPi = std::numbers::pi;
const SetlerParams kPaperParams{1.0, 0.5, 0.5, 0.5, 1.0};
}

TEST_CASE("linear_step") {
    const SphericalState a = linear_step({0, 0, 0}, {0.1, 0.2, 0.3}, 1.0);
    CHECK(a.alpha == 0.1);
    CHECK(a.delta == 0.2);
    CHECK(a.r == 0.3);

    const SphericalState s{0.7, -1.2, 3.4};
    const SphericalState b = linear_step(s, {0.5, 0.25, -2.0}, 0.0);
    CHECK(b.alpha == s.alpha);
    CHECK(b.delta == s.delta);
    CHECK(b.r == s.r);

    const SphericalState c = linear_step({1, 1, 1}, {0.5, 0.5, 0.5}, 2.0);
    CHECK(c.alpha == 2.0);
    CHECK(c.delta == 2.0);
    CHECK(c.r == 2.0);

    CHECK_THROWS_AS(LinearIncrements(std::nan(""), 0, 0), std::invalid_argument);
}

TEST_CASE("nonlinear_terms") {
    const NonlinearTerms zero = nonlinear_terms({0.0, 0.0, 5.0}, 2.5);
    CHECK(zero.f == 0.0);
    CHECK(zero.g == 0.0);
    CHECK(zero.h == 0.0);

    const NonlinearTerms axis = nonlinear_terms({kPi / 2.0, 0.0, 1.0}, 1.0);
    CHECK(axis.f == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(axis.g) < 1e-15);
    CHECK(std::abs(axis.h) < 1e-15);

    // 30-digit evaluation at (0.3, 0.7), lambda = 1.5
    const NonlinearTerms v = nonlinear_terms({0.3, 0.7, 0.0}, 1.5);
    CHECK(v.f == doctest::Approx(0.339039481874434511).epsilon(1e-14));
    CHECK(v.g == doctest::Approx(0.923166995337410249).epsilon(1e-14));
    CHECK(v.h == doctest::Approx(0.568158200853534691).epsilon(1e-14));
}

TEST_CASE("forced_step phase and reduction") {
    const SetlerParams p{1.3, 0.7, 0.9, 0.4, 2.0};
    const SphericalState at0 = forced_step({0, 0, 0}, p, 0);
    CHECK(at0.alpha == 0.0);
    CHECK(at0.delta == p.gamma);
    CHECK(at0.r == 0.0);

    // unforced: reduces to s + nonlinear terms, independent of n
    const SetlerParams unforced{1.1, 0.0, 0.0, 0.0, 1.0};
    const SphericalState s{0.4, -0.8, 2.0};
    const NonlinearTerms nl = nonlinear_terms(s, unforced.lambda);
    for (std::uint64_t n : {0ull, 3ull, 17ull, 1000ull}) {
        const SphericalState out = forced_step(s, unforced, n);
        CHECK(out.alpha == s.alpha + nl.f);
        CHECK(out.delta == s.delta + nl.g);
        CHECK(out.r == s.r + nl.h);
    }
}

TEST_CASE("forced_step reference value") {
    // 30-digit evaluation at (0.1, 0.2, 0.3), lambda=1, b=g=df=0.5, omega=1, n=1
    const SphericalState out = forced_step({0.1, 0.2, 0.3}, kPaperParams, 1);
    CHECK(out.alpha == doctest::Approx(0.618578887411203965).epsilon(1e-14));
    CHECK(out.delta == doctest::Approx(0.667827964588153722).epsilon(1e-14));
    CHECK(out.r == doctest::Approx(0.759811614269672399).epsilon(1e-14));
}

TEST_CASE("iterate_map basics") {
    const SphericalState s0{0.3, 0.4, 1.0};
    const Trajectory t0 = iterate_map(s0, kPaperParams, 0);
    CHECK(t0.size() == 1);
    CHECK(t0.states()[0].alpha == s0.alpha);

    const SetlerParams frozen{0.0, 0.0, 0.0, 0.0, 1.0};
    const Trajectory t2 = iterate_map(s0, frozen, 2);
    REQUIRE(t2.size() == 3);
    for (const SphericalState& s : t2.states()) {
        CHECK(s.alpha == s0.alpha);
        CHECK(s.delta == s0.delta);
        CHECK(s.r == s0.r);
    }
}

TEST_CASE("iterate_map against step-by-step re-iteration") {
    const Trajectory traj = iterate_map({0.1, 0.2, 4.24}, kPaperParams, 1000);
    REQUIRE(traj.size() == 1001);
    const oracle::V3 ref = oracle::iterate_map(
        {0.1, 0.2, 4.24}, {1.0, 0.5, 0.5, 0.5, 1.0}, 1000);
    const SphericalState& last = traj.back();
    CHECK(last.alpha == doctest::Approx(ref[0]).epsilon(1e-10));
    CHECK(last.delta == doctest::Approx(ref[1]).epsilon(1e-10));
    CHECK(last.r == doctest::Approx(ref[2]).epsilon(1e-10));
}

TEST_CASE("iterate_map determinism and prefix property") {
    const Trajectory a = iterate_map({0.1, 0.2, 4.24}, kPaperParams, 123);
    const Trajectory b = iterate_map({0.1, 0.2, 4.24}, kPaperParams, 123);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.states()[i].alpha == b.states()[i].alpha);
        CHECK(a.states()[i].delta == b.states()[i].delta);
        CHECK(a.states()[i].r == b.states()[i].r);
    }
    const Trajectory prefix = iterate_map({0.1, 0.2, 4.24}, kPaperParams, 57);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        CHECK(prefix.states()[i].alpha == a.states()[i].alpha);
        CHECK(prefix.states()[i].delta == a.states()[i].delta);
        CHECK(prefix.states()[i].r == a.states()[i].r);
    }
}

TEST_CASE("iterate_map divergence carries the failing step") {
    // increments are bounded by lambda, so overflow needs lambda near
    // DBL_MAX; 1e306 overflows within a few hundred steps
    const SetlerParams huge{1e306, 0.5, 0.5, 0.5, 1.0};
    try {
        iterate_map({0.1, 0.2, 4.24}, huge, 2000);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.last_finite_index() < 2000);
        REQUIRE(e.partial() != nullptr);
        CHECK(e.partial()->size() == e.last_finite_index() + 1);
    }

    // the additive map stays finite at lambda = 1e6 over short runs
    const SetlerParams big{1e6, 0.5, 0.5, 0.5, 1.0};
    const Trajectory t = iterate_map({0.1, 0.2, 4.24}, big, 1000);
    CHECK(t.size() == 1001);
    CHECK(all_finite(t.back()));
}

TEST_CASE("forced_step uses the integer-step forcing phase") {
    const SphericalState s{0.2, 0.3, 1.0};
    const SetlerParams p{0.0, 1.0, 0.0, 0.0, 0.7};
    const SphericalState out = forced_step(s, p, 5);
    CHECK(out.alpha == s.alpha + std::sin(0.7 * 5.0));
}
