#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bconv/moment_engine.hpp"

using namespace bconv;

namespace {

// Moments of Beta(a,b) via the product formula, as the forward-map target.
MomentVector beta_moments(const Rational& a, const Rational& b, int order) {
    return moments(MeasureSpec::beta(a, b), order);
}

} // namespace

TEST_CASE("forward map sends GEM(theta) sticks to Beta(p theta, (1-p) theta)") {
    for (int theta : {1, 2, 3, 4}) {
        for (auto& p : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
            auto z = forward_z_moments(MeasureSpec::beta(1, theta), p, 15);
            auto target = beta_moments(p * theta, (1 - p) * theta, 15);
            REQUIRE(z.arithmetic == Arithmetic::exact);
            CHECK(z.rvals == target.rvals);
        }
    }
}

TEST_CASE("forward map basics") {
    // uniform convolution from GEM(2) at p = 1/2
    auto z = forward_z_moments(MeasureSpec::beta(1, 2), Rational(1, 2), 4);
    for (int n = 0; n <= 4; ++n) CHECK(z.rvals[n] == Rational(1, n + 1));

    // E[Z] = p for any stick measure
    for (auto& m : {MeasureSpec::beta(1, 3), MeasureSpec::dirac(Rational(2, 5)),
                    MeasureSpec::uniform()}) {
        auto zm = forward_z_moments(m, Rational(3, 7), 2);
        CHECK(zm.rvals[1] == Rational(3, 7));
    }

    // moment-vector entry point agrees with the measure entry point
    auto mu = moments(MeasureSpec::beta(1, 3), 8);
    CHECK(forward_z_moments(mu, Rational(1, 4), 8).rvals ==
          forward_z_moments(MeasureSpec::beta(1, 3), Rational(1, 4), 8).rvals);
}

TEST_CASE("forward map on a grid density tracks the exact answer") {
    auto g = GridFunction::tabulate([](double x) { return 2.0 * (1.0 - x); }, (1 << 16) | 1);
    auto z = forward_z_moments(MeasureSpec::grid_density(g), Rational(1, 2), 8);
    REQUIRE(z.arithmetic == Arithmetic::floating);
    for (int n = 0; n <= 8; ++n) CHECK(std::fabs(z.fvals[n] - 1.0 / (n + 1)) < 1e-9);
}

TEST_CASE("coefficient table identities") {
    auto z = forward_z_moments(MeasureSpec::beta(1, 2), Rational(1, 2), 6); // uniform Z
    auto t = coefficient_table(z, Rational(1, 2), 6);
    REQUIRE(t.arithmetic == Arithmetic::exact);

    // a_{1,1} + c_1 = -p E[1-Z] + (1-p) E[Z] = 0 at p = 1/2 for symmetric Z
    CHECK(t.exact.pivot(1) == 0);
    CHECK(t.exact.c[2] == Rational(1, 6));
    CHECK(t.exact.a[2][2] == Rational(1, 6));  // p C(2,2) E[(1-Z)^2]
    CHECK(t.exact.a[2][1] == Rational(-1, 2)); // -p C(2,1) E[1-Z]
    CHECK(t.exact.pivot(2) == Rational(1, 3));
}

TEST_CASE("pivots vanish exactly at odd n for symmetric Z at p = 1/2") {
    auto z = moments(MeasureSpec::uniform(), 15);
    for (int n = 1; n <= 15; ++n) {
        Rational piv = pivot(z, Rational(1, 2), n);
        if (n % 2 == 1)
            CHECK(piv == 0);
        else
            CHECK(piv > 0);
    }
}

TEST_CASE("pivot matches its definition and the float path") {
    auto z = beta_moments(1, 2, 5);
    Rational p(1, 3);
    // (1-p) E[Z^3] - p E[(1-Z)^3]; E[Z^3] = 1/10, E[(1-Z)^3] = 2/5
    Rational expect = (1 - p) * Rational(1, 10) - p * Rational(2, 5);
    CHECK(pivot(z, p, 3) == expect);
    CHECK(pivot_float(z.to_floating(), 1.0 / 3.0, 3) ==
          doctest::Approx(to_double(expect)).epsilon(1e-14));
}

TEST_CASE("reconstruction recovers b_n = 4n/(n+3) for GEM(3) sticks at p = 1/3") {
    // mu = Beta(1,3): E[(1-Y)^n] = 3/(n+3), E[Y] = 1/4, so b_n = 4n/(n+3)
    auto z = forward_z_moments(MeasureSpec::beta(1, 3), Rational(1, 3), 20);
    auto rep = reconstruct(z, Rational(1, 3), 20);
    REQUIRE(rep.arithmetic == Arithmetic::exact);
    CHECK(rep.exact.b[0] == 0);
    for (int n = 1; n <= 20; ++n) CHECK(rep.exact.b[n] == Rational(4 * n, n + 3));

    // b is nondecreasing and the terminal estimate 1/b_N = E[Y] + 3/(4N)
    for (int n = 2; n <= 20; ++n) CHECK(rep.exact.b[n] >= rep.exact.b[n - 1]);
    CHECK(rep.exact.ey_estimate == Rational(1, 4) + Rational(3, 4 * 20));

    // exact roundtrip once E[Y] is supplied
    auto mu = rep.exact.mu_moments_given_mean(Rational(1, 4));
    auto truth = moments(MeasureSpec::beta(1, 3), 20);
    CHECK(mu == truth.rvals);
}

TEST_CASE("roundtrip is exact given the stick mean, across the corpus") {
    std::vector<MeasureSpec> corpus{MeasureSpec::beta(1, 1), MeasureSpec::beta(1, 3),
                                    MeasureSpec::dirac(Rational(2, 5))};
    for (const auto& m : corpus) {
        auto truth = moments(m, 15);
        for (auto& p : {Rational(1, 4), Rational(1, 3), Rational(2, 3)}) {
            auto z = forward_z_moments(m, p, 15);
            auto rep = reconstruct(z, p, 15);
            CHECK(rep.exact.mu_moments_given_mean(truth.rvals[1]) == truth.rvals);
        }
    }
}

TEST_CASE("reconstruction rejects p = 1/2") {
    auto z = moments(MeasureSpec::uniform(), 10);
    CHECK_THROWS_AS(reconstruct(z, Rational(1, 2), 10), std::invalid_argument);
}

TEST_CASE("prop22_residual vanishes exactly on consistent triples") {
    std::vector<MeasureSpec> corpus{MeasureSpec::beta(1, 1), MeasureSpec::beta(1, 3),
                                    MeasureSpec::dirac(Rational(2, 5))};
    for (const auto& m : corpus) {
        auto mu = moments(m, 15);
        for (auto& p : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                        Rational(1)}) {
            auto z = forward_z_moments(mu, p, 15);
            for (int n = 1; n <= 15; ++n) CHECK(prop22_residual(mu, z, p, n) == 0);
        }
    }
}

TEST_CASE("prop22_residual detects an inconsistent triple") {
    auto mu = moments(MeasureSpec::beta(1, 2), 5);
    auto z = moments(MeasureSpec::uniform(), 5); // correct for p = 1/2, not 1/3
    CHECK(prop22_residual(mu, z, Rational(1, 3), 2) != 0);
}

TEST_CASE("hausdorff check flags a bad sequence") {
    auto bad = hausdorff_check(MomentVector{Arithmetic::floating, {}, {1.0, 0.5, 0.6}});
    CHECK_FALSE(bad.ok);
    CHECK(hausdorff_check(moments(MeasureSpec::beta(2, 5), 12)).ok);
}
