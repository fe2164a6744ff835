#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bconv/rng.hpp"
#include "bconv/stats.hpp"

using namespace bconv;

TEST_CASE("kolmogorov survival function") {
    // classical 5% critical value lambda ~ 1.358
    CHECK(kolmogorov_sf(1.358) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(kolmogorov_sf(1.628) == doctest::Approx(0.01).epsilon(0.02));
    CHECK(kolmogorov_sf(0.3) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_sf(3.0) < 1e-7);
    for (double a = 0.3; a < 2.5; a += 0.1) CHECK(kolmogorov_sf(a) >= kolmogorov_sf(a + 0.1));
}

TEST_CASE("one-sample KS accepts its own null and rejects a wrong one") {
    Rng rng(5);
    std::vector<double> u(20000);
    for (double& x : u) x = rng.uniform();

    auto unif_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_one_sample(u, unif_cdf, 0.01).pass);

    auto wrong = [](double x) { return std::clamp(x * x, 0.0, 1.0); }; // Beta(2,1)? no: sqrt law
    auto rep = ks_one_sample(u, wrong, 0.01);
    CHECK_FALSE(rep.pass);
    CHECK(rep.statistic == doctest::Approx(0.25).epsilon(0.05)); // max_x |x - x^2| = 1/4

    std::vector<double> tiny(10, 0.5);
    CHECK_THROWS_AS(ks_one_sample(tiny, unif_cdf, 0.05), std::invalid_argument);
}

TEST_CASE("two-sample KS") {
    Rng rng(6);
    std::vector<double> a(5000), b(5000), c(5000);
    for (double& x : a) x = rng.uniform();
    for (double& x : b) x = rng.uniform();
    for (double& x : c) x = rng.beta(2.0, 1.0);
    CHECK(two_sample_ks(a, b, 0.01).pass);
    CHECK_FALSE(two_sample_ks(a, c, 0.01).pass);
}

TEST_CASE("beta cdf") {
    CHECK(beta_cdf(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(beta_cdf(1.5, 1.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(beta_cdf(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(beta_cdf(2, 3, -0.1) == 0.0);
    CHECK(beta_cdf(2, 3, 1.1) == 1.0);
}

TEST_CASE("empirical moments and half-widths") {
    std::vector<double> consts(200, 0.4);
    auto em = empirical_moments(consts, 3);
    CHECK(em.moments.fvals[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(em.moments.fvals[2] == doctest::Approx(0.16).epsilon(1e-14));
    CHECK(em.half_widths[1] == doctest::Approx(0.0));

    Rng rng(7);
    std::vector<double> u(50000);
    for (double& x : u) x = rng.uniform();
    auto eu = empirical_moments(u, 4);
    for (int n = 1; n <= 4; ++n)
        CHECK(std::fabs(eu.moments.fvals[n] - 1.0 / (n + 1)) <= eu.half_widths[n]);
}

TEST_CASE("null rejection rate stays near the nominal level") {
    // 200 independent uniform samples tested against their own CDF at
    // alpha = 0.05: the rejection rate must not exceed twice the level.
    auto unif_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    int rejects = 0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
        Rng rng(1000 + r);
        std::vector<double> u(400);
        for (double& x : u) x = rng.uniform();
        if (!ks_one_sample(u, unif_cdf, 0.05).pass) ++rejects;
    }
    CHECK(rejects <= runs / 10); // 2 * alpha * runs = 20
}

TEST_CASE("half-width intervals cover the truth") {
    // 5-sigma half-widths should cover the true moment in essentially every
    // run; require >= 99% coverage over 200 runs x 4 moments.
    int covered = 0, total = 0;
    for (int r = 0; r < 200; ++r) {
        Rng rng(5000 + r);
        std::vector<double> u(1000);
        for (double& x : u) x = rng.uniform();
        auto em = empirical_moments(u, 4);
        for (int n = 1; n <= 4; ++n) {
            ++total;
            if (std::fabs(em.moments.fvals[n] - 1.0 / (n + 1)) <= em.half_widths[n]) ++covered;
        }
    }
    CHECK(covered >= total * 99 / 100);
}
