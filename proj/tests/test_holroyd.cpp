#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bconv/holroyd.hpp"
#include "bconv/rng.hpp"

using namespace bconv;

TEST_CASE("pattern signs") {
    // phi = (1,-1,0), psi = (0,1,-1): sign(i,j) = phi_i psi_j - psi_i phi_j
    CHECK(PerturbationPattern::sign(0, 1) == 1);
    CHECK(PerturbationPattern::sign(0, 2) == -1);
    CHECK(PerturbationPattern::sign(1, 2) == 1);
    int nonzero = 0;
    for (int i = 0; i < 3; ++i) {
        int row = 0, col = 0;
        for (int j = 0; j < 3; ++j) {
            int s = PerturbationPattern::sign(i, j);
            CHECK(s == -PerturbationPattern::sign(j, i));
            row += s;
            col += PerturbationPattern::sign(j, i);
            if (s != 0) ++nonzero;
        }
        CHECK(row == 0);
        CHECK(col == 0);
    }
    CHECK(nonzero == 6);
    // anti-diagonal cell sets i+j = const also cancel
    for (int d = 0; d <= 4; ++d) {
        int s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i + j == d) s += PerturbationPattern::sign(i, j);
        CHECK(s == 0);
    }
    CHECK_THROWS_AS(PerturbationPattern::sign(3, 0), std::invalid_argument);
}

TEST_CASE("simplex geometry") {
    SimplexDensity d(144, 12.0);
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-12));

    // area oracle: Monte Carlo hit counting on the unit square
    Rng rng(8);
    int hits = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        double x = rng.uniform(), y = rng.uniform();
        if (x >= y && x + 2 * y >= 1 && x + y <= 1) ++hits;
    }
    double area = 1.0 / 12.0;
    double se = std::sqrt(area * (1 - area) / n);
    CHECK(std::fabs(static_cast<double>(hits) / n - area) <= 5 * se);

    // cell areas sum to area(Delta)
    KahanSum s;
    for (int j = 0; j < 144; ++j)
        for (int i = 0; i < 144; ++i) s.add(d.cell_area(i, j));
    CHECK(s.value() == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("reference pair construction and validation") {
    auto pair = build_reference();
    CHECK(pair.f.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair.f_tilde.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(joint_distance(pair.f, pair.f_tilde) > 0.0);

    CHECK_THROWS_AS(build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, 12.0), std::invalid_argument);
    CHECK_THROWS_AS(build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, 0.0), std::invalid_argument);
    // square poking out of Delta
    CHECK_THROWS_AS(build_reference(0.9, 0.05, 1.0 / 12, 1.0), std::invalid_argument);
    // grid that does not align with the pattern thirds
    CHECK_THROWS_AS(build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, 1.0, 100),
                    std::invalid_argument);
}

TEST_CASE("joint L1 distance follows the 2 eta s^2 / 3 law") {
    double side = 1.0 / 12;
    for (double eta : {0.5, 1.0, 2.0}) {
        auto pair = build_reference(11.0 / 18, 5.0 / 18, side, eta);
        double expect = 2.0 * eta * side * side / 3.0; // 6 cells of area (s/3)^2, height eta
        CHECK(joint_distance(pair.f, pair.f_tilde) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("all three marginals are blind to the perturbation") {
    auto pair = build_reference();
    for (auto dir : {MarginalDirection::x1, MarginalDirection::x2, MarginalDirection::sum}) {
        auto mf = marginal(pair.f, dir, 721);
        auto mg = marginal(pair.f_tilde, dir, 721);
        CHECK(mf.max_abs_diff(mg) <= 1e-9);
        CHECK(std::fabs(mf.integral() - 1.0) < 1e-6);
    }
}

TEST_CASE("marginals match the uniform-density cross sections") {
    auto pair = build_reference();
    auto m1 = marginal(pair.f, MarginalDirection::x1, 721);
    for (int i = 0; i < m1.n_nodes(); i += 13) {
        double x = m1.node(i);
        double len = std::max(0.0, std::min(x, 1.0 - x) - (1.0 - x) / 2.0);
        CHECK(std::fabs(m1.values()[i] - 12.0 * len) < 1e-9);
    }
    auto ms = marginal(pair.f, MarginalDirection::sum, 721);
    for (int i = 0; i < ms.n_nodes(); i += 13) {
        double t = ms.node(i);
        double len = std::max(0.0, (2.0 * t - 1.0) - t / 2.0);
        CHECK(std::fabs(ms.values()[i] - 12.0 * len) < 1e-9);
    }
}

TEST_CASE("z distribution endpoints and symmetry") {
    auto pair = build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, 1.0, 72);
    auto cdf = z_distribution(pair.f, Rational(1, 2), 361);
    int n = cdf.n_nodes();
    CHECK(cdf.values()[0] == doctest::Approx(0.125).epsilon(1e-10)); // (1-p)^3, atom at 0
    CHECK(cdf.values()[n - 1] == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 1; i < n - 1; ++i) {
        CHECK(cdf.values()[i] >= cdf.values()[i - 1] - 1e-12);
        // at p = 1/2, Z and 1 - Z agree in law, so CDF(z) + CDF(1-z) = 1
        // away from the atoms at 0 and 1
        CHECK(std::fabs(cdf.values()[i] + cdf.values()[n - 1 - i] - 1.0) < 1e-8);
    }
}

TEST_CASE("z distributions of f and f-tilde coincide") {
    auto pair = build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, 1.0, 72);
    for (auto& p : {Rational(3, 10), Rational(1, 2)}) {
        auto a = z_distribution(pair.f, p, 361);
        auto b = z_distribution(pair.f_tilde, p, 361);
        CHECK(a.max_abs_diff(b) <= 1e-8);
    }
}
