#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bconv/h_operator.hpp"
#include "bconv/measures.hpp"

using namespace bconv;

namespace {

ConvolutionDensity uniform_q() {
    return ConvolutionDensity(GridFunction::tabulate([](double) { return 1.0; }, 4097));
}

GridFunction tab(const std::function<double(double)>& f, int n = (1 << 14) | 1) {
    return GridFunction::tabulate(f, n);
}

} // namespace

TEST_CASE("convolution density validation") {
    CHECK_NOTHROW(uniform_q());
    // Beta(3/2,3/2) density is symmetric, positive inside, mass 1 (renormalise
    // the tabulation so the interpolant's mass is exactly 1)
    double c = 8.0 / std::numbers::pi;
    auto qb = GridFunction::tabulate(
        [c](double x) { return c * std::sqrt(std::max(0.0, x * (1.0 - x))); }, 8193);
    double mass = qb.integral();
    for (double& v : qb.values()) v /= mass;
    CHECK_NOTHROW(ConvolutionDensity{qb});

    // asymmetric density rejected
    CHECK_THROWS_AS(ConvolutionDensity(tab([](double x) { return 2.0 * x; }, 4097)),
                    std::invalid_argument);
    // wrong mass rejected
    CHECK_THROWS_AS(ConvolutionDensity(tab([](double) { return 2.0; }, 4097)),
                    std::invalid_argument);
    // wrong domain rejected
    CHECK_THROWS_AS(
        ConvolutionDensity(GridFunction::tabulate([](double) { return 2.0; }, 101, 0.0, 0.5)),
        std::invalid_argument);
}

TEST_CASE("H against closed forms for q == 1") {
    auto q = uniform_q();

    // rho = 2(1-u): [H rho](x) = int_0^x 2(1-u)/(1-u) du = 2x
    auto h1 = apply_H(tab([](double u) { return 2.0 * (1.0 - u); }), q, 1025);
    for (int i = 0; i < h1.n_nodes(); i += 16)
        CHECK(std::fabs(h1.values()[i] - 2.0 * h1.node(i)) < 1e-8);

    // rho = 1: [H rho](x) = -log(1-x); probe on [0, 0.9]
    auto h2 = apply_H(tab([](double) { return 1.0; }), q, 1025);
    for (int i = 0; i < h2.n_nodes(); ++i) {
        double x = h2.node(i);
        if (x > 0.9) break;
        CHECK(std::fabs(h2.values()[i] + std::log1p(-x)) < 1e-8);
    }

    CHECK(h1.values()[0] == 0.0);
}

TEST_CASE("H is linear") {
    auto q = uniform_q();
    auto r1 = tab([](double u) { return 2.0 * (1.0 - u); }, 4097);
    auto r2 = tab([](double u) { return 6.0 * u * (1.0 - u); }, 4097);
    auto mix = tab([](double u) { return 0.6 * 2.0 * (1.0 - u) + 0.4 * 6.0 * u * (1.0 - u); },
                   4097);
    auto h1 = apply_H(r1, q, 257), h2 = apply_H(r2, q, 257), hm = apply_H(mix, q, 257);
    for (int i = 0; i < 257; ++i)
        CHECK(std::fabs(hm.values()[i] - 0.6 * h1.values()[i] - 0.4 * h2.values()[i]) < 1e-9);
}

TEST_CASE("rho must be nonnegative on [0,1]") {
    auto q = uniform_q();
    CHECK_THROWS_AS(apply_H(tab([](double u) { return u - 0.2; }, 1025), q, 129),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        apply_H(GridFunction::tabulate([](double) { return 1.0; }, 1025, 0.0, 0.5), q, 129),
        std::invalid_argument);
}

TEST_CASE("characterization accepts conforming densities") {
    auto q = uniform_q();

    // Beta(1,2) sticks give the uniform convolution at p = 1/2
    auto rep = check_characterization(tab([](double u) { return 2.0 * (1.0 - u); }), q, 1e-7,
                                      1025);
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= 1e-7);

    // a non-GEM member of the symmetric family conforms too
    auto f = GridFunction::tabulate([](double) { return 1.0; }, 2049, 0.0, 0.5);
    auto nu = symmetric_family_density(f, (1 << 14) | 1);
    auto rep2 = check_characterization(nu.grid(), q, 1e-7, 1025);
    CHECK(rep2.pass);
}

TEST_CASE("characterization rejects violating densities") {
    auto q = uniform_q();
    for (auto& fn : std::vector<std::function<double(double)>>{
             [](double) { return 1.0; },
             [](double u) { return 2.0 * u; },
             [](double u) { return 6.0 * u * (1.0 - u); },
             [](double u) { return 3.0 * (1.0 - u) * (1.0 - u); },
         }) {
        auto rep = check_characterization(tab(fn), q, 1e-7, 1025);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_deviation > 1e-3);
    }
}
