#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bconv/grid_function.hpp"
#include "bconv/residual_allocation.hpp"
#include "bconv/stats.hpp"

using namespace bconv;

TEST_CASE("dirac stick-breaking is the geometric cascade") {
    // Y == 1/2 gives parts 2^{-k}; remainder after k parts is 2^{-k}
    auto part = sample_partition(MeasureSpec::dirac(Rational(1, 2)), 1e-6, 1);
    REQUIRE(part.parts.size() == 20); // first k with 2^{-k} < 1e-6
    for (size_t k = 0; k < part.parts.size(); ++k)
        CHECK(part.parts[k] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(k) - 1))
                                   .epsilon(1e-14));
    CHECK(part.remainder == doctest::Approx(std::ldexp(1.0, -20)).epsilon(1e-14));

    // Y == 1 allocates everything in one part
    auto one = sample_partition(MeasureSpec::dirac(1), 1e-12, 5);
    REQUIRE(one.parts.size() == 1);
    CHECK(one.parts[0] == 1.0);
    CHECK(one.remainder == 0.0);
}

TEST_CASE("partition invariants over seeds and measures") {
    std::vector<MeasureSpec> corpus{
        MeasureSpec::beta(Rational(1), Rational(1, 2)),
        MeasureSpec::beta(1, 1),
        MeasureSpec::beta(1, 3),
        MeasureSpec::dirac(Rational(3, 10)),
    };
    for (const auto& m : corpus) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            auto part = sample_partition(m, 1e-12, seed);
            KahanSum s;
            for (double x : part.parts) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
                s.add(x);
            }
            CHECK(part.remainder >= 0.0);
            CHECK(part.remainder < 1e-12);
            CHECK(std::fabs(s.value() + part.remainder - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("config validation") {
    ConvolutionSampleConfig cfg;
    cfg.p = Rational(1, 2);
    cfg.samples = 100;
    cfg.truncation_tol = 1e-12;
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.p = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.p = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.truncation_tol = 1e-3; // too coarse
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.samples = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.workers = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dirac(1/2) at p = 1/2 gives the uniform convolution") {
    ConvolutionSampleConfig cfg;
    cfg.p = Rational(1, 2);
    cfg.samples = 100000;
    cfg.seed = 11;
    auto z = sample_bernoulli_convolution(MeasureSpec::dirac(Rational(1, 2)), cfg);
    auto ks = ks_one_sample(z, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.001);
    CHECK(ks.pass);
}

TEST_CASE("gem at p = 1/2 gives the uniform convolution") {
    ConvolutionSampleConfig cfg;
    cfg.p = Rational(1, 2);
    cfg.samples = 100000;
    cfg.seed = 29;
    auto z = sample_bernoulli_convolution(MeasureSpec::beta(1, 2), cfg);
    auto ks = ks_one_sample(z, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.01);
    CHECK(ks.pass);
}

TEST_CASE("mean of Z is p and samples stay in [0,1]") {
    for (auto& pq : {std::pair<int, int>{1, 3}, {1, 2}, {7, 10}}) {
        ConvolutionSampleConfig cfg;
        cfg.p = Rational(pq.first, pq.second);
        cfg.samples = 100000;
        cfg.seed = 3;
        auto z = sample_bernoulli_convolution(MeasureSpec::beta(1, 2), cfg);
        KahanSum s, s2;
        for (double x : z) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
            s.add(x);
            s2.add(x * x);
        }
        double n = static_cast<double>(z.size());
        double mean = s.value() / n;
        double var = s2.value() / n - mean * mean;
        double p = to_double(cfg.p);
        CHECK(std::fabs(mean - p) <= 5.0 * std::sqrt(var / n));
    }
}

TEST_CASE("symmetry in distribution at p = 1/2") {
    ConvolutionSampleConfig cfg;
    cfg.p = Rational(1, 2);
    cfg.samples = 50000;
    cfg.seed = 17;
    auto z = sample_bernoulli_convolution(MeasureSpec::beta(1, 3), cfg);
    cfg.seed = 18;
    auto w = sample_bernoulli_convolution(MeasureSpec::beta(1, 3), cfg);
    for (double& x : w) x = 1.0 - x;
    CHECK(two_sample_ks(z, w, 0.01).pass);
}

TEST_CASE("monotone coupling in p") {
    ConvolutionSampleConfig lo, hi;
    lo.p = Rational(3, 10);
    hi.p = Rational(7, 10);
    lo.samples = hi.samples = 20000;
    lo.seed = hi.seed = 99;
    auto a = sample_bernoulli_convolution(MeasureSpec::beta(1, 2), lo);
    auto b = sample_bernoulli_convolution(MeasureSpec::beta(1, 2), hi);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= b[i]);
}

TEST_CASE("output is independent of the worker count") {
    ConvolutionSampleConfig cfg;
    cfg.p = Rational(2, 5);
    cfg.samples = 10000;
    cfg.seed = 4;
    cfg.workers = 1;
    auto serial = sample_bernoulli_convolution(MeasureSpec::beta(1, 3), cfg);
    cfg.workers = 4;
    auto parallel = sample_bernoulli_convolution(MeasureSpec::beta(1, 3), cfg);
    CHECK(serial == parallel);
}
