#ifndef BCONV_NONUNIQUE_HPP
#define BCONV_NONUNIQUE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bconv/fractional.hpp"
#include "bconv/measures.hpp"
#include "bconv/stats.hpp"

namespace bconv {

/// Polynomial perturbation eps(x), antisymmetric about 1/2
/// (eps(x) = -eps(1-x)) with zero constant term (eps(x) = O(x) at 0).
class PerturbationFn {
  public:
    /// coeffs[k] multiplies x^k; coeffs[0] must be zero; antisymmetry is
    /// verified coefficient-wise under x -> 1-x.
    explicit PerturbationFn(std::vector<double> coeffs);

    /// delta * x(1-x)(1-2x), the default family.
    static PerturbationFn cubic(double delta);

    double operator()(double x) const;
    double amplitude() const; // max |coeff|
    const std::vector<double>& coeffs() const { return coeffs_; }
    PowerSeriesFn as_power_series() const;

  private:
    std::vector<double> coeffs_;
};

enum class Provenance { gem2_family, fractional };

/// A stick measure nu with density rho(x) = (1-x)^{theta-1} phi(x) whose
/// Bernoulli(1/2) convolution is Beta(theta/2, theta/2).
struct ConstructedMeasure {
    MeasureSpec measure; // grid density rho
    GridFunction phi;
    double theta = 0.0;
    Provenance provenance = Provenance::gem2_family;
    double delta = 0.0; // fractional path: perturbation amplitude

    const GridFunction& rho() const { return measure.grid(); }
    void write_metadata_json(const std::string& path) const;
};

/// theta = 2 family: extend f on [0,1/2] by x rho(x) = (1-x) rho(1-x) and
/// normalize; every member has the uniform law as its Bernoulli(1/2)
/// convolution.
ConstructedMeasure construct_gem2(const GridFunction& f_half, int n_nodes = (1 << 19) | 1);

/// General theta >= 1: phi = (2/Gamma(theta/2)) D^{theta/2}[x^{theta/2} +
/// x^{theta/2-1} eps(x)] on the exact power-series path, rho = (1-x)^{theta-1}
/// phi. Errors if phi goes negative (perturbation too large), if the
/// I^{theta/2} roundtrip misses by more than 1e-8, or if the analytic mass
/// of rho is off 1 by more than 1e-8.
ConstructedMeasure construct_fractional(double theta, const PerturbationFn& eps,
                                        int n_nodes = (1 << 19) | 1);

/// Largest delta for which the cubic perturbation keeps min phi >= 0,
/// found by bisection.
double max_delta_for_positivity(double theta);

/// Default fractional construction: cubic perturbation at 90% of the
/// positivity-critical amplitude.
ConstructedMeasure construct_fractional_default(double theta, int n_nodes = (1 << 19) | 1);

struct NonuniquenessReport {
    // (1) forward Z-moments at p = 1/2 vs Beta(theta/2, theta/2)
    std::vector<double> z_moments;
    std::vector<double> target_moments;
    double max_moment_dev = 0.0;
    bool moments_pass = false; // <= 1e-6
    // (2) Monte Carlo KS vs the Beta(theta/2, theta/2) CDF
    KsReport ks;
    // (3) distinctness from the Beta(1,theta) density theta (1-x)^{theta-1}
    double sup_distance = 0.0;
    bool density_available = true; // false for Dirac inputs; check (3) skipped
    bool all_pass = false;

    void write_json(const std::string& path) const;
};

NonuniquenessReport verify_nonuniqueness(const MeasureSpec& nu, double theta, int order,
                                         std::int64_t mc_samples, std::uint64_t seed,
                                         int workers = 0);

inline NonuniquenessReport verify_nonuniqueness(const ConstructedMeasure& nu, int order,
                                                std::int64_t mc_samples, std::uint64_t seed,
                                                int workers = 0) {
    return verify_nonuniqueness(nu.measure, nu.theta, order, mc_samples, seed, workers);
}

} // namespace bconv

#endif
