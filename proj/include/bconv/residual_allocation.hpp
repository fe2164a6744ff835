#ifndef BCONV_RESIDUAL_ALLOCATION_HPP
#define BCONV_RESIDUAL_ALLOCATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bconv/measures.hpp"

namespace bconv {

/// Finite truncation of a stick-breaking partition of [0,1]:
/// X_1 = Y_1, X_2 = (1-Y_1) Y_2, ... until the unallocated mass drops
/// below truncation_tol.
struct Partition {
    std::vector<double> parts;
    double remainder = 0.0;
    double truncation_tol = 0.0;

    void write_csv(const std::string& path) const;
};

struct ConvolutionSampleConfig {
    Rational p;                   // in (0,1)
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double truncation_tol = 1e-12; // in (0, 1e-6]
    int workers = 1;

    void validate() const;
};

/// Draws sticks Y_i ~ measure until Prod(1-Y_j) < tol. Aborts with a
/// diagnostic if the part count exceeds 10^7 (measure concentrated at 0).
Partition sample_partition(const MeasureSpec& measure, double tol, std::uint64_t seed);

/// Monte Carlo draws of Z = sum eps_i X_i with eps_i ~ Bernoulli(p).
/// The marks are coupled to shared uniforms (eps_i = 1 iff u_i < p), so
/// increasing p with the same seed never decreases a sample. Truncation
/// biases each sample by at most truncation_tol. Chunked seeding makes the
/// output independent of the worker count.
std::vector<double> sample_bernoulli_convolution(const MeasureSpec& measure,
                                                 const ConvolutionSampleConfig& config);

} // namespace bconv

#endif
