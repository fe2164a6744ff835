#ifndef BCONV_STATS_HPP
#define BCONV_STATS_HPP

#include <functional>
#include <vector>

#include "bconv/measures.hpp"

namespace bconv {

struct KsReport {
    double statistic = 0.0; // D_n in [0,1]
    std::int64_t n = 0;     // effective sample size
    double p_value = 1.0;   // asymptotic (Kolmogorov series, 100 terms)
    double alpha = 0.0;
    bool pass = false; // p_value >= alpha
};

/// Survival function of the Kolmogorov distribution at lambda,
/// 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), truncated at 100 terms.
double kolmogorov_sf(double lambda);

/// One-sample KS against a continuous CDF. Requires n >= 50 so the
/// asymptotic p-value is adequate.
KsReport ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                       double alpha);

KsReport two_sample_ks(std::vector<double> a, std::vector<double> b, double alpha);

struct EmpiricalMoments {
    MomentVector moments;            // floating
    std::vector<double> half_widths; // 5 sigma_n / sqrt(n) per moment
};

EmpiricalMoments empirical_moments(const std::vector<double>& samples, int order);

/// Regularized incomplete beta function I_x(a,b), the Beta(a,b) CDF.
double beta_cdf(double a, double b, double x);

} // namespace bconv

#endif
