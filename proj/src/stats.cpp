#include "bconv/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

namespace bconv {

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    double p = 2.0 * s;
    return std::clamp(p, 0.0, 1.0);
}

KsReport ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                       double alpha) {
    auto n = static_cast<std::int64_t>(samples.size());
    if (n < 50) throw std::invalid_argument("ks_one_sample needs at least 50 samples");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        double f = cdf(samples[i]);
        double lo = static_cast<double>(i) / static_cast<double>(n);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max(d, std::max(hi - f, f - lo));
    }
    KsReport r;
    r.statistic = d;
    r.n = n;
    r.p_value = kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
    r.alpha = alpha;
    r.pass = r.p_value >= alpha;
    return r;
}

KsReport two_sample_ks(std::vector<double> a, std::vector<double> b, double alpha) {
    auto n = static_cast<std::int64_t>(a.size());
    auto m = static_cast<std::int64_t>(b.size());
    if (n < 50 || m < 50) throw std::invalid_argument("two_sample_ks needs at least 50 samples each");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::int64_t i = 0, j = 0;
    while (i < n && j < m) {
        double x = std::min(a[i], b[j]);
        while (i < n && a[i] <= x) ++i;
        while (j < m && b[j] <= x) ++j;
        double fa = static_cast<double>(i) / static_cast<double>(n);
        double fb = static_cast<double>(j) / static_cast<double>(m);
        d = std::max(d, std::fabs(fa - fb));
    }
    double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
    KsReport r;
    r.statistic = d;
    r.n = static_cast<std::int64_t>(ne);
    r.p_value = kolmogorov_sf(std::sqrt(ne) * d);
    r.alpha = alpha;
    r.pass = r.p_value >= alpha;
    return r;
}

EmpiricalMoments empirical_moments(const std::vector<double>& samples, int order) {
    auto n = static_cast<std::int64_t>(samples.size());
    if (n < 50) throw std::invalid_argument("empirical_moments needs at least 50 samples");
    // Raw moments up to 2*order feed the half-width variances.
    std::vector<double> raw(2 * order + 1, 0.0);
    for (double x : samples) {
        double pw = 1.0;
        for (int k = 0; k <= 2 * order; ++k) {
            raw[k] += pw;
            pw *= x;
        }
    }
    for (double& v : raw) v /= static_cast<double>(n);
    std::vector<double> mom(raw.begin(), raw.begin() + order + 1);
    mom[0] = 1.0;
    EmpiricalMoments e;
    e.half_widths.assign(order + 1, 0.0);
    for (int k = 1; k <= order; ++k) {
        double var = std::max(0.0, raw[2 * k] - raw[k] * raw[k]);
        e.half_widths[k] = 5.0 * std::sqrt(var / static_cast<double>(n));
    }
    // Empirical moments can violate monotonicity only by noise; accept them
    // with a loose gate.
    e.moments = MomentVector::floating(std::move(mom), 1e-2);
    return e;
}

double beta_cdf(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
}

} // namespace bconv
