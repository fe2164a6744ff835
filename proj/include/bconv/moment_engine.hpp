#ifndef BCONV_MOMENT_ENGINE_HPP
#define BCONV_MOMENT_ENGINE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bconv/measures.hpp"
#include "bconv/rational.hpp"

namespace bconv {

/// Failure of a numeric procedure (vanishing pivot, divergent quadrature).
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline bool near_zero(const Rational& x) { return x == 0; }
inline bool near_zero(double x) { return std::fabs(x) < 1e-13; }
} // namespace detail

/// E[(1-Z)^n] for n = 0..order, binomially from E[Z^k].
template <class T>
std::vector<T> complement_of(const std::vector<T>& z, int order) {
    std::vector<T> c(order + 1);
    for (int n = 0; n <= order; ++n) {
        T s(0);
        for (int i = 0; i <= n; ++i) {
            T term = binomial<T>(n, i) * z[i];
            s += (i % 2 == 0) ? term : -term;
        }
        c[n] = s;
    }
    return c;
}

/// Moments of the Bernoulli(p) convolution from the mixed stick moments:
///   E[Z^n] (1 - E[(1-Y)^n]) = p sum_{k<n} C(n,k) E[Y^{n-k}(1-Y)^k] E[Z^k].
template <class T>
std::vector<T> forward_z_moments_from_mixed(const MixedMoments<T>& mm, const T& p, int order) {
    if (order > mm.order) throw std::invalid_argument("mixed moment table too short");
    std::vector<T> z(order + 1);
    z[0] = T(1);
    for (int n = 1; n <= order; ++n) {
        T denom = T(1) - mm.at(0, n);
        if (detail::near_zero(denom))
            throw numeric_error("vanishing denominator 1 - E[(1-Y)^n]: stick measure is delta_0");
        T s(0);
        for (int k = 0; k < n; ++k) s += binomial<T>(n, k) * mm.at(n - k, k) * z[k];
        z[n] = p * s / denom;
    }
    return z;
}

template <class T> struct CoefficientTableT {
    int order = 0;
    T p{};
    std::vector<std::vector<T>> a; // a[n][k], valid for 1 <= k <= n
    std::vector<T> c;              // c[n], valid for 1 <= n

    T pivot(int n) const { return a[n][n] + c[n]; }
};

/// a_{n,k} = (-1)^k p C(n,k) E[(1-Z)^k],  c_n = (1-p) E[Z^n].
template <class T>
CoefficientTableT<T> coefficient_table_impl(const std::vector<T>& z, const T& p, int order) {
    auto cz = complement_of(z, order);
    CoefficientTableT<T> t;
    t.order = order;
    t.p = p;
    t.a.assign(order + 1, {});
    t.c.assign(order + 1, T(0));
    for (int n = 1; n <= order; ++n) {
        t.a[n].assign(n + 1, T(0));
        for (int k = 1; k <= n; ++k) {
            T v = p * binomial<T>(n, k) * cz[k];
            t.a[n][k] = (k % 2 == 0) ? v : -v;
        }
        t.c[n] = (T(1) - p) * z[n];
    }
    return t;
}

template <class T> T pivot_impl(const std::vector<T>& z, const T& p, int n) {
    if (n < 1) throw std::invalid_argument("pivot index must be >= 1");
    auto cz = complement_of(z, n);
    T v = p * cz[n];
    return (T(1) - p) * z[n] + ((n % 2 == 0) ? v : -v);
}

template <class T> struct ReconstructionReportT {
    std::vector<T> b;      // b[0..N]
    std::vector<T> pivots; // pivots[n] = a_{n,n} + c_n, n >= 2 (0 for n < 2)
    T ey_estimate{};       // 1/b_N: converges like Theta(1/N), see report docs
    std::vector<T> mu_moments; // recovered with ey_estimate

    /// Exact recovery when E[Y] is known from elsewhere: the b_n determine
    /// the stick moments only up to this one scalar.
    std::vector<T> mu_moments_given_mean(const T& ey) const {
        int order = static_cast<int>(b.size()) - 1;
        std::vector<T> comp(order + 1);
        for (int n = 0; n <= order; ++n) comp[n] = T(1) - b[n] * ey;
        std::vector<T> mu(order + 1);
        for (int n = 0; n <= order; ++n) {
            T s(0);
            for (int i = 0; i <= n; ++i) {
                T term = binomial<T>(n, i) * comp[i];
                s += (i % 2 == 0) ? term : -term;
            }
            mu[n] = s;
        }
        return mu;
    }
};

/// Recursion b_n = -(a_{n,n}+c_n)^{-1} sum_{k<n} a_{n,k} b_k with b_0 = 0,
/// b_1 = 1. Requires p != 1/2; throws numeric_error on a vanishing pivot.
template <class T>
ReconstructionReportT<T> reconstruct_impl(const std::vector<T>& z, const T& p, int order) {
    if (order < 2) throw std::invalid_argument("reconstruction needs order >= 2");
    auto t = coefficient_table_impl(z, p, order);
    ReconstructionReportT<T> r;
    r.b.assign(order + 1, T(0));
    r.pivots.assign(order + 1, T(0));
    r.b[1] = T(1);
    for (int n = 2; n <= order; ++n) {
        T piv = t.pivot(n);
        r.pivots[n] = piv;
        if (detail::near_zero(piv))
            throw numeric_error("reconstruction pivot a_{n,n}+c_n vanishes at n=" +
                                std::to_string(n) + ": near-singular at p ~ 1/2");
        T s(0);
        for (int k = 1; k < n; ++k) s += t.a[n][k] * r.b[k];
        r.b[n] = -s / piv;
    }
    r.ey_estimate = T(1) / r.b[order];
    r.mu_moments = r.mu_moments_given_mean(r.ey_estimate);
    return r;
}

/// Consistency residual c_n b_n + sum_k a_{n,k} b_k with the b_k computed
/// from the stick moments; zero certifies a consistent (mu, Z, p) triple.
template <class T>
T prop22_residual_impl(const std::vector<T>& mu, const std::vector<T>& z, const T& p, int n) {
    auto comp = complement_of(mu, n); // E[(1-Y)^k]
    T ey = mu[1];
    if (detail::near_zero(ey)) throw numeric_error("E[Y] = 0: stick measure is delta_0");
    std::vector<T> b(n + 1);
    for (int k = 0; k <= n; ++k) b[k] = (T(1) - comp[k]) / ey;
    auto t = coefficient_table_impl(z, p, n);
    T s = t.c[n] * b[n];
    for (int k = 1; k <= n; ++k) s += t.a[n][k] * b[k];
    return s;
}

// ---- MomentVector-level wrappers -----------------------------------------

MomentVector forward_z_moments(const MomentVector& mu_moments, const Rational& p, int order);

/// Measure-level forward map. For grid densities the mixed moments are
/// computed by direct quadrature, which keeps the error at the quadrature
/// level instead of amplifying it through alternating binomial sums.
MomentVector forward_z_moments(const MeasureSpec& mu, const Rational& p, int order);

struct CoefficientTable {
    Arithmetic arithmetic;
    CoefficientTableT<Rational> exact;
    CoefficientTableT<double> floating;
};

CoefficientTable coefficient_table(const MomentVector& z_moments, const Rational& p, int order);

Rational pivot(const MomentVector& z_moments, const Rational& p, int n);
double pivot_float(const MomentVector& z_moments, double p, int n);

struct ReconstructionReport {
    Arithmetic arithmetic;
    ReconstructionReportT<Rational> exact;
    ReconstructionReportT<double> floating;
    Rational p;
    int order = 0;

    void write_csv(const std::string& path) const; // rows: n, b_n, pivot_n
};

ReconstructionReport reconstruct(const MomentVector& z_moments, const Rational& p, int order);

Rational prop22_residual(const MomentVector& mu_moments, const MomentVector& z_moments,
                         const Rational& p, int n);

struct HausdorffCheck {
    bool ok = true;
    int j = -1; // first violated difference: (-1)^k Delta^k m_j < 0
    int k = -1;
};

HausdorffCheck hausdorff_check(const MomentVector& m, double float_tol = 1e-10);

} // namespace bconv

#endif
