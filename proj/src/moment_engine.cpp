#include "bconv/moment_engine.hpp"

#include <fstream>

namespace bconv {

namespace {
std::vector<double> float_values(const MomentVector& m) {
    if (m.arithmetic == Arithmetic::floating) return m.fvals;
    std::vector<double> f(m.rvals.size());
    for (size_t i = 0; i < f.size(); ++i) f[i] = to_double(m.rvals[i]);
    return f;
}
} // namespace

MomentVector forward_z_moments(const MomentVector& mu_moments, const Rational& p, int order) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");
    if (mu_moments.order() < order)
        throw std::invalid_argument("need stick moments up to the requested order");
    if (mu_moments.arithmetic == Arithmetic::exact) {
        auto mm = mixed_from_moments<Rational>(mu_moments.rvals, order);
        return MomentVector::exact(forward_z_moments_from_mixed(mm, p, order));
    }
    auto mm = mixed_from_moments<double>(mu_moments.fvals, order);
    return MomentVector::floating(forward_z_moments_from_mixed(mm, to_double(p), order), 1e-8);
}

MomentVector forward_z_moments(const MeasureSpec& mu, const Rational& p, int order) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");
    if (mu.is_exact()) {
        auto mm = mixed_moments_exact(mu, order);
        return MomentVector::exact(forward_z_moments_from_mixed(mm, p, order));
    }
    auto mm = mixed_moments_float(mu, order);
    return MomentVector::floating(forward_z_moments_from_mixed(mm, to_double(p), order), 1e-8);
}

CoefficientTable coefficient_table(const MomentVector& z_moments, const Rational& p, int order) {
    CoefficientTable t;
    t.arithmetic = z_moments.arithmetic;
    if (t.arithmetic == Arithmetic::exact)
        t.exact = coefficient_table_impl(z_moments.rvals, p, order);
    else
        t.floating = coefficient_table_impl(z_moments.fvals, to_double(p), order);
    return t;
}

Rational pivot(const MomentVector& z_moments, const Rational& p, int n) {
    if (z_moments.arithmetic != Arithmetic::exact)
        throw std::invalid_argument("exact pivot needs exact z-moments; use pivot_float");
    return pivot_impl(z_moments.rvals, p, n);
}

double pivot_float(const MomentVector& z_moments, double p, int n) {
    return pivot_impl(float_values(z_moments), p, n);
}

ReconstructionReport reconstruct(const MomentVector& z_moments, const Rational& p, int order) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("p must lie in (0,1)");
    if (p == Rational(1, 2))
        throw std::invalid_argument(
            "p = 1/2 rejected: distinct stick measures share identical Bernoulli(1/2) "
            "convolutions, so no reconstruction exists");
    if (z_moments.order() < order)
        throw std::invalid_argument("need z-moments up to the requested order");
    ReconstructionReport r;
    r.arithmetic = z_moments.arithmetic;
    r.p = p;
    r.order = order;
    if (r.arithmetic == Arithmetic::exact)
        r.exact = reconstruct_impl(z_moments.rvals, p, order);
    else
        r.floating = reconstruct_impl(z_moments.fvals, to_double(p), order);
    return r;
}

void ReconstructionReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    out << "n,b_n,pivot_n\n";
    for (int n = 0; n <= order; ++n) {
        if (arithmetic == Arithmetic::exact)
            out << n << "," << to_double(exact.b[n]) << "," << to_double(exact.pivots[n]) << "\n";
        else
            out << n << "," << floating.b[n] << "," << floating.pivots[n] << "\n";
    }
}

Rational prop22_residual(const MomentVector& mu_moments, const MomentVector& z_moments,
                         const Rational& p, int n) {
    if (mu_moments.arithmetic != Arithmetic::exact || z_moments.arithmetic != Arithmetic::exact)
        throw std::invalid_argument("prop22_residual requires exact moment vectors");
    if (mu_moments.order() < n || z_moments.order() < n)
        throw std::invalid_argument("moment vectors too short for order n");
    return prop22_residual_impl(mu_moments.rvals, z_moments.rvals, p, n);
}

HausdorffCheck hausdorff_check(const MomentVector& m, double float_tol) {
    HausdorffCheck res;
    int order = m.order();
    if (m.arithmetic == Arithmetic::exact) {
        std::vector<Rational> d = m.rvals;
        for (int k = 0; k <= order; ++k) {
            for (size_t j = 0; j < d.size(); ++j) {
                if (d[j] < 0) {
                    res.ok = false;
                    res.j = static_cast<int>(j);
                    res.k = k;
                    return res;
                }
            }
            if (d.size() <= 1) break;
            std::vector<Rational> next(d.size() - 1);
            for (size_t j = 0; j + 1 < d.size(); ++j) next[j] = d[j] - d[j + 1];
            d = std::move(next);
        }
        return res;
    }
    std::vector<double> d = m.fvals;
    for (int k = 0; k <= order; ++k) {
        for (size_t j = 0; j < d.size(); ++j) {
            if (d[j] < -float_tol) {
                res.ok = false;
                res.j = static_cast<int>(j);
                res.k = k;
                return res;
            }
        }
        if (d.size() <= 1) break;
        std::vector<double> next(d.size() - 1);
        for (size_t j = 0; j + 1 < d.size(); ++j) next[j] = d[j] - d[j + 1];
        d = std::move(next);
    }
    return res;
}

} // namespace bconv
