#include "bconv/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "bconv/moment_engine.hpp" // numeric_error

namespace bconv {

namespace {

// 1/Gamma(g) is 0 at the poles g = 0, -1, -2, ...
bool gamma_pole(double g) { return g < 0.5 && std::fabs(g - std::round(g)) < 1e-9; }

} // namespace

FractionalOrder::FractionalOrder(double a) : alpha(a) {
    if (!(a > 0.0)) throw std::invalid_argument("fractional order must be positive");
    integer_part = static_cast<int>(std::floor(a));
    fractional_part = a - integer_part;
    if (fractional_part < 1e-12) fractional_part = 0.0;
}

PowerSeriesFn::PowerSeriesFn(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (t.exponent <= -1.0)
            throw std::invalid_argument("power-series exponents must exceed -1");
    std::sort(terms_.begin(), terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
    // Merge equal exponents, drop vanished terms.
    std::vector<PowerTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && std::fabs(merged.back().exponent - t.exponent) < 1e-12)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const PowerTerm& t) { return t.coeff == 0.0; }),
                 merged.end());
    terms_ = std::move(merged);
}

PowerSeriesFn PowerSeriesFn::monomial(double coeff, double exponent) {
    return PowerSeriesFn({{coeff, exponent}});
}

PowerSeriesFn PowerSeriesFn::polynomial(const std::vector<double>& coeffs) {
    std::vector<PowerTerm> t;
    for (size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) t.push_back({coeffs[k], static_cast<double>(k)});
    return PowerSeriesFn(std::move(t));
}

double PowerSeriesFn::operator()(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        if (x == 0.0)
            s += (t.exponent == 0.0) ? t.coeff : 0.0;
        else
            s += t.coeff * std::pow(x, t.exponent);
    }
    return s;
}

PowerSeriesFn PowerSeriesFn::scaled(double c) const {
    std::vector<PowerTerm> t = terms_;
    for (auto& term : t) term.coeff *= c;
    return PowerSeriesFn(std::move(t));
}

PowerSeriesFn PowerSeriesFn::plus(const PowerSeriesFn& other) const {
    std::vector<PowerTerm> t = terms_;
    t.insert(t.end(), other.terms_.begin(), other.terms_.end());
    return PowerSeriesFn(std::move(t));
}

GridFunction PowerSeriesFn::tabulate(int n_nodes) const {
    return GridFunction::tabulate([this](double x) { return (*this)(x); }, n_nodes);
}

double PowerSeriesFn::max_abs_diff(const PowerSeriesFn& other, int probe_nodes) const {
    double d = 0.0;
    for (int i = 0; i < probe_nodes; ++i) {
        double x = static_cast<double>(i) / (probe_nodes - 1);
        d = std::max(d, std::fabs((*this)(x) - other(x)));
    }
    return d;
}

PowerSeriesFn frac_integral(const PowerSeriesFn& f, double alpha) {
    (void)FractionalOrder{alpha}; // validates alpha > 0
    std::vector<PowerTerm> t;
    for (const auto& term : f.terms()) {
        double ratio = std::tgamma(term.exponent + 1.0) / std::tgamma(term.exponent + 1.0 + alpha);
        t.push_back({term.coeff * ratio, term.exponent + alpha});
    }
    return PowerSeriesFn(std::move(t));
}

PowerSeriesFn frac_derivative(const PowerSeriesFn& f, double alpha) {
    (void)FractionalOrder{alpha};
    std::vector<PowerTerm> t;
    for (const auto& term : f.terms()) {
        double g = term.exponent + 1.0 - alpha;
        if (gamma_pole(g)) continue; // D^alpha annihilates x^{alpha-j}, j = 1,2,...
        double e = term.exponent - alpha;
        if (e <= -1.0 + 1e-12)
            throw std::invalid_argument("fractional derivative leaves exponent <= -1");
        t.push_back({term.coeff * std::tgamma(term.exponent + 1.0) / std::tgamma(g), e});
    }
    return PowerSeriesFn(std::move(t));
}

// ---- grid path -------------------------------------------------------------

namespace {

// Product integration of the L1 type: (x-u)^{alpha-1} integrated exactly
// against the piecewise-linear interpolant of f.
GridFunction frac_integral_grid(const GridFunction& f, double alpha) {
    int n = f.n_nodes();
    double h = f.spacing();
    const std::vector<double>& v = f.values();

    // P[d] = d^alpha, Q[d] = d^{alpha+1}
    std::vector<double> P(n), Q(n);
    for (int d = 0; d < n; ++d) {
        P[d] = std::pow(static_cast<double>(d), alpha);
        Q[d] = std::pow(static_cast<double>(d), alpha + 1.0);
    }
    double front = std::pow(h, alpha) / std::tgamma(alpha);

    std::vector<double> out(n, 0.0);
    unsigned n_workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < n_workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (int i = static_cast<int>(w) + 1; i < n; i += static_cast<int>(n_workers)) {
                KahanSum s;
                for (int j = 0; j < i; ++j) {
                    int d = i - j;
                    double df = v[j + 1] - v[j];
                    s.add((v[j] + df * d) * (P[d] - P[d - 1]) / alpha -
                          df * (Q[d] - Q[d - 1]) / (alpha + 1.0));
                }
                out[i] = front * s.value();
            }
        }));
    }
    for (auto& fut : futs) fut.get();
    return GridFunction(std::move(out), f.lo(), f.hi());
}

// m-th derivative on the grid, O(h^2) stencils (centered inside, one-sided
// at the edges). m in {1,2,3}.
std::vector<double> fd_derivative(const std::vector<double>& v, double h, int m) {
    int n = static_cast<int>(v.size());
    std::vector<double> w(n, 0.0);
    if (m == 1) {
        if (n < 3) throw std::invalid_argument("grid too small for differentiation");
        w[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
        for (int i = 1; i + 1 < n; ++i) w[i] = (v[i + 1] - v[i - 1]) / (2 * h);
        w[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    } else if (m == 2) {
        if (n < 4) throw std::invalid_argument("grid too small for differentiation");
        double h2 = h * h;
        w[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h2;
        for (int i = 1; i + 1 < n; ++i) w[i] = (v[i + 1] - 2 * v[i] + v[i - 1]) / h2;
        w[n - 1] = (2 * v[n - 1] - 5 * v[n - 2] + 4 * v[n - 3] - v[n - 4]) / h2;
    } else if (m == 3) {
        if (n < 6) throw std::invalid_argument("grid too small for differentiation");
        double h3 = h * h * h;
        w[0] = (-5 * v[0] + 18 * v[1] - 24 * v[2] + 14 * v[3] - 3 * v[4]) / (2 * h3);
        w[1] = (-3 * v[0] + 10 * v[1] - 12 * v[2] + 6 * v[3] - v[4]) / (2 * h3);
        for (int i = 2; i + 2 < n; ++i)
            w[i] = (-v[i - 2] + 2 * v[i - 1] - 2 * v[i + 1] + v[i + 2]) / (2 * h3);
        w[n - 2] = (3 * v[n - 1] - 10 * v[n - 2] + 12 * v[n - 3] - 6 * v[n - 4] + v[n - 5]) /
                   (2 * h3);
        w[n - 1] = (5 * v[n - 1] - 18 * v[n - 2] + 24 * v[n - 3] - 14 * v[n - 4] + 3 * v[n - 5]) /
                   (2 * h3);
    } else {
        throw std::invalid_argument("grid fractional derivative supports order < 3 only");
    }
    return w;
}

// f^(k)(0) by one-sided stencils, k = 0,1,2 (enough for m = [alpha]+1 <= 3).
double fd_at_zero(const std::vector<double>& v, double h, int k) {
    if (k == 0) return v[0];
    if (static_cast<int>(v.size()) < 6) throw std::invalid_argument("grid too small");
    if (k == 1) // 4th order
        return (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
    if (k == 2) // 3rd order
        return (35 * v[0] - 104 * v[1] + 114 * v[2] - 56 * v[3] + 11 * v[4]) / (12 * h * h);
    throw std::invalid_argument("initial derivative order too large");
}

GridFunction frac_derivative_core(const GridFunction& f, const FractionalOrder& ord) {
    int m = ord.integer_part + 1;
    if (m > 3) throw std::invalid_argument("grid fractional derivative requires alpha < 3");
    double alpha = ord.alpha;
    double h = f.spacing();

    std::vector<double> d0(m);
    for (int k = 0; k < m; ++k) d0[k] = fd_at_zero(f.values(), h, k);

    GridFunction base =
        frac_integral_grid(GridFunction(fd_derivative(f.values(), h, m), f.lo(), f.hi()),
                           static_cast<double>(m) - alpha);

    std::vector<double> out = base.values();
    int n = f.n_nodes();
    for (int k = 0; k < m; ++k) {
        double g = k + 1.0 - alpha;
        if (gamma_pole(g)) continue;
        double c = d0[k] / std::tgamma(g);
        double e = k - alpha;
        for (int i = 0; i < n; ++i) {
            double x = f.node(i);
            if (x == 0.0)
                out[i] += (std::fabs(e) < 1e-12) ? c : 0.0; // finite part at the origin
            else
                out[i] += c * std::pow(x, e);
        }
    }
    return GridFunction(std::move(out), f.lo(), f.hi());
}

} // namespace

GridFunction frac_integral(const GridFunction& f, double alpha) {
    (void)FractionalOrder{alpha};
    return frac_integral_grid(f, alpha);
}

GridFunction frac_derivative(const GridFunction& f, double alpha, bool validate) {
    FractionalOrder ord(alpha);
    GridFunction fine = frac_derivative_core(f, ord);
    int n = f.n_nodes();
    if (validate && n >= 17 && (n - 1) % 2 == 0) {
        std::vector<double> half(n / 2 + 1);
        for (size_t i = 0; i < half.size(); ++i) half[i] = f.values()[2 * i];
        GridFunction coarse = frac_derivative_core(GridFunction(std::move(half), f.lo(), f.hi()),
                                                   ord);
        double scale = 1.0, diff = 0.0;
        for (double v : fine.values()) scale = std::max(scale, std::fabs(v));
        for (int i = 0; i < coarse.n_nodes(); ++i)
            diff = std::max(diff, std::fabs(fine.values()[2 * i] - coarse.values()[i]));
        if (diff > 0.05 * scale)
            throw numeric_error("grid fractional derivative failed the grid-halving "
                                "convergence check; input too rough for the stencil order");
    }
    return fine;
}

} // namespace bconv
