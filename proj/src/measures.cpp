#include "bconv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bconv/rng.hpp"

namespace bconv {

namespace {

void check_hausdorff_exact(const std::vector<Rational>& m) {
    if (m.empty() || m[0] != 1) throw std::invalid_argument("MomentVector: m_0 must be 1");
    int order = static_cast<int>(m.size()) - 1;
    // (-1)^k Delta^k m_j >= 0 for all j+k <= order.
    std::vector<Rational> d = m;
    for (int k = 0; k <= order; ++k) {
        for (const Rational& v : d)
            if (v < 0) throw std::invalid_argument("MomentVector violates Hausdorff condition");
        std::vector<Rational> next(d.size() - 1);
        for (size_t j = 0; j + 1 < d.size(); ++j) next[j] = d[j] - d[j + 1];
        d = std::move(next);
        if (d.empty()) break;
    }
}

void check_hausdorff_float(const std::vector<double>& m, double tol) {
    if (m.empty() || std::fabs(m[0] - 1.0) > tol)
        throw std::invalid_argument("MomentVector: m_0 must be 1");
    int order = static_cast<int>(m.size()) - 1;
    std::vector<double> d = m;
    for (int k = 0; k <= order; ++k) {
        for (double v : d)
            if (v < -tol) throw std::invalid_argument("MomentVector violates Hausdorff condition");
        std::vector<double> next(d.size() > 0 ? d.size() - 1 : 0);
        for (size_t j = 0; j + 1 < d.size(); ++j) next[j] = d[j] - d[j + 1];
        d = std::move(next);
        if (d.empty()) break;
    }
}

} // namespace

MomentVector MomentVector::exact(std::vector<Rational> vals) {
    check_hausdorff_exact(vals);
    MomentVector v;
    v.arithmetic = Arithmetic::exact;
    v.rvals = std::move(vals);
    return v;
}

MomentVector MomentVector::floating(std::vector<double> vals, double tol) {
    check_hausdorff_float(vals, tol);
    MomentVector v;
    v.arithmetic = Arithmetic::floating;
    v.fvals = std::move(vals);
    return v;
}

MomentVector MomentVector::to_floating() const {
    if (arithmetic == Arithmetic::floating) return *this;
    std::vector<double> f(rvals.size());
    for (size_t i = 0; i < rvals.size(); ++i) f[i] = to_double(rvals[i]);
    MomentVector v;
    v.arithmetic = Arithmetic::floating;
    v.fvals = std::move(f);
    return v;
}

MeasureSpec MeasureSpec::beta(const Rational& a, const Rational& b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("Beta parameters must be positive");
    return MeasureSpec(BetaSpec{a, b});
}

MeasureSpec MeasureSpec::dirac(const Rational& atom) {
    if (atom <= 0) throw std::invalid_argument("Dirac atom at 0 is excluded (measure must have no atom at 0)");
    if (atom > 1) throw std::invalid_argument("Dirac atom must lie in (0,1]");
    return MeasureSpec(DiracSpec{atom});
}

MeasureSpec MeasureSpec::uniform() { return MeasureSpec(UniformSpec{}); }

MeasureSpec MeasureSpec::grid_density(GridFunction density) {
    if (density.lo() != 0.0 || density.hi() != 1.0)
        throw std::invalid_argument("GridDensity must live on [0,1]");
    for (double v : density.values())
        if (v < 0.0) throw std::invalid_argument("GridDensity must be nonnegative at every node");
    double mass = density.integral();
    if (std::fabs(mass - 1.0) > 1e-10)
        throw std::invalid_argument("GridDensity is not normalised: mass deviates by " +
                                    std::to_string(mass - 1.0));
    return MeasureSpec(GridDensitySpec{std::move(density)});
}

MeasureSpec MeasureSpec::parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "uniform") return uniform();
    if (kind == "beta") {
        auto comma = arg.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("beta spec needs two parameters: beta:A,B");
        return beta(parse_rational(arg.substr(0, comma)), parse_rational(arg.substr(comma + 1)));
    }
    if (kind == "dirac") return dirac(parse_rational(arg));
    if (kind == "grid") return grid_density(GridFunction::read_csv(arg));
    if (kind == "symfam") return symmetric_family_density(GridFunction::read_csv(arg));
    throw std::invalid_argument("unknown measure spec: '" + spec + "'");
}

std::string MeasureSpec::to_string() const {
    if (is_uniform()) return "uniform";
    if (is_beta()) {
        const auto& b = std::get<BetaSpec>(v_);
        return "beta:" + format_rational(b.a) + "," + format_rational(b.b);
    }
    if (is_dirac()) return "dirac:" + format_rational(std::get<DiracSpec>(v_).atom);
    return "grid[" + std::to_string(grid().n_nodes()) + " nodes]";
}

namespace {

std::vector<Rational> exact_moment_values(const MeasureSpec& m, int order) {
    std::vector<Rational> v(order + 1);
    v[0] = 1;
    if (m.is_uniform()) {
        for (int n = 1; n <= order; ++n) v[n] = Rational(1, n + 1);
    } else if (m.is_dirac()) {
        const Rational& x = std::get<DiracSpec>(m.v()).atom;
        for (int n = 1; n <= order; ++n) v[n] = v[n - 1] * x;
    } else if (m.is_beta()) {
        const auto& b = std::get<BetaSpec>(m.v());
        // E[Y^n] = prod_{i<n} (a+i)/(a+b+i)
        for (int n = 1; n <= order; ++n)
            v[n] = v[n - 1] * (b.a + (n - 1)) / (b.a + b.b + (n - 1));
    } else {
        throw std::invalid_argument("exact moments unavailable for grid densities");
    }
    return v;
}

std::vector<double> grid_moment_values(const GridFunction& g, int order) {
    std::vector<double> v(order + 1);
    // Normalise by the interpolant's actual mass so that m_0 = 1 exactly.
    double mass = g.integral_weighted([](double) { return 1.0; });
    v[0] = 1.0;
    for (int n = 1; n <= order; ++n)
        v[n] = g.integral_weighted([n](double x) { return std::pow(x, n); }) / mass;
    return v;
}

} // namespace

MomentVector moments(const MeasureSpec& m, int order, Arithmetic arithmetic) {
    if (order < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (arithmetic == Arithmetic::exact) {
        return MomentVector::exact(exact_moment_values(m, order));
    }
    if (m.is_grid()) return MomentVector::floating(grid_moment_values(m.grid(), order));
    auto ex = exact_moment_values(m, order);
    std::vector<double> f(ex.size());
    for (size_t i = 0; i < ex.size(); ++i) f[i] = to_double(ex[i]);
    return MomentVector::floating(std::move(f));
}

MomentVector moments(const MeasureSpec& m, int order) {
    return moments(m, order, m.is_exact() ? Arithmetic::exact : Arithmetic::floating);
}

MomentVector complement_moments(const MeasureSpec& m, int order) {
    MomentVector mom = moments(m, order);
    if (mom.arithmetic == Arithmetic::exact) {
        std::vector<Rational> c(order + 1);
        for (int n = 0; n <= order; ++n) {
            Rational s(0);
            for (int i = 0; i <= n; ++i) {
                Rational term = binomial<Rational>(n, i) * mom.rvals[i];
                s += (i % 2 == 0) ? term : -term;
            }
            c[n] = s;
        }
        return MomentVector::exact(std::move(c));
    }
    std::vector<double> c(order + 1);
    for (int n = 0; n <= order; ++n) {
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            double term = binomial<double>(n, i) * mom.fvals[i];
            s += (i % 2 == 0) ? term : -term;
        }
        c[n] = s;
    }
    // Complement moments of a valid measure are again a valid moment sequence;
    // tolerate the binomial roundoff.
    return MomentVector::floating(std::move(c), 1e-8);
}

MixedMoments<Rational> mixed_moments_exact(const MeasureSpec& m, int order) {
    return mixed_from_moments<Rational>(exact_moment_values(m, order), order);
}

MixedMoments<double> mixed_moments_float(const MeasureSpec& m, int order) {
    if (!m.is_grid()) {
        auto ex = mixed_moments_exact(m, order);
        MixedMoments<double> t;
        t.order = order;
        t.m.resize(ex.m.size());
        for (size_t j = 0; j < ex.m.size(); ++j) {
            t.m[j].resize(ex.m[j].size());
            for (size_t k = 0; k < ex.m[j].size(); ++k) t.m[j][k] = to_double(ex.m[j][k]);
        }
        return t;
    }
    // Direct quadrature: avoids the alternating binomial sums, which would
    // amplify the interpolation error of the grid by 2^order.
    const GridFunction& g = m.grid();
    double mass = g.integral_weighted([](double) { return 1.0; });
    MixedMoments<double> t;
    t.order = order;
    t.m.assign(order + 1, {});
    for (int j = 0; j <= order; ++j) {
        t.m[j].assign(order - j + 1, 0.0);
        for (int k = 0; j + k <= order; ++k) {
            if (j == 0 && k == 0) {
                t.m[0][0] = 1.0;
                continue;
            }
            t.m[j][k] = g.integral_weighted([j, k](double x) {
                            return std::pow(x, j) * std::pow(1.0 - x, k);
                        }) /
                        mass;
        }
    }
    return t;
}

namespace {

class GridSampler {
  public:
    explicit GridSampler(const GridFunction& g) : g_(g), cdf_(g.n_nodes(), 0.0) {
        for (int i = 1; i < g.n_nodes(); ++i)
            cdf_[i] = cdf_[i - 1] + 0.5 * g.spacing() * (g.values()[i - 1] + g.values()[i]);
        double total = cdf_.back();
        for (double& c : cdf_) c /= total;
    }

    double operator()(double u) const {
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        int i = static_cast<int>(it - cdf_.begin()) - 1;
        i = std::clamp(i, 0, g_.n_nodes() - 2);
        double du = u - cdf_[i];
        double h = g_.spacing();
        double fa = g_.values()[i], fb = g_.values()[i + 1];
        double slope = (fb - fa) / h;
        // Solve fa*t + slope*t^2/2 = du on [0,h].
        double t;
        if (std::fabs(slope) < 1e-300) {
            t = fa > 0 ? du / fa : 0.0;
        } else {
            double disc = fa * fa + 2.0 * slope * du;
            if (disc < 0) disc = 0;
            t = (-fa + std::sqrt(disc)) / slope;
        }
        t = std::clamp(t, 0.0, h);
        return g_.node(i) + t;
    }

  private:
    const GridFunction& g_;
    std::vector<double> cdf_;
};

constexpr std::int64_t kSampleChunk = 4096;

} // namespace

struct MeasureSampler::Impl {
    enum class Kind { uniform, beta, dirac, grid } kind;
    double a = 0, b = 0;  // beta parameters
    double atom = 0;      // dirac
    GridFunction density; // grid (owned copy; GridSampler keeps a reference)
    std::unique_ptr<GridSampler> grid;
};

MeasureSampler::MeasureSampler(const MeasureSpec& m) : impl_(std::make_unique<Impl>()) {
    if (m.is_uniform()) {
        impl_->kind = Impl::Kind::uniform;
    } else if (m.is_beta()) {
        impl_->kind = Impl::Kind::beta;
        impl_->a = to_double(std::get<BetaSpec>(m.v()).a);
        impl_->b = to_double(std::get<BetaSpec>(m.v()).b);
    } else if (m.is_dirac()) {
        impl_->kind = Impl::Kind::dirac;
        impl_->atom = to_double(std::get<DiracSpec>(m.v()).atom);
    } else {
        impl_->kind = Impl::Kind::grid;
        impl_->density = m.grid();
        impl_->grid = std::make_unique<GridSampler>(impl_->density);
    }
}

MeasureSampler::~MeasureSampler() = default;
MeasureSampler::MeasureSampler(MeasureSampler&&) noexcept = default;

double MeasureSampler::draw(Rng& rng) const {
    switch (impl_->kind) {
    case Impl::Kind::uniform: return rng.uniform();
    case Impl::Kind::beta: return rng.beta(impl_->a, impl_->b);
    case Impl::Kind::dirac: rng.uniform(); return impl_->atom;
    case Impl::Kind::grid: return (*impl_->grid)(rng.uniform());
    }
    return 0.0;
}

std::vector<double> sample(const MeasureSpec& m, std::int64_t count, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("sample count must be nonnegative");
    std::vector<double> out(static_cast<size_t>(count));
    MeasureSampler sampler(m);
    for (std::int64_t c = 0; c * kSampleChunk < count; ++c) {
        Rng rng(seed, static_cast<std::uint64_t>(c));
        std::int64_t hi = std::min(count, (c + 1) * kSampleChunk);
        for (std::int64_t i = c * kSampleChunk; i < hi; ++i) out[i] = sampler.draw(rng);
    }
    return out;
}

MeasureSpec symmetric_family_density(const GridFunction& f_half, int n_nodes) {
    if (f_half.lo() != 0.0 || std::fabs(f_half.hi() - 0.5) > 1e-15)
        throw std::invalid_argument("symmetric family input must live on [0,1/2]");
    bool all_zero = true;
    for (double v : f_half.values()) {
        if (v < 0.0) throw std::invalid_argument("symmetric family input must be nonnegative");
        if (v != 0.0) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("symmetric family input must not vanish identically");
    if (n_nodes < 3 || n_nodes % 2 == 0)
        throw std::invalid_argument("n_nodes must be odd so that 1/2 is a node");

    // Normaliser: integral of the extension equals int_0^{1/2} f(u)/(1-u) du.
    double norm = f_half.integral_weighted([](double u) { return 1.0 / (1.0 - u); });
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw std::invalid_argument("symmetric family normaliser is not finite and positive");

    std::vector<double> rho(n_nodes);
    double h = 1.0 / (n_nodes - 1);
    int mid = (n_nodes - 1) / 2;
    for (int i = 0; i <= mid; ++i) rho[i] = f_half(h * i) / norm;
    for (int i = mid + 1; i < n_nodes; ++i) {
        double x = h * i;
        rho[i] = (1.0 - x) / x * f_half(1.0 - x) / norm;
    }
    // The extension integrates to exactly 1, but its piecewise-linear
    // interpolant is off by O(h^2); rescale so the interpolant itself is a
    // probability density (a global factor, so the x rho(x) = (1-x) rho(1-x)
    // identity is untouched).
    GridFunction g(std::move(rho));
    double mass = g.integral();
    for (double& v : g.values()) v /= mass;
    return MeasureSpec::grid_density(std::move(g));
}

} // namespace bconv
