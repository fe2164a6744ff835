#ifndef BCONV_MEASURES_HPP
#define BCONV_MEASURES_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bconv/grid_function.hpp"
#include "bconv/rational.hpp"

namespace bconv {

enum class Arithmetic { exact, floating };

/// Moment sequence (m_0,...,m_N) of a [0,1]-valued random variable.
/// Construction validates m_0 = 1, monotonicity and the Hausdorff
/// (complete monotonicity) condition.
struct MomentVector {
    Arithmetic arithmetic = Arithmetic::exact;
    std::vector<Rational> rvals; // used when arithmetic == exact
    std::vector<double> fvals;   // used when arithmetic == floating

    int order() const {
        return static_cast<int>((arithmetic == Arithmetic::exact ? rvals.size() : fvals.size())) -
               1;
    }
    double as_double(int n) const {
        return arithmetic == Arithmetic::exact ? to_double(rvals[n]) : fvals[n];
    }

    static MomentVector exact(std::vector<Rational> vals);
    static MomentVector floating(std::vector<double> vals, double tol = 1e-10);
    MomentVector to_floating() const;
};

struct BetaSpec {
    Rational a, b; // both > 0
};
struct DiracSpec {
    Rational atom; // in (0,1]
};
struct UniformSpec {};
struct GridDensitySpec {
    GridFunction density; // on [0,1], mass 1, nonnegative at nodes
};

/// Probability measure on [0,1] with no atom at 0.
class MeasureSpec {
  public:
    using Variant = std::variant<BetaSpec, DiracSpec, UniformSpec, GridDensitySpec>;

    static MeasureSpec beta(const Rational& a, const Rational& b);
    static MeasureSpec dirac(const Rational& atom);
    static MeasureSpec uniform();
    static MeasureSpec grid_density(GridFunction density);

    /// CLI grammar: beta:A,B | dirac:X | uniform | grid:<csv> | symfam:<csv>.
    static MeasureSpec parse(const std::string& spec);

    const Variant& v() const { return v_; }
    bool is_beta() const { return std::holds_alternative<BetaSpec>(v_); }
    bool is_dirac() const { return std::holds_alternative<DiracSpec>(v_); }
    bool is_uniform() const { return std::holds_alternative<UniformSpec>(v_); }
    bool is_grid() const { return std::holds_alternative<GridDensitySpec>(v_); }

    /// True when exact-rational moments are available.
    bool is_exact() const { return !is_grid(); }

    const GridFunction& grid() const { return std::get<GridDensitySpec>(v_).density; }

    std::string to_string() const;

  private:
    explicit MeasureSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// E[Y^n] for n = 0..order.
MomentVector moments(const MeasureSpec& m, int order, Arithmetic arithmetic);
MomentVector moments(const MeasureSpec& m, int order); // exact when available

/// E[(1-Y)^n], expanded binomially from moments in the same arithmetic.
MomentVector complement_moments(const MeasureSpec& m, int order);

/// Table m[j][k] = E[Y^j (1-Y)^k] for j+k <= order.
template <class T> struct MixedMoments {
    int order = 0;
    std::vector<std::vector<T>> m; // m[j][k], valid for j+k <= order

    const T& at(int j, int k) const { return m[j][k]; }
};

MixedMoments<Rational> mixed_moments_exact(const MeasureSpec& m, int order);
MixedMoments<double> mixed_moments_float(const MeasureSpec& m, int order);

/// Binomial expansion of a plain moment sequence into the mixed table.
template <class T>
MixedMoments<T> mixed_from_moments(const std::vector<T>& mom, int order) {
    MixedMoments<T> t;
    t.order = order;
    t.m.assign(order + 1, {});
    for (int j = 0; j <= order; ++j) {
        t.m[j].assign(order - j + 1, T(0));
        for (int k = 0; k + j <= order; ++k) {
            T s(0);
            for (int i = 0; i <= k; ++i) {
                T term = binomial<T>(k, i) * mom[j + i];
                s += (i % 2 == 0) ? term : -term;
            }
            t.m[j][k] = s;
        }
    }
    return t;
}

class Rng;

/// Draw-by-draw sampler; grid densities are inverted through the
/// piecewise-linear CDF. Immutable after construction, shareable across
/// workers (each worker brings its own Rng).
class MeasureSampler {
  public:
    explicit MeasureSampler(const MeasureSpec& m);
    ~MeasureSampler();
    MeasureSampler(MeasureSampler&&) noexcept;

    double draw(Rng& rng) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// i.i.d. draws; deterministic per (seed, chunk) so parallel samplers
/// reproduce the serial sequence.
std::vector<double> sample(const MeasureSpec& m, std::int64_t count, std::uint64_t seed);

/// Extends f on [0,1/2] by f(x) = (1-x)/x * f(1-x) and normalises; the result
/// satisfies x rho(x) = (1-x) rho(1-x) at every node. n_nodes must be odd so
/// that x = 1/2 is a node.
MeasureSpec symmetric_family_density(const GridFunction& f_half, int n_nodes = (1 << 19) | 1);

} // namespace bconv

#endif
