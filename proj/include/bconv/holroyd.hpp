#ifndef BCONV_HOLROYD_HPP
#define BCONV_HOLROYD_HPP

#include <array>
#include <string>
#include <vector>

#include "bconv/grid_function.hpp"
#include "bconv/rational.hpp"

namespace bconv {

/// 3x3 sign pattern on a square inside the ordered simplex, built from the
/// zero-mean steps phi = (+1,-1,0), psi = (0,+1,-1) as
/// sign(i,j) = phi(i) psi(j) - psi(i) phi(j). Every row sum, column sum and
/// anti-diagonal cell-set sum is zero, and sign(i,j) = -sign(j,i).
struct PerturbationPattern {
    double cx = 0.0, cy = 0.0; // square center
    double side = 0.0;
    double eta = 0.0;

    static int sign(int i, int j); // i = x-third, j = y-third, each in {0,1,2}
};

/// Piecewise-constant density on the triangle
/// Delta = {x1 >= x2 >= 1-x1-x2 >= 0}, carried on a uniform resolution x
/// resolution cell grid over [0,1]^2 with precomputed exact cell-triangle
/// intersection areas.
class SimplexDensity {
  public:
    explicit SimplexDensity(int resolution, double value_inside = 0.0);

    int resolution() const { return res_; }
    double cell_value(int i, int j) const { return values_[idx(i, j)]; }
    void set_cell_value(int i, int j, double v) { values_[idx(i, j)] = v; }
    double cell_area(int i, int j) const { return areas_[idx(i, j)]; }
    /// Vertices of cell (i,j) clipped to Delta; empty if disjoint.
    const std::vector<std::array<double, 2>>& cell_polygon(int i, int j) const {
        return polys_[idx(i, j)];
    }

    double integral() const;
    void write_csv(const std::string& path) const; // x1,x2,value at cell centers

  private:
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * res_ + i; }

    int res_ = 0;
    std::vector<double> values_;
    std::vector<double> areas_;
    std::vector<std::vector<std::array<double, 2>>> polys_;
};

struct HolroydPair {
    SimplexDensity f;       // uniform, value 12 = 1/area(Delta)
    SimplexDensity f_tilde; // f + eta * g
    PerturbationPattern g;
};

/// Uniform reference density plus the sign-pattern perturbation. The square
/// must sit inside Delta with margin >= side/10 and align with the cell grid;
/// eta must lie in (0, 12) to keep f + eta g positive.
HolroydPair build_reference(double cx = 11.0 / 18, double cy = 5.0 / 18, double side = 1.0 / 12,
                            double eta = 1.0, int resolution = 144);

enum class MarginalDirection { x1, x2, sum };

/// Exact line-integral marginal of the piecewise-constant density: vertical
/// lines (x1), horizontal lines (x2), slope -1 lines (x1 + x2).
GridFunction marginal(const SimplexDensity& d, MarginalDirection dir, int resolution = 721);

/// CDF of Z = eps1 x1 + eps2 x2 + eps3 (1-x1-x2), enumerating all 8 mark
/// patterns with Bernoulli(p) weights; per-cell exact polygon clipping.
GridFunction z_distribution(const SimplexDensity& d, const Rational& p, int resolution = 721);

/// L1 distance of two densities on the same grid.
double joint_distance(const SimplexDensity& a, const SimplexDensity& b);

} // namespace bconv

#endif
