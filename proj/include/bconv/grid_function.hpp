#ifndef BCONV_GRID_FUNCTION_HPP
#define BCONV_GRID_FUNCTION_HPP

#include <functional>
#include <string>
#include <vector>

namespace bconv {

/// Real function tabulated at uniform nodes of [lo, hi] with piecewise-linear
/// interpolation between nodes. The default domain is [0,1]; the symmetric
/// family generator uses [0, 1/2].
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(std::vector<double> values, double lo = 0.0, double hi = 1.0);

    static GridFunction tabulate(const std::function<double(double)>& f, int n_nodes,
                                 double lo = 0.0, double hi = 1.0);

    int n_nodes() const { return static_cast<int>(values_.size()); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double spacing() const { return h_; }
    double node(int i) const { return lo_ + h_ * i; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double operator()(double x) const;

    GridFunction resample(int n_nodes) const;

    /// Composite trapezoid over the full domain (exact for the interpolant).
    double integral() const;

    /// Integral of w(x) * interpolant(x); per-cell 5-point Gauss-Legendre,
    /// compensated summation. Exact to rounding for polynomial w up to
    /// degree 8 on each cell.
    double integral_weighted(const std::function<double(double)>& w) const;

    double max_abs_diff(const GridFunction& other) const;

    void write_csv(const std::string& path, const std::string& header = "x,value") const;
    static GridFunction read_csv(const std::string& path);

  private:
    std::vector<double> values_;
    double lo_ = 0.0;
    double hi_ = 1.0;
    double h_ = 0.0;
};

// Kahan-compensated accumulator.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// 5-point Gauss-Legendre on [a,b].
double gauss5(const std::function<double(double)>& f, double a, double b);

} // namespace bconv

#endif
