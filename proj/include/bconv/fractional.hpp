#ifndef BCONV_FRACTIONAL_HPP
#define BCONV_FRACTIONAL_HPP

#include <vector>

#include "bconv/grid_function.hpp"

namespace bconv {

/// alpha = [alpha] + {alpha} with [alpha] integer >= 0 and {alpha} in [0,1).
struct FractionalOrder {
    double alpha = 0.0;
    int integer_part = 0;
    double fractional_part = 0.0;

    explicit FractionalOrder(double a);
};

struct PowerTerm {
    double coeff = 0.0;
    double exponent = 0.0; // > -1 so the term is integrable at 0
};

/// Finite sum of real powers c * x^e on [0,1]; the exact carrier for the
/// x^{theta/2}-type expressions of the fractional construction.
class PowerSeriesFn {
  public:
    PowerSeriesFn() = default;
    explicit PowerSeriesFn(std::vector<PowerTerm> terms);

    static PowerSeriesFn monomial(double coeff, double exponent);
    static PowerSeriesFn polynomial(const std::vector<double>& coeffs); // coeffs[k] * x^k

    const std::vector<PowerTerm>& terms() const { return terms_; }
    double operator()(double x) const;

    PowerSeriesFn scaled(double c) const;
    PowerSeriesFn plus(const PowerSeriesFn& other) const;

    GridFunction tabulate(int n_nodes) const;
    double max_abs_diff(const PowerSeriesFn& other, int probe_nodes = 1025) const;

  private:
    std::vector<PowerTerm> terms_;
};

/// Riemann-Liouville I^alpha by the power rule:
/// I^alpha[x^b] = Gamma(b+1)/Gamma(b+1+alpha) x^{b+alpha}.
PowerSeriesFn frac_integral(const PowerSeriesFn& f, double alpha);

/// Riemann-Liouville D^alpha by the power rule:
/// D^alpha[x^b] = Gamma(b+1)/Gamma(b+1-alpha) x^{b-alpha}; terms whose
/// Gamma denominator hits a pole drop out (D^alpha annihilates them).
/// Throws if a surviving term would have exponent <= -1.
PowerSeriesFn frac_derivative(const PowerSeriesFn& f, double alpha);

/// Grid I^alpha by product integration: the singular kernel (x-u)^{alpha-1}
/// is integrated exactly against the piecewise-linear interpolant (L1 scheme).
GridFunction frac_integral(const GridFunction& f, double alpha);

/// Grid D^alpha through the initial-value decomposition
///   D^alpha f = sum_{k<m} f^(k)(0) x^{k-alpha}/Gamma(k+1-alpha)
///              + I^{m-alpha}[f^(m)],   m = [alpha]+1,
/// with finite-difference derivatives. When validate is set, the result is
/// recomputed on the half grid and a disagreement beyond what a convergent
/// scheme allows raises numeric_error.
GridFunction frac_derivative(const GridFunction& f, double alpha, bool validate = true);

} // namespace bconv

#endif
