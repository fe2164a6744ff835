#ifndef BCONV_H_OPERATOR_HPP
#define BCONV_H_OPERATOR_HPP

#include "bconv/grid_function.hpp"

namespace bconv {

/// Symmetric convolution density q on [0,1]: q(x) = q(1-x), q > 0 on the
/// interior, unit mass. Bounded densities only (Beta(theta/2,theta/2) targets
/// with theta >= 2); unbounded q defeats the quadrature error model here.
class ConvolutionDensity {
  public:
    explicit ConvolutionDensity(GridFunction q);

    const GridFunction& q() const { return q_; }
    double operator()(double x) const { return q_(x); }

  private:
    GridFunction q_;
};

/// [H rho](x) = (1/q(x)) int_0^x q((x-u)/(1-u)) rho(u)/(1-u) du, evaluated at
/// out_nodes uniform nodes by per-cell Gauss quadrature over rho's grid.
/// [H rho](0) = 0. Throws numeric_error if the quadrature diverges (rho
/// outside the admissible cone).
GridFunction apply_H(const GridFunction& rho, const ConvolutionDensity& q,
                     int out_nodes = (1 << 12) + 1);

struct CharacterizationReport {
    double max_deviation = 0.0; // of [H rho](x) + [H rho](1-x) from 2
    double argmax_x = 0.0;
    bool pass = false;
};

/// Symmetry characterisation: rho is a probability density whose residual
/// allocation has Bernoulli(1/2) convolution density q iff the deviation
/// vanishes. Tested at interior nodes only (interpolation degenerates at the
/// endpoints).
CharacterizationReport check_characterization(const GridFunction& rho,
                                              const ConvolutionDensity& q, double tol,
                                              int eval_nodes = (1 << 12) + 1);

} // namespace bconv

#endif
