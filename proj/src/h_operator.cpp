#include "bconv/h_operator.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bconv/moment_engine.hpp" // numeric_error

namespace bconv {

namespace {

constexpr double kGl5X[5] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                             0.5384693101056830910, 0.9061798459386639928};
constexpr double kGl5W[5] = {0.2369268850561890875, 0.4786286704993664831, 0.5688888888888888889,
                             0.4786286704993664831, 0.2369268850561890875};

// int_0^x q((x-u)/(1-u)) rho(u)/(1-u) du over rho's cells (split at x).
double kernel_integral(const GridFunction& rho, const ConvolutionDensity& q, double x) {
    if (x <= 0.0) return 0.0;
    int n_cells = rho.n_nodes() - 1;
    KahanSum s;
    for (int i = 0; i < n_cells; ++i) {
        double a = rho.node(i);
        if (a >= x) break;
        double b = std::min(rho.node(i + 1), x);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double cell = 0.0;
        for (int k = 0; k < 5; ++k) {
            double u = mid + half * kGl5X[k];
            double om = 1.0 - u;
            cell += kGl5W[k] * q((x - u) / om) * rho(u) / om;
        }
        s.add(cell * half);
    }
    return s.value();
}

} // namespace

ConvolutionDensity::ConvolutionDensity(GridFunction q) : q_(std::move(q)) {
    if (q_.lo() != 0.0 || q_.hi() != 1.0)
        throw std::invalid_argument("convolution density must live on [0,1]");
    int n = q_.n_nodes();
    for (int i = 1; i + 1 < n; ++i)
        if (!(q_.values()[i] > 0.0))
            throw std::invalid_argument("convolution density must be positive on the interior");
    for (int i = 0; i < n; ++i)
        if (std::fabs(q_.values()[i] - q_.values()[n - 1 - i]) > 1e-10)
            throw std::invalid_argument("convolution density must satisfy q(x) = q(1-x)");
    if (std::fabs(q_.integral() - 1.0) > 1e-10)
        throw std::invalid_argument("convolution density must have unit mass");
}

GridFunction apply_H(const GridFunction& rho, const ConvolutionDensity& q, int out_nodes) {
    if (rho.lo() != 0.0 || rho.hi() != 1.0)
        throw std::invalid_argument("rho must live on [0,1]");
    for (double v : rho.values())
        if (v < 0.0) throw std::invalid_argument("rho must be nonnegative");
    std::vector<double> out(out_nodes, 0.0);
    double hs = 1.0 / (out_nodes - 1);

    unsigned n_workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < n_workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (int i = static_cast<int>(w) + 1; i < out_nodes; i += static_cast<int>(n_workers)) {
                double x = hs * i;
                double qx = q(x);
                double num = kernel_integral(rho, q, x);
                out[i] = qx > 0.0 ? num / qx : std::numeric_limits<double>::infinity();
            }
        }));
    }
    for (auto& f : futs) f.get();

    for (int i = 1; i < out_nodes; ++i)
        if (!std::isfinite(out[i]))
            throw numeric_error("H-operator quadrature diverged at x = " + std::to_string(hs * i) +
                                "; rho is outside the admissible cone for this q");
    return GridFunction(std::move(out));
}

CharacterizationReport check_characterization(const GridFunction& rho, const ConvolutionDensity& q,
                                              double tol, int eval_nodes) {
    GridFunction h = apply_H(rho, q, eval_nodes);
    CharacterizationReport r;
    int n = h.n_nodes();
    for (int i = 1; i + 1 < n; ++i) {
        double dev = std::fabs(h.values()[i] + h.values()[n - 1 - i] - 2.0);
        if (dev > r.max_deviation) {
            r.max_deviation = dev;
            r.argmax_x = h.node(i);
        }
    }
    r.pass = r.max_deviation <= tol;
    return r;
}

} // namespace bconv
