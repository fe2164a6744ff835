#include "bconv/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bconv {

namespace {
// Nodes/weights for 5-point Gauss-Legendre on [-1,1].
constexpr double kGl5X[5] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                             0.5384693101056830910, 0.9061798459386639928};
constexpr double kGl5W[5] = {0.2369268850561890875, 0.4786286704993664831, 0.5688888888888888889,
                             0.4786286704993664831, 0.2369268850561890875};
} // namespace

double gauss5(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kGl5W[i] * f(mid + half * kGl5X[i]);
    return s * half;
}

GridFunction::GridFunction(std::vector<double> values, double lo, double hi)
    : values_(std::move(values)), lo_(lo), hi_(hi) {
    if (values_.size() < 2) throw std::invalid_argument("GridFunction needs at least 2 nodes");
    if (!(hi_ > lo_)) throw std::invalid_argument("GridFunction domain is empty");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction value not finite");
    h_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

GridFunction GridFunction::tabulate(const std::function<double(double)>& f, int n_nodes,
                                    double lo, double hi) {
    if (n_nodes < 2) throw std::invalid_argument("GridFunction needs at least 2 nodes");
    std::vector<double> v(n_nodes);
    double h = (hi - lo) / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i) v[i] = f(lo + h * i);
    return GridFunction(std::move(v), lo, hi);
}

double GridFunction::operator()(double x) const {
    if (x <= lo_) return values_.front();
    if (x >= hi_) return values_.back();
    double t = (x - lo_) / h_;
    int i = static_cast<int>(t);
    if (i >= n_nodes() - 1) i = n_nodes() - 2;
    double frac = t - i;
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

GridFunction GridFunction::resample(int n_nodes) const {
    return tabulate([this](double x) { return (*this)(x); }, n_nodes, lo_, hi_);
}

double GridFunction::integral() const {
    KahanSum s;
    for (int i = 0; i + 1 < n_nodes(); ++i) s.add(0.5 * h_ * (values_[i] + values_[i + 1]));
    return s.value();
}

double GridFunction::integral_weighted(const std::function<double(double)>& w) const {
    KahanSum s;
    for (int i = 0; i + 1 < n_nodes(); ++i) {
        double a = node(i), b = node(i + 1);
        double fa = values_[i], fb = values_[i + 1];
        double slope = (fb - fa) / h_;
        double mid = 0.5 * (a + b), half = 0.5 * h_;
        double cell = 0.0;
        for (int k = 0; k < 5; ++k) {
            double x = mid + half * kGl5X[k];
            cell += kGl5W[k] * w(x) * (fa + slope * (x - a));
        }
        s.add(cell * half);
    }
    return s.value();
}

double GridFunction::max_abs_diff(const GridFunction& other) const {
    if (other.n_nodes() != n_nodes() || other.lo_ != lo_ || other.hi_ != hi_)
        throw std::invalid_argument("grid mismatch in max_abs_diff");
    double m = 0.0;
    for (int i = 0; i < n_nodes(); ++i) m = std::max(m, std::fabs(values_[i] - other.values_[i]));
    return m;
}

void GridFunction::write_csv(const std::string& path, const std::string& header) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << header << "\n";
    out.precision(17);
    for (int i = 0; i < n_nodes(); ++i) out << node(i) << "," << values_[i] << "\n";
}

GridFunction GridFunction::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::vector<double> xs, vs;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            // Skip a header row if the first field is not numeric.
            char* end = nullptr;
            std::strtod(line.c_str(), &end);
            if (end == line.c_str()) continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw std::runtime_error("malformed CSV row: " + line);
        xs.push_back(std::stod(a));
        vs.push_back(std::stod(b));
    }
    if (xs.size() < 2) throw std::runtime_error("CSV has fewer than 2 rows: " + path);
    // Verify uniform spacing.
    double h = xs[1] - xs[0];
    for (size_t i = 1; i < xs.size(); ++i) {
        double expect = xs[0] + h * static_cast<double>(i);
        if (std::fabs(xs[i] - expect) > 1e-9 * std::max(1.0, std::fabs(expect)))
            throw std::runtime_error("CSV nodes are not uniformly spaced: " + path);
    }
    return GridFunction(std::move(vs), xs.front(), xs.back());
}

} // namespace bconv
