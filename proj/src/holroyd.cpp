#include "bconv/holroyd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>
#include <thread>

namespace bconv {

namespace {

using Point = std::array<double, 2>;
using Polygon = std::vector<Point>;

// Keep the part of poly with a*x + b*y + c >= 0 (Sutherland-Hodgman).
Polygon clip_halfplane(const Polygon& poly, double a, double b, double c) {
    Polygon out;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        double fp = a * p[0] + b * p[1] + c;
        double fq = a * q[0] + b * q[1] + c;
        if (fp >= 0.0) out.push_back(p);
        if ((fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0)) {
            double t = fp / (fp - fq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    if (out.size() < 3) out.clear();
    return out;
}

double polygon_area(const Polygon& poly) {
    double s = 0.0;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::fabs(s);
}

// Delta = {x >= y} cap {x + 2y >= 1} cap {1 - x - y >= 0}.
Polygon clip_to_delta(Polygon poly) {
    poly = clip_halfplane(poly, 1.0, -1.0, 0.0);
    if (poly.empty()) return poly;
    poly = clip_halfplane(poly, 1.0, 2.0, -1.0);
    if (poly.empty()) return poly;
    return clip_halfplane(poly, -1.0, -1.0, 1.0);
}

} // namespace

int PerturbationPattern::sign(int i, int j) {
    static constexpr int phi[3] = {1, -1, 0};
    static constexpr int psi[3] = {0, 1, -1};
    if (i < 0 || i > 2 || j < 0 || j > 2) throw std::invalid_argument("pattern index out of range");
    return phi[i] * psi[j] - psi[i] * phi[j];
}

SimplexDensity::SimplexDensity(int resolution, double value_inside) : res_(resolution) {
    if (resolution < 3) throw std::invalid_argument("resolution must be at least 3");
    size_t n = static_cast<size_t>(res_) * res_;
    values_.assign(n, 0.0);
    areas_.assign(n, 0.0);
    polys_.assign(n, {});
    double h = 1.0 / res_;
    for (int j = 0; j < res_; ++j) {
        for (int i = 0; i < res_; ++i) {
            Polygon cell{{i * h, j * h}, {(i + 1) * h, j * h}, {(i + 1) * h, (j + 1) * h},
                         {i * h, (j + 1) * h}};
            Polygon inside = clip_to_delta(std::move(cell));
            double area = polygon_area(inside);
            if (area > 0.0) {
                areas_[idx(i, j)] = area;
                polys_[idx(i, j)] = std::move(inside);
                values_[idx(i, j)] = value_inside;
            }
        }
    }
}

double SimplexDensity::integral() const {
    KahanSum s;
    for (size_t k = 0; k < values_.size(); ++k) s.add(values_[k] * areas_[k]);
    return s.value();
}

void SimplexDensity::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    out << "x1,x2,value\n";
    double h = 1.0 / res_;
    for (int j = 0; j < res_; ++j)
        for (int i = 0; i < res_; ++i)
            if (cell_area(i, j) > 0.0)
                out << (i + 0.5) * h << "," << (j + 0.5) * h << "," << cell_value(i, j) << "\n";
}

HolroydPair build_reference(double cx, double cy, double side, double eta, int resolution) {
    if (!(side > 0.0)) throw std::invalid_argument("square side must be positive");
    if (!(eta > 0.0) || eta >= 12.0)
        throw std::invalid_argument("eta must lie in (0, 12) to keep f + eta g positive");

    // Margin >= side/10 from each edge of Delta, at every corner of the square.
    double margin = side / 10.0;
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
            double x = cx + sx * side / 2.0, y = cy + sy * side / 2.0;
            double d1 = (x - y) / std::sqrt(2.0);
            double d2 = (x + 2.0 * y - 1.0) / std::sqrt(5.0);
            double d3 = (1.0 - x - y) / std::sqrt(2.0);
            if (d1 < margin || d2 < margin || d3 < margin)
                throw std::invalid_argument("perturbation square is not inside Delta with "
                                            "margin side/10");
        }
    }

    // Pattern-cell boundaries must land on grid lines, otherwise the exact
    // marginal cancellation is lost.
    auto aligned = [resolution](double v) {
        double s = v * resolution;
        return std::fabs(s - std::round(s)) < 1e-9;
    };
    for (int k = 0; k <= 3; ++k) {
        if (!aligned(cx - side / 2.0 + k * side / 3.0) ||
            !aligned(cy - side / 2.0 + k * side / 3.0))
            throw std::invalid_argument("resolution does not align with the perturbation "
                                        "square's thirds (use a multiple of 72 for the default "
                                        "square)");
    }

    HolroydPair pair{SimplexDensity(resolution, 12.0), SimplexDensity(resolution, 12.0),
                     PerturbationPattern{cx, cy, side, eta}};

    double full = 1.0 / (static_cast<double>(resolution) * resolution);
    for (int pi = 0; pi < 3; ++pi) {
        for (int pj = 0; pj < 3; ++pj) {
            int s = PerturbationPattern::sign(pi, pj);
            if (s == 0) continue;
            int i0 = static_cast<int>(std::round((cx - side / 2.0 + pi * side / 3.0) * resolution));
            int j0 = static_cast<int>(std::round((cy - side / 2.0 + pj * side / 3.0) * resolution));
            int span = static_cast<int>(std::round(side / 3.0 * resolution));
            for (int i = i0; i < i0 + span; ++i) {
                for (int j = j0; j < j0 + span; ++j) {
                    if (std::fabs(pair.f_tilde.cell_area(i, j) - full) > 1e-15)
                        throw std::logic_error("pattern cell not fully inside Delta");
                    pair.f_tilde.set_cell_value(i, j, 12.0 + eta * s);
                }
            }
        }
    }
    return pair;
}

GridFunction marginal(const SimplexDensity& d, MarginalDirection dir, int resolution) {
    int R = d.resolution();
    double h = 1.0 / R;
    std::vector<double> out(resolution, 0.0);
    double step = 1.0 / (resolution - 1);

    auto cell_of = [R](double t) { return std::clamp(static_cast<int>(t * R), 0, R - 1); };

    for (int k = 0; k < resolution; ++k) {
        double t = step * k;
        KahanSum s;
        if (dir == MarginalDirection::x1) {
            double ylo = (1.0 - t) / 2.0, yhi = std::min(t, 1.0 - t);
            if (yhi > ylo) {
                int i = cell_of(t);
                for (int j = cell_of(ylo); j <= cell_of(yhi); ++j) {
                    double len = std::min(yhi, (j + 1) * h) - std::max(ylo, j * h);
                    if (len > 0.0) s.add(d.cell_value(i, j) * len);
                }
            }
        } else if (dir == MarginalDirection::x2) {
            double xlo = std::max(t, 1.0 - 2.0 * t), xhi = 1.0 - t;
            if (xhi > xlo) {
                int j = cell_of(t);
                for (int i = cell_of(xlo); i <= cell_of(xhi); ++i) {
                    double len = std::min(xhi, (i + 1) * h) - std::max(xlo, i * h);
                    if (len > 0.0) s.add(d.cell_value(i, j) * len);
                }
            }
        } else { // density of X1 + X2 at t: integrate over x along the line y = t - x
            double xlo = t / 2.0, xhi = 2.0 * t - 1.0;
            if (xhi > xlo) {
                for (int i = cell_of(xlo); i <= cell_of(xhi); ++i) {
                    double a = std::max(xlo, i * h), b = std::min(xhi, (i + 1) * h);
                    if (b <= a) continue;
                    // y = t - x spans (t - b, t - a); split at y-cell lines
                    for (int j = cell_of(t - b); j <= cell_of(t - a); ++j) {
                        double aa = std::max(a, t - (j + 1) * h), bb = std::min(b, t - j * h);
                        if (bb > aa) s.add(d.cell_value(i, j) * (bb - aa));
                    }
                }
            }
        }
        out[k] = s.value();
    }
    return GridFunction(std::move(out));
}

GridFunction z_distribution(const SimplexDensity& d, const Rational& p, int resolution) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("p must lie in (0,1)");
    double pd = to_double(p);
    int R = d.resolution();
    double h = 1.0 / R;

    // Nonempty cells once, with their Delta-clipped polygons.
    struct Cell {
        int i, j;
        double mass; // value * area
        double value;
    };
    std::vector<Cell> cells;
    for (int j = 0; j < R; ++j)
        for (int i = 0; i < R; ++i)
            if (d.cell_area(i, j) > 0.0)
                cells.push_back({i, j, d.cell_value(i, j) * d.cell_area(i, j), d.cell_value(i, j)});

    std::vector<double> out(resolution, 0.0);
    double step = 1.0 / (resolution - 1);

    unsigned n_workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < n_workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (int k = static_cast<int>(w); k < resolution; k += static_cast<int>(n_workers)) {
                double z = step * k;
                KahanSum cdf;
                for (int e1 = 0; e1 <= 1; ++e1) {
                    for (int e2 = 0; e2 <= 1; ++e2) {
                        for (int e3 = 0; e3 <= 1; ++e3) {
                            int ones = e1 + e2 + e3;
                            double weight = std::pow(pd, ones) * std::pow(1.0 - pd, 3 - ones);
                            // Z = c0 + ax + by <= z  <=>  -ax - by + (z - c0) >= 0
                            double c0 = e3, a = e1 - e3, b = e2 - e3;
                            for (const Cell& c : cells) {
                                // range of Z over the cell's bounding square
                                double ax0 = a * (c.i * h), ax1 = a * ((c.i + 1) * h);
                                double by0 = b * (c.j * h), by1 = b * ((c.j + 1) * h);
                                double lo = c0 + std::min(ax0, ax1) + std::min(by0, by1);
                                double hi = c0 + std::max(ax0, ax1) + std::max(by0, by1);
                                if (hi <= z) {
                                    cdf.add(weight * c.mass);
                                } else if (lo < z) {
                                    Polygon part = clip_halfplane(d.cell_polygon(c.i, c.j), -a, -b,
                                                                  z - c0);
                                    if (!part.empty())
                                        cdf.add(weight * c.value * polygon_area(part));
                                }
                            }
                        }
                    }
                }
                out[k] = std::min(1.0, cdf.value());
            }
        }));
    }
    for (auto& f : futs) f.get();
    return GridFunction(std::move(out));
}

double joint_distance(const SimplexDensity& a, const SimplexDensity& b) {
    if (a.resolution() != b.resolution())
        throw std::invalid_argument("joint_distance needs equal resolutions");
    KahanSum s;
    for (int j = 0; j < a.resolution(); ++j)
        for (int i = 0; i < a.resolution(); ++i)
            s.add(std::fabs(a.cell_value(i, j) - b.cell_value(i, j)) * a.cell_area(i, j));
    return s.value();
}

} // namespace bconv
