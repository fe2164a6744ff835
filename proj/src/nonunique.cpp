#include "bconv/nonunique.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "bconv/moment_engine.hpp"
#include "bconv/residual_allocation.hpp"

namespace bconv {

PerturbationFn::PerturbationFn(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty() || coeffs_[0] != 0.0)
        throw std::invalid_argument("perturbation must have zero constant term (eps = O(x) at 0)");
    // Antisymmetry about 1/2: the coefficients of eps(1-x) must be the
    // negatives of those of eps(x).
    size_t deg = coeffs_.size();
    double scale = 0.0;
    for (double c : coeffs_) scale = std::max(scale, std::fabs(c));
    if (scale == 0.0) return; // identically zero is fine
    std::vector<double> reflected(deg, 0.0);
    for (size_t k = 0; k < deg; ++k) {
        // c_k (1-x)^k = c_k sum_j C(k,j) (-x)^j
        for (size_t j = 0; j <= k; ++j) {
            double term = coeffs_[k] * binomial<double>(static_cast<int>(k), static_cast<int>(j));
            reflected[j] += (j % 2 == 0) ? term : -term;
        }
    }
    for (size_t j = 0; j < deg; ++j)
        if (std::fabs(coeffs_[j] + reflected[j]) > 1e-12 * scale)
            throw std::invalid_argument("perturbation is not antisymmetric about 1/2");
}

PerturbationFn PerturbationFn::cubic(double delta) {
    // delta * x(1-x)(1-2x) = delta (x - 3x^2 + 2x^3)
    return PerturbationFn({0.0, delta, -3.0 * delta, 2.0 * delta});
}

double PerturbationFn::operator()(double x) const {
    double s = 0.0;
    for (size_t k = coeffs_.size(); k-- > 0;) s = s * x + coeffs_[k];
    return s;
}

double PerturbationFn::amplitude() const {
    double a = 0.0;
    for (double c : coeffs_) a = std::max(a, std::fabs(c));
    return a;
}

PowerSeriesFn PerturbationFn::as_power_series() const {
    return PowerSeriesFn::polynomial(coeffs_);
}

void ConstructedMeasure::write_metadata_json(const std::string& path) const {
    nlohmann::json j;
    j["theta"] = theta;
    j["provenance"] = provenance == Provenance::gem2_family ? "gem2-family" : "fractional";
    j["delta"] = delta;
    j["n_nodes"] = rho().n_nodes();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

ConstructedMeasure construct_gem2(const GridFunction& f_half, int n_nodes) {
    MeasureSpec nu = symmetric_family_density(f_half, n_nodes);
    const GridFunction& rho = nu.grid();

    // Admissibility hypothesis: int rho(u)/(1-u) du < infinity. The extension has
    // rho(1) = 0, so the integrand is bounded; quadrature convergence under
    // grid halving is the membership proxy.
    auto weight = [](double u) { return u < 1.0 ? 1.0 / (1.0 - u) : 0.0; };
    double fine = rho.integral_weighted(weight);
    double coarse = rho.resample((n_nodes - 1) / 2 + 1).integral_weighted(weight);
    if (!std::isfinite(fine) || std::fabs(fine - coarse) > 1e-4 * (1.0 + std::fabs(fine)))
        throw numeric_error("int rho(u)/(1-u) du does not converge: extension is inadmissible");

    std::vector<double> phi(rho.values());
    int n = rho.n_nodes();
    for (int i = 0; i + 1 < n; ++i) phi[i] /= 1.0 - rho.node(i);
    phi[n - 1] = rho.values()[0]; // limit of rho(x)/(1-x) = f(0)/Norm at x = 1

    ConstructedMeasure cm{std::move(nu), GridFunction(std::move(phi)), 2.0,
                          Provenance::gem2_family, 0.0};
    return cm;
}

namespace {

// phi(x) = (2/Gamma(theta/2)) D^{theta/2} [ x^{theta/2} + x^{theta/2-1} eps(x) ],
// a plain polynomial: the powers x^{theta/2-1+k} map to x^{k-1}.
PowerSeriesFn phi_series(double theta, const PerturbationFn& eps) {
    std::vector<PowerTerm> bracket_terms{{1.0, theta / 2.0}};
    const auto& c = eps.coeffs();
    for (size_t k = 1; k < c.size(); ++k)
        if (c[k] != 0.0) bracket_terms.push_back({c[k], theta / 2.0 - 1.0 + k});
    PowerSeriesFn bracket(std::move(bracket_terms));

    PowerSeriesFn phi =
        frac_derivative(bracket, theta / 2.0).scaled(2.0 / std::tgamma(theta / 2.0));

    // Eq.-level verification: applying I^{theta/2} must return the bracket.
    PowerSeriesFn back =
        frac_integral(phi.scaled(std::tgamma(theta / 2.0) / 2.0), theta / 2.0);
    if (back.max_abs_diff(bracket) > 1e-8)
        throw numeric_error("fractional roundtrip I^{theta/2} D^{theta/2} missed the target");
    return phi;
}

} // namespace

ConstructedMeasure construct_fractional(double theta, const PerturbationFn& eps, int n_nodes) {
    if (!(theta >= 1.0))
        throw std::invalid_argument("fractional constructor requires theta >= 1 (below that the "
                                    "power rule leaves exponents <= -1)");
    PowerSeriesFn phi = phi_series(theta, eps);

    GridFunction phi_grid = phi.tabulate(n_nodes);
    double phi_min = 0.0;
    for (double v : phi_grid.values()) phi_min = std::min(phi_min, v);
    if (phi_min < 0.0)
        throw std::invalid_argument("perturbation too large: phi drops to " +
                                    std::to_string(phi_min));

    // Analytic mass of rho = (1-x)^{theta-1} phi(x): phi has integer exponents
    // j, and int x^j (1-x)^{theta-1} dx = B(j+1, theta).
    double mass = 0.0;
    for (const auto& t : phi.terms()) {
        double j = t.exponent;
        mass += t.coeff * std::tgamma(j + 1.0) * std::tgamma(theta) / std::tgamma(j + 1.0 + theta);
    }
    if (std::fabs(mass - 1.0) > 1e-8)
        throw numeric_error("constructed rho has mass " + std::to_string(mass) +
                            "; the perturbation violates the construction's hypotheses");

    std::vector<double> rho(n_nodes);
    double h = 1.0 / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i)
        rho[i] = std::pow(1.0 - h * i, theta - 1.0) * phi_grid.values()[i];

    // rho integrates to 1 analytically (checked above), but the trapezoid
    // mass of the tabulated interpolant is off by O(h^2); rescale so the
    // carried density is itself a probability density.
    GridFunction rho_grid(std::move(rho));
    double grid_mass = rho_grid.integral();
    for (double& v : rho_grid.values()) v /= grid_mass;

    ConstructedMeasure cm{MeasureSpec::grid_density(std::move(rho_grid)),
                          std::move(phi_grid), theta, Provenance::fractional, eps.amplitude()};
    return cm;
}

double max_delta_for_positivity(double theta) {
    auto phi_nonneg = [&](double delta) {
        try {
            GridFunction g = phi_series(theta, PerturbationFn::cubic(delta)).tabulate(1 << 14);
            for (double v : g.values())
                if (v < 0.0) return false;
            return true;
        } catch (const numeric_error&) {
            return false;
        }
    };
    double lo = 0.0, hi = 1.0;
    while (phi_nonneg(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) return lo; // phi never goes negative in practice? cap the search
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (phi_nonneg(mid) ? lo : hi) = mid;
    }
    return lo;
}

ConstructedMeasure construct_fractional_default(double theta, int n_nodes) {
    double delta = 0.9 * max_delta_for_positivity(theta);
    ConstructedMeasure cm = construct_fractional(theta, PerturbationFn::cubic(delta), n_nodes);
    cm.delta = delta;
    return cm;
}

NonuniquenessReport verify_nonuniqueness(const MeasureSpec& nu, double theta, int order,
                                         std::int64_t mc_samples, std::uint64_t seed,
                                         int workers) {
    NonuniquenessReport r;

    r.target_moments.resize(order + 1);
    r.target_moments[0] = 1.0;
    for (int n = 1; n <= order; ++n)
        r.target_moments[n] =
            r.target_moments[n - 1] * (theta / 2.0 + (n - 1)) / (theta + (n - 1));

    MomentVector z = forward_z_moments(nu, Rational(1, 2), order);
    r.z_moments.resize(order + 1);
    for (int n = 0; n <= order; ++n) {
        r.z_moments[n] = z.as_double(n);
        r.max_moment_dev = std::max(r.max_moment_dev,
                                    std::fabs(r.z_moments[n] - r.target_moments[n]));
    }
    r.moments_pass = r.max_moment_dev <= 1e-6;

    ConvolutionSampleConfig cfg;
    cfg.p = Rational(1, 2);
    cfg.samples = mc_samples;
    cfg.seed = seed;
    cfg.workers = workers > 0 ? workers : 1;
    std::vector<double> draws = sample_bernoulli_convolution(nu, cfg);
    double a = theta / 2.0;
    r.ks = ks_one_sample(std::move(draws), [a](double x) { return beta_cdf(a, a, x); }, 0.01);

    if (nu.is_grid()) {
        const GridFunction& rho = nu.grid();
        for (int i = 0; i < rho.n_nodes(); ++i) {
            double ref = theta * std::pow(1.0 - rho.node(i), theta - 1.0);
            r.sup_distance = std::max(r.sup_distance, std::fabs(rho.values()[i] - ref));
        }
    } else {
        r.density_available = false;
    }

    r.all_pass = r.moments_pass && r.ks.pass;
    return r;
}

void NonuniquenessReport::write_json(const std::string& path) const {
    nlohmann::json j;
    j["z_moments"] = z_moments;
    j["target_moments"] = target_moments;
    j["max_moment_dev"] = max_moment_dev;
    j["moments_pass"] = moments_pass;
    j["ks"] = {{"statistic", ks.statistic},
               {"n", ks.n},
               {"p_value", ks.p_value},
               {"alpha", ks.alpha},
               {"pass", ks.pass}};
    j["sup_distance_from_beta1theta"] = sup_distance;
    j["density_available"] = density_available;
    j["all_pass"] = all_pass;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace bconv
