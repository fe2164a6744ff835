// Command-line surface for the Bernoulli convolution toolkit: sampling,
// moment transport, reconstruction, non-uniqueness constructions and the
// Holroyd counterexample, emitting CSV/JSON for external plotting.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "bconv/holroyd.hpp"
#include "bconv/measures.hpp"
#include "bconv/moment_engine.hpp"
#include "bconv/nonunique.hpp"
#include "bconv/residual_allocation.hpp"
#include "bconv/serialize.hpp"
#include "bconv/stats.hpp"

namespace {

using namespace bconv;
using nlohmann::json;

struct GlobalOpts {
    std::uint64_t seed = 12345;
    int workers = 0; // 0 = hardware concurrency
    std::string format = "csv";
    std::string out;
    bool gnuplot_hint = false;
};

// Stream to --out or stdout.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open for writing: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void add_globals(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--seed", g.seed, "RNG seed");
    cmd->add_option("--workers", g.workers, "worker threads (0 = all cores)");
    cmd->add_option("--format", g.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", g.out, "output file (default: stdout)");
    cmd->add_flag("--gnuplot-hint", g.gnuplot_hint, "print a suggested gnuplot recipe");
}

void hint(const GlobalOpts& g, const std::string& recipe) {
    if (g.gnuplot_hint) std::cerr << "# gnuplot: " << recipe << "\n";
}

int effective_workers(const GlobalOpts& g) {
    if (g.workers > 0) return g.workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// ---- verify cases ----------------------------------------------------------

json verify_gem_beta(const Rational& theta, const Rational& p, std::int64_t samples,
                     const GlobalOpts& g, bool& pass) {
    int order = 15;
    MeasureSpec mu = MeasureSpec::beta(1, theta);
    MomentVector z = forward_z_moments(mu, p, order);
    MeasureSpec target = MeasureSpec::beta(p * theta, (1 - p) * theta);
    MomentVector tm = moments(target, order);
    bool exact_ok = z.rvals == tm.rvals;

    ConvolutionSampleConfig cfg;
    cfg.p = p;
    cfg.samples = samples;
    cfg.seed = g.seed;
    cfg.workers = effective_workers(g);
    double a = to_double(p * theta), b = to_double((1 - p) * theta);
    KsReport ks = ks_one_sample(sample_bernoulli_convolution(mu, cfg),
                                [a, b](double x) { return beta_cdf(a, b, x); }, 0.01);

    pass = exact_ok && ks.pass;
    return json{{"case", "gem-beta"},
                {"theta", format_rational(theta)},
                {"p", format_rational(p)},
                {"moments_exact_match", exact_ok},
                {"z_moments", to_json(z)},
                {"ks", to_json(ks)},
                {"pass", pass}};
}

json verify_nonunique_case(double theta, std::int64_t samples, const GlobalOpts& g, bool& pass) {
    ConstructedMeasure nu = construct_fractional_default(theta, (1 << 17) | 1);
    NonuniquenessReport r = verify_nonuniqueness(nu, 12, samples, g.seed, effective_workers(g));
    bool distinct = nu.delta > 0.0 ? r.sup_distance > 0.0 : true;
    pass = r.all_pass && distinct;
    return json{{"case", "nonunique"},
                {"theta", theta},
                {"delta", nu.delta},
                {"max_moment_dev", r.max_moment_dev},
                {"moments_pass", r.moments_pass},
                {"ks", to_json(r.ks)},
                {"sup_distance_from_beta1theta", r.sup_distance},
                {"pass", pass}};
}

json verify_holroyd(const Rational& p, double eta, int resolution, const GlobalOpts&, bool& pass) {
    HolroydPair pair = build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, eta, resolution);
    int mres = 721;

    double worst_marginal = 0.0;
    for (auto dir : {MarginalDirection::x1, MarginalDirection::x2, MarginalDirection::sum}) {
        GridFunction m1 = marginal(pair.f, dir, mres);
        GridFunction m2 = marginal(pair.f_tilde, dir, mres);
        worst_marginal = std::max(worst_marginal, m1.max_abs_diff(m2));
    }

    GridFunction c1 = z_distribution(pair.f, p, mres);
    GridFunction c2 = z_distribution(pair.f_tilde, p, mres);
    double cdf_diff = c1.max_abs_diff(c2);

    double dist = joint_distance(pair.f, pair.f_tilde);
    double expected = 2.0 * eta * pair.g.side * pair.g.side / 3.0;
    bool dist_ok = std::fabs(dist - expected) <= 0.05 * expected;

    pass = worst_marginal <= 1e-9 && cdf_diff <= 1e-8 && dist_ok;
    return json{{"case", "holroyd"},
                {"p", format_rational(p)},
                {"max_marginal_diff", worst_marginal},
                {"max_cdf_diff", cdf_diff},
                {"joint_distance", dist},
                {"expected_joint_distance", expected},
                {"pass", pass}};
}

json verify_prop22(bool& pass) {
    std::vector<MeasureSpec> corpus{MeasureSpec::beta(1, 1), MeasureSpec::beta(1, 3),
                                    MeasureSpec::dirac(Rational(2, 5))};
    std::vector<Rational> ps{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                             Rational(1)};
    pass = true;
    json cases = json::array();
    for (const auto& mu : corpus) {
        MomentVector mm = moments(mu, 15);
        for (const auto& p : ps) {
            MomentVector z = forward_z_moments(mu, p, 15);
            Rational worst(0);
            for (int n = 1; n <= 15; ++n) {
                Rational r = prop22_residual(mm, z, p, n);
                if (abs(r) > abs(worst)) worst = r;
            }
            bool ok = worst == 0;
            pass = pass && ok;
            cases.push_back({{"measure", mu.to_string()},
                             {"p", format_rational(p)},
                             {"max_residual", format_rational(worst)},
                             {"pass", ok}});
        }
    }
    return json{{"case", "prop22"}, {"cases", cases}, {"pass", pass}};
}

json verify_pivots(bool& pass) {
    std::vector<MeasureSpec> z_laws{MeasureSpec::beta(1, Rational(1, 2)), MeasureSpec::beta(1, 1),
                                    MeasureSpec::beta(1, 2), MeasureSpec::beta(1, 4),
                                    MeasureSpec::dirac(Rational(3, 10))};
    std::vector<Rational> ps{Rational(1, 10), Rational(1, 4), Rational(2, 5), Rational(3, 5),
                             Rational(9, 10)};
    pass = true;
    for (const auto& law : z_laws) {
        MomentVector z = moments(law, 15);
        for (const auto& p : ps)
            for (int n = 2; n <= 15; ++n)
                if (pivot(z, p, n) == 0) pass = false;
    }
    // Symmetric Z (uniform) at p = 1/2: zero pivots at odd n, positive at even n.
    MomentVector zu = moments(MeasureSpec::uniform(), 15);
    bool sym_ok = true;
    for (int n = 2; n <= 15; ++n) {
        Rational piv = pivot(zu, Rational(1, 2), n);
        if (n % 2 == 1 ? piv != 0 : piv <= 0) sym_ok = false;
    }
    pass = pass && sym_ok;
    return json{{"case", "pivots"}, {"symmetric_half_ok", sym_ok}, {"pass", pass}};
}

// ---- subcommands -----------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Bernoulli(p) convolutions of stick-breaking partitions: "
                 "sampling, moment transport, reconstruction, non-uniqueness"};
    app.require_subcommand(1);

    // sample-partition
    auto* sp = app.add_subcommand("sample-partition", "draw one stick-breaking partition");
    GlobalOpts sp_g;
    std::string sp_measure;
    double sp_tol = 1e-12;
    sp->add_option("--measure", sp_measure, "stick measure spec")->required();
    sp->add_option("--tol", sp_tol, "truncation tolerance");
    add_globals(sp, sp_g);

    // sample-z
    auto* sz = app.add_subcommand("sample-z", "Monte Carlo draws of the Bernoulli(p) convolution");
    GlobalOpts sz_g;
    std::string sz_measure, sz_p = "1/2";
    std::int64_t sz_samples = 100000;
    double sz_tol = 1e-12;
    sz->add_option("--measure", sz_measure, "stick measure spec")->required();
    sz->add_option("--p", sz_p, "Bernoulli parameter (rational a/b)");
    sz->add_option("--samples", sz_samples, "number of draws");
    sz->add_option("--tol", sz_tol, "truncation tolerance");
    add_globals(sz, sz_g);

    // z-moments
    auto* zm = app.add_subcommand("z-moments", "moments of the Bernoulli(p) convolution");
    GlobalOpts zm_g;
    std::string zm_measure, zm_p = "1/2";
    int zm_order = 15;
    zm->add_option("--measure", zm_measure, "stick measure spec")->required();
    zm->add_option("--p", zm_p, "Bernoulli parameter (rational a/b)");
    zm->add_option("--order", zm_order, "highest moment order");
    add_globals(zm, zm_g);

    // reconstruct
    auto* rc = app.add_subcommand("reconstruct", "recover stick moments from a Z law (p != 1/2)");
    GlobalOpts rc_g;
    std::string rc_z, rc_p = "1/3";
    int rc_order = 20;
    rc->add_option("--z", rc_z, "measure spec of the Z law")->required();
    rc->add_option("--p", rc_p, "Bernoulli parameter (rational a/b, != 1/2)");
    rc->add_option("--order", rc_order, "recursion depth N");
    add_globals(rc, rc_g);

    // construct
    auto* cs = app.add_subcommand("construct", "build a measure with a Beta(theta/2,theta/2) "
                                               "Bernoulli(1/2) convolution");
    GlobalOpts cs_g;
    std::string cs_family = "fractional", cs_f;
    double cs_theta = 3.0, cs_delta = -1.0;
    int cs_nodes = 8193;
    cs->add_option("--family", cs_family, "gem2 or fractional")
        ->check(CLI::IsMember({"gem2", "fractional"}));
    cs->add_option("--theta", cs_theta, "theta (fractional family; gem2 is theta = 2)");
    cs->add_option("--delta", cs_delta, "perturbation amplitude (default: calibrated)");
    cs->add_option("--f", cs_f, "CSV of f on [0,1/2] (gem2 family)");
    cs->add_option("--nodes", cs_nodes, "density grid nodes");
    add_globals(cs, cs_g);

    // verify
    auto* vf = app.add_subcommand("verify", "run a named verification case");
    GlobalOpts vf_g;
    std::string vf_case, vf_p = "1/2", vf_theta = "3";
    double vf_eta = 1.0;
    std::int64_t vf_samples = 100000;
    int vf_resolution = 144;
    vf->add_option("--case", vf_case, "gem-beta | nonunique | holroyd | prop22 | pivots")
        ->required()
        ->check(CLI::IsMember({"gem-beta", "nonunique", "holroyd", "prop22", "pivots"}));
    vf->add_option("--theta", vf_theta, "theta parameter (rational a/b)");
    vf->add_option("--p", vf_p, "Bernoulli parameter (rational a/b)");
    vf->add_option("--samples", vf_samples, "Monte Carlo sample count");
    vf->add_option("--eta", vf_eta, "Holroyd perturbation amplitude");
    vf->add_option("--resolution", vf_resolution, "Holroyd cell resolution (multiple of 72)");
    add_globals(vf, vf_g);

    // holroyd
    auto* hl = app.add_subcommand("holroyd", "emit the Holroyd counterexample artifacts");
    GlobalOpts hl_g;
    std::string hl_p = "1/2", hl_prefix = "holroyd";
    double hl_eta = 1.0;
    int hl_resolution = 144, hl_mres = 721;
    hl->add_option("--p", hl_p, "Bernoulli parameter (rational a/b)");
    hl->add_option("--eta", hl_eta, "perturbation amplitude, in (0,12)");
    hl->add_option("--resolution", hl_resolution, "cell resolution (multiple of 72)");
    hl->add_option("--marginal-resolution", hl_mres, "marginal/CDF grid nodes");
    hl->add_option("--out-prefix", hl_prefix, "output file prefix");
    add_globals(hl, hl_g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << error_line(e.what()) << "\n";
        return 2;
    }

    if (sp->parsed()) {
        Partition part = sample_partition(MeasureSpec::parse(sp_measure), sp_tol, sp_g.seed);
        Output out(sp_g.out);
        out.os().precision(17);
        if (sp_g.format == "json") {
            json j{{"parts", part.parts}, {"remainder", part.remainder}};
            out.os() << j.dump(2) << "\n";
        } else {
            out.os() << "index,part\n";
            for (size_t i = 0; i < part.parts.size(); ++i)
                out.os() << i + 1 << "," << part.parts[i] << "\n";
            out.os() << "remainder," << part.remainder << "\n";
        }
        return 0;
    }

    if (sz->parsed()) {
        ConvolutionSampleConfig cfg;
        cfg.p = parse_rational(sz_p);
        cfg.samples = sz_samples;
        cfg.seed = sz_g.seed;
        cfg.truncation_tol = sz_tol;
        cfg.workers = effective_workers(sz_g);
        std::vector<double> z = sample_bernoulli_convolution(MeasureSpec::parse(sz_measure), cfg);
        Output out(sz_g.out);
        out.os().precision(17);
        if (sz_g.format == "json") {
            out.os() << json{{"z", z}}.dump() << "\n";
        } else {
            out.os() << "z\n";
            for (double v : z) out.os() << v << "\n";
        }
        hint(sz_g, "plot '" + (sz_g.out.empty() ? "z.csv" : sz_g.out) +
                       "' skip 1 using 1 bins=50 with boxes");
        return 0;
    }

    if (zm->parsed()) {
        MomentVector z =
            forward_z_moments(MeasureSpec::parse(zm_measure), parse_rational(zm_p), zm_order);
        Output out(zm_g.out);
        out.os().precision(17);
        if (zm_g.format == "json") {
            out.os() << to_json(z).dump(2) << "\n";
        } else {
            out.os() << "n,moment\n";
            for (int n = 0; n <= z.order(); ++n) out.os() << n << "," << z.as_double(n) << "\n";
        }
        return 0;
    }

    if (rc->parsed()) {
        MeasureSpec z_law = MeasureSpec::parse(rc_z);
        MomentVector z = moments(z_law, rc_order);
        ReconstructionReport rep = reconstruct(z, parse_rational(rc_p), rc_order);
        Output out(rc_g.out);
        out.os().precision(17);
        if (rc_g.format == "json") {
            out.os() << to_json(rep).dump(2) << "\n";
        } else {
            out.os() << "n,b_n,pivot_n\n";
            for (int n = 0; n <= rep.order; ++n) {
                if (rep.arithmetic == Arithmetic::exact)
                    out.os() << n << "," << to_double(rep.exact.b[n]) << ","
                             << to_double(rep.exact.pivots[n]) << "\n";
                else
                    out.os() << n << "," << rep.floating.b[n] << "," << rep.floating.pivots[n]
                             << "\n";
            }
        }
        hint(rc_g, "plot '-' skip 1 using 1:2 with linespoints title 'b_n'");
        return 0;
    }

    if (cs->parsed()) {
        ConstructedMeasure cm = [&] {
            if (cs_family == "gem2") {
                GridFunction f = cs_f.empty()
                                     ? GridFunction::tabulate([](double) { return 1.0; }, 4097,
                                                              0.0, 0.5)
                                     : GridFunction::read_csv(cs_f);
                return construct_gem2(f, cs_nodes | 1);
            }
            if (cs_delta >= 0.0)
                return construct_fractional(cs_theta, PerturbationFn::cubic(cs_delta),
                                            cs_nodes | 1);
            return construct_fractional_default(cs_theta, cs_nodes | 1);
        }();
        std::string base = cs_g.out.empty() ? "density.csv" : cs_g.out;
        cm.rho().write_csv(base, "x,density");
        cm.write_metadata_json(base + ".meta.json");
        std::cout << "wrote " << base << " and " << base << ".meta.json\n";
        hint(cs_g, "plot '" + base + "' skip 1 using 1:2 with lines title 'rho'");
        return 0;
    }

    if (vf->parsed()) {
        bool pass = false;
        json rep;
        if (vf_case == "gem-beta") {
            rep = verify_gem_beta(parse_rational(vf_theta), parse_rational(vf_p), vf_samples,
                                  vf_g, pass);
        } else if (vf_case == "nonunique") {
            rep = verify_nonunique_case(to_double(parse_rational(vf_theta)), vf_samples, vf_g,
                                        pass);
        } else if (vf_case == "holroyd") {
            rep = verify_holroyd(parse_rational(vf_p), vf_eta, vf_resolution, vf_g, pass);
        } else if (vf_case == "prop22") {
            rep = verify_prop22(pass);
        } else {
            rep = verify_pivots(pass);
        }
        Output out(vf_g.out);
        out.os() << rep.dump(2) << "\n";
        return pass ? 0 : 1;
    }

    if (hl->parsed()) {
        Rational p = parse_rational(hl_p);
        HolroydPair pair = build_reference(11.0 / 18, 5.0 / 18, 1.0 / 12, hl_eta, hl_resolution);
        pair.f.write_csv(hl_prefix + "_f.csv");
        pair.f_tilde.write_csv(hl_prefix + "_f_tilde.csv");
        const char* names[] = {"x1", "x2", "sum"};
        MarginalDirection dirs[] = {MarginalDirection::x1, MarginalDirection::x2,
                                    MarginalDirection::sum};
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
            GridFunction m1 = marginal(pair.f, dirs[k], hl_mres);
            GridFunction m2 = marginal(pair.f_tilde, dirs[k], hl_mres);
            m1.write_csv(hl_prefix + "_marginal_" + names[k] + "_f.csv");
            m2.write_csv(hl_prefix + "_marginal_" + names[k] + "_f_tilde.csv");
            worst = std::max(worst, m1.max_abs_diff(m2));
        }
        GridFunction c1 = z_distribution(pair.f, p, hl_mres);
        GridFunction c2 = z_distribution(pair.f_tilde, p, hl_mres);
        c1.write_csv(hl_prefix + "_cdf_f.csv", "z,cdf");
        c2.write_csv(hl_prefix + "_cdf_f_tilde.csv", "z,cdf");
        json rep{{"max_marginal_diff", worst},
                 {"max_cdf_diff", c1.max_abs_diff(c2)},
                 {"joint_distance", joint_distance(pair.f, pair.f_tilde)}};
        write_json_file(hl_prefix + "_report.json", rep);
        std::cout << "wrote " << hl_prefix << "_* artifacts\n";
        hint(hl_g, "plot '" + hl_prefix + "_cdf_f.csv' skip 1 using 1:2 with lines");
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bconv::numeric_error& e) {
        std::cerr << bconv::error_line(e.what()) << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << bconv::error_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << bconv::error_line(e.what()) << "\n";
        return 1;
    }
}
