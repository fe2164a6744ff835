#include "bconv/serialize.hpp"

#include <fstream>

namespace bconv {

nlohmann::json to_json(const MomentVector& m) {
    nlohmann::json j;
    j["order"] = m.order();
    if (m.arithmetic == Arithmetic::exact) {
        j["arithmetic"] = "rational";
        std::vector<std::string> vals;
        vals.reserve(m.rvals.size());
        for (const Rational& r : m.rvals) vals.push_back(format_rational(r));
        j["values"] = vals;
    } else {
        j["arithmetic"] = "float";
        j["values"] = m.fvals;
    }
    return j;
}

MomentVector moment_vector_from_json(const nlohmann::json& j) {
    std::string arith = j.at("arithmetic").get<std::string>();
    if (arith == "rational") {
        std::vector<Rational> vals;
        for (const auto& v : j.at("values")) vals.push_back(parse_rational(v.get<std::string>()));
        return MomentVector::exact(std::move(vals));
    }
    if (arith == "float")
        return MomentVector::floating(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("unknown arithmetic tag: " + arith);
}

nlohmann::json to_json(const KsReport& r) {
    return {{"statistic", r.statistic},
            {"n", r.n},
            {"p_value", r.p_value},
            {"alpha", r.alpha},
            {"pass", r.pass}};
}

nlohmann::json to_json(const CharacterizationReport& r) {
    return {{"max_dev", r.max_deviation}, {"argmax_x", r.argmax_x}, {"pass", r.pass}};
}

nlohmann::json to_json(const ReconstructionReport& r) {
    nlohmann::json j;
    j["p"] = format_rational(r.p);
    j["order"] = r.order;
    if (r.arithmetic == Arithmetic::exact) {
        j["arithmetic"] = "rational";
        std::vector<std::string> b, pivots, mu;
        for (const Rational& v : r.exact.b) b.push_back(format_rational(v));
        for (const Rational& v : r.exact.pivots) pivots.push_back(format_rational(v));
        for (const Rational& v : r.exact.mu_moments) mu.push_back(format_rational(v));
        j["b"] = b;
        j["pivots"] = pivots;
        j["ey_estimate"] = format_rational(r.exact.ey_estimate);
        j["mu_moments"] = mu;
    } else {
        j["arithmetic"] = "float";
        j["b"] = r.floating.b;
        j["pivots"] = r.floating.pivots;
        j["ey_estimate"] = r.floating.ey_estimate;
        j["mu_moments"] = r.floating.mu_moments;
    }
    return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

std::string error_line(const std::string& message) {
    nlohmann::json j{{"error", message}};
    return j.dump();
}

} // namespace bconv
