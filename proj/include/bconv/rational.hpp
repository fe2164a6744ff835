#ifndef BCONV_RATIONAL_HPP
#define BCONV_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace bconv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact binomial coefficient.
inline BigInt binomial_int(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

template <class T> T binomial(int n, int k);

template <> inline Rational binomial<Rational>(int n, int k) {
    return Rational(binomial_int(n, k));
}
template <> inline double binomial<double>(int n, int k) {
    return static_cast<double>(binomial_int(n, k));
}

template <class T> T pow_int(const T& x, int n) {
    T r = T(1);
    T b = x;
    int e = n;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }
inline double to_double(double x) { return x; }

// Parses "p/q", an integer, or a plain decimal ("0.25") as an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("cannot parse rational: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt p(s.substr(0, slash));
        BigInt q(s.substr(slash + 1));
        if (q == 0) bad();
        return Rational(p, q);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+") bad();
        BigInt p(digits);
        BigInt q = 1;
        for (size_t i = dot + 1; i < s.size(); ++i) q *= 10;
        return Rational(p, q);
    }
    return Rational(BigInt(s));
}

inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace bconv

#endif
