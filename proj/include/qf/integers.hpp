#pragma once

// Exact integer arithmetic helpers shared by every layer: arbitrary-precision
// integer type, floor/Euclidean division, integer roots, and logarithms of
// huge integers for weight computations.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace qf {

using integer = boost::multiprecision::cpp_int;

// Invalid input for an operation (bad preconditions, unparseable values).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation is well formed but the form lies outside the supported classes
// (zero form, square discriminant where the theory needs a nonsquare one).
struct unsupported_class : domain_error {
    using domain_error::domain_error;
};

// An internal consistency check failed; indicates a bug, not bad input.
struct invariant_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int sign(const integer& x) { return x.sign(); }

// floor(sqrt(n)), exact; n >= 0
inline integer isqrt(const integer& n) {
    if (n < 0) throw domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const integer& n) {
    if (n < 0) return false;
    if (n == 0) return true;
    // squares mod 64 land in a 12-element set; cheap rejection first
    static constexpr bool residue_ok[64] = {
        1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
        1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
        0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
        0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0};
    if (!residue_ok[static_cast<unsigned>(n & 63)]) return false;
    integer r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

// floor(n^(1/4)) via two square roots
inline integer iroot4(const integer& n) { return isqrt(isqrt(n)); }

// floor(cbrt(n)) for n >= 0, by binary search on the bit length
inline integer icbrt(const integer& n) {
    if (n < 0) throw domain_error("icbrt: negative argument");
    if (n == 0) return 0;
    integer lo = 1, hi = integer(1) << (boost::multiprecision::msb(n) / 3 + 1);
    while (lo < hi) {
        integer mid = (lo + hi + 1) >> 1;
        if (mid * mid * mid <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// floor division (cpp_int's operator/ truncates toward zero)
inline integer floor_div(const integer& a, const integer& b) {
    if (b == 0) throw domain_error("floor_div: division by zero");
    integer q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// representative of a mod m in [0, m), m > 0
inline integer mod_euclid(const integer& a, const integer& m) {
    if (m <= 0) throw domain_error("mod_euclid: modulus must be positive");
    integer r = a % m;
    if (r < 0) r += m;
    return r;
}

// extended gcd: returns (g, x, y) with a*x + b*y = g, g >= 0
inline std::tuple<integer, integer, integer> egcd(integer a, integer b) {
    integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        integer q = a / b;
        integer t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    return {a, x0, y0};
}

// inverse of a modulo m, m > 1; requires gcd(a, m) = 1
inline integer mod_inverse(const integer& a, const integer& m) {
    auto [g, x, y] = egcd(mod_euclid(a, m), m);
    (void)y;
    if (g != 1) throw domain_error("mod_inverse: arguments not coprime");
    return mod_euclid(x, m);
}

inline unsigned bit_length(const integer& n) {
    if (n == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(abs(n))) + 1u;
}

// natural log of a positive integer, accurate to long double precision even
// when the integer has thousands of bits
inline long double log_integer(const integer& n) {
    if (n <= 0) throw domain_error("log_integer: argument must be positive");
    constexpr long double ln2 = 0.69314718055994530941723212145817657L;
    unsigned bits = bit_length(n);
    if (bits <= 63) return std::log(static_cast<long double>(n.convert_to<std::int64_t>()));
    integer top = n >> (bits - 63);
    long double mant = top.convert_to<long double>();
    return std::log(mant) + static_cast<long double>(bits - 63) * ln2;
}

// |m|^(-lambda) as a long double, m != 0, lambda > 0
inline long double inverse_power_weight(const integer& m, double lambda) {
    if (m == 0) throw domain_error("inverse_power_weight: m must be nonzero");
    integer a = abs(m);
    if (bit_length(a) <= 63) {
        long double md = static_cast<long double>(a.convert_to<std::int64_t>());
        if (lambda == 1.0) return 1.0L / md;
        return std::pow(md, -static_cast<long double>(lambda));
    }
    return std::exp(-static_cast<long double>(lambda) * log_integer(a));
}

// strict decimal with an optional sign; no whitespace, no base prefixes
inline integer parse_integer(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) throw domain_error("not an integer: '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw domain_error("not an integer: '" + s + "'");
    integer v(s.substr(i));
    if (s[0] == '-') v = -v;
    return v;
}

}  // namespace qf
