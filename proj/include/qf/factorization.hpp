#pragma once

// Integer factorization sized for this library's workloads: trial division
// handles everything with small prime factors, Brent's cycle-finding rho
// covers the occasional large semiprime, and Miller-Rabin certifies the
// pieces. Divisor tables are derived from the factor map.

#include "qf/integers.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <map>
#include <vector>

namespace qf {

inline bool is_probable_prime(const integer& n) {
    if (n < 2) return false;
    return boost::multiprecision::miller_rabin_test(n, 25);
}

namespace detail {

constexpr std::int64_t trial_division_limit = 1000000;

// one nontrivial factor of composite n, all prime factors > trial limit
inline integer brent_rho(const integer& n) {
    if (n % 2 == 0) return 2;
    for (integer c = 1;; ++c) {
        integer x = 2, y = 2, d = 1, q = 1, ys = 0;
        integer r = 1;
        const integer step = 128;
        while (d == 1) {
            x = y;
            for (integer i = 0; i < r; ++i) y = (y * y + c) % n;
            integer k = 0;
            while (k < r && d == 1) {
                ys = y;
                integer lim = std::min(step, integer(r - k));
                for (integer i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
                k += step;
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            }
        }
        if (d != n) return d;
        // rare cycle degeneracy: retry with the next polynomial shift
    }
}

inline void factor_recurse(integer n, std::map<integer, unsigned>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    integer d = brent_rho(n);
    factor_recurse(d, out);
    factor_recurse(n / d, out);
}

}  // namespace detail

// prime factorization of n >= 1 as {prime -> exponent}
inline std::map<integer, unsigned> factor(integer n) {
    if (n < 1) throw domain_error("factor: argument must be >= 1");
    std::map<integer, unsigned> out;
    while ((n & 1) == 0) {
        ++out[2];
        n >>= 1;
    }
    for (std::int64_t d = 3; d <= detail::trial_division_limit && n > 1; d += 2) {
        if (integer(d) * d > n) break;
        while (n % d == 0) {
            ++out[integer(d)];
            n /= d;
        }
    }
    if (n > 1) {
        if (integer(detail::trial_division_limit) * detail::trial_division_limit > n ||
            is_probable_prime(n))
            ++out[n];
        else
            detail::factor_recurse(n, out);
    }
    return out;
}

inline integer divisor_count(const integer& n) {
    if (n == 0) throw domain_error("divisor_count: argument must be nonzero");
    integer d = 1;
    for (const auto& [p, e] : factor(abs(n))) d *= e + 1;
    return d;
}

// all positive divisors of n != 0, ascending
inline std::vector<integer> divisors(const integer& n) {
    if (n == 0) throw domain_error("divisors: argument must be nonzero");
    std::vector<integer> out{1};
    for (const auto& [p, e] : factor(abs(n))) {
        std::size_t base = out.size();
        integer pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// all g >= 1 with g*g dividing n, ascending
inline std::vector<integer> square_divisor_roots(const integer& n) {
    if (n == 0) throw domain_error("square_divisor_roots: argument must be nonzero");
    std::vector<integer> out{1};
    for (const auto& [p, e] : factor(abs(n))) {
        unsigned half = e / 2;
        if (half == 0) continue;
        std::size_t base = out.size();
        integer pk = 1;
        for (unsigned i = 1; i <= half; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qf
