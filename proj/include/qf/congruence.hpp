#pragma once

// Counting and constructing solutions of u^2 = t (mod 4s) on u in [0, 2s).
// The count is multiplicative over the prime powers of 4s; each local count
// follows from splitting off the even part of the p-valuation of t and
// testing quadratic residuosity of the unit part. Explicit solutions come
// from Tonelli-Shanks lifted by Hensel's method, glued with the CRT.

#include "qf/factorization.hpp"
#include "qf/forms.hpp"
#include "qf/integers.hpp"

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <vector>

namespace qf {

inline integer powm(const integer& b, const integer& e, const integer& m) {
    return boost::multiprecision::powm(mod_euclid(b, m), e, m);
}

// Legendre symbol (a | p) for an odd prime p
inline int legendre(const integer& a, const integer& p) {
    integer r = powm(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

// Tonelli-Shanks: some x with x^2 = a (mod p); requires (a | p) != -1
inline integer sqrt_mod_prime(const integer& a0, const integer& p) {
    integer a = mod_euclid(a0, p);
    if (a == 0) return 0;
    if (p == 2) return a;
    if (legendre(a, p) != 1) throw domain_error("sqrt_mod_prime: not a residue");
    if (p % 4 == 3) return powm(a, (p + 1) / 4, p);
    integer q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    integer z = 2;
    while (legendre(z, p) != -1) ++z;
    integer m = s, c = powm(z, q, p), t = powm(a, q, p), r = powm(a, (q + 1) / 2, p);
    while (t != 1) {
        integer tt = t;
        integer i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
            if (i == m) throw invariant_violation("sqrt_mod_prime: order overflow");
        }
        integer b = c;
        for (integer j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

namespace detail {

inline integer pow_int(const integer& p, unsigned e) {
    integer r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

// number of x in [0, p^e) with x^2 = t (mod p^e), p an odd prime
inline integer count_roots_odd(const integer& t, const integer& p, unsigned e) {
    integer pe = pow_int(p, e);
    integer tau = mod_euclid(t, pe);
    if (tau == 0) return pow_int(p, e / 2);
    unsigned c = 0;
    while (tau % p == 0) {
        tau /= p;
        ++c;
    }
    if (c & 1) return 0;
    if (legendre(tau, p) != 1) return 0;
    return 2 * pow_int(p, c / 2);
}

// number of x in [0, 2^e) with x^2 = t (mod 2^e), e >= 1
inline integer count_roots_two(const integer& t, unsigned e) {
    integer tau = mod_euclid(t, integer(1) << e);
    if (e == 1) return 1;
    if (tau == 0) return integer(1) << (e / 2);
    unsigned c = 0;
    while ((tau & 1) == 0) {
        tau >>= 1;
        ++c;
    }
    if (c & 1) return 0;
    unsigned e2 = e - c;
    integer scale = integer(1) << (c / 2);
    if (e2 == 1) return scale;
    if (e2 == 2) return tau % 4 == 1 ? integer(2 * scale) : integer(0);
    return tau % 8 == 1 ? integer(4 * scale) : integer(0);
}

// all x in [0, p^e) with x^2 = t (mod p^e), p an odd prime, sorted
inline std::vector<integer> roots_odd(const integer& t, const integer& p, unsigned e) {
    integer pe = pow_int(p, e);
    integer tau = mod_euclid(t, pe);
    std::vector<integer> out;
    if (tau == 0) {
        integer step = pow_int(p, (e + 1) / 2);
        for (integer x = 0; x < pe; x += step) out.push_back(x);
        return out;
    }
    unsigned c = 0;
    while (tau % p == 0) {
        tau /= p;
        ++c;
    }
    if (c & 1) return {};
    if (legendre(tau, p) != 1) return {};
    unsigned e2 = e - c;
    // root mod p, then Hensel-lift by modulus squaring up to p^e2
    integer target = pow_int(p, e2);
    integer r = sqrt_mod_prime(tau, p);
    integer mod = p;
    while (mod < target) {
        integer next = mod * mod;
        if (next > target) next = target;
        integer inv2r = mod_inverse(2 * r, next);
        r = mod_euclid(r - (r * r - tau) % next * inv2r, next);
        mod = next;
    }
    if ((r * r - tau) % target != 0) throw invariant_violation("roots_odd: lift failed");
    integer scale = pow_int(p, c / 2);
    integer r_neg = target - r;
    for (const integer& y : {r, r_neg})
        for (integer j = 0; j < scale; ++j) out.push_back(scale * (y + j * target));
    std::sort(out.begin(), out.end());
    return out;
}

// all x in [0, 2^e) with x^2 = t (mod 2^e), sorted
inline std::vector<integer> roots_two(const integer& t, unsigned e) {
    integer me = integer(1) << e;
    integer tau = mod_euclid(t, me);
    std::vector<integer> out;
    if (e == 1) {
        out.push_back(tau);
        return out;
    }
    if (tau == 0) {
        integer step = integer(1) << ((e + 1) / 2);
        for (integer x = 0; x < me; x += step) out.push_back(x);
        return out;
    }
    unsigned c = 0;
    while ((tau & 1) == 0) {
        tau >>= 1;
        ++c;
    }
    if (c & 1) return {};
    unsigned e2 = e - c;
    integer m2 = integer(1) << e2;
    std::vector<integer> ys;
    if (e2 == 1) {
        ys = {1};
    } else if (e2 == 2) {
        if (tau % 4 != 1) return {};
        ys = {1, 3};
    } else {
        if (tau % 8 != 1) return {};
        // lift a root of x^2 = tau from mod 8 upward one bit at a time
        integer r = 1;
        for (unsigned j = 3; j < e2; ++j) {
            if (((r * r - tau) >> j) & 1) r += integer(1) << (j - 1);
        }
        r = mod_euclid(r, m2);
        integer half = integer(1) << (e2 - 1);
        ys = {r, mod_euclid(-r, m2), mod_euclid(r + half, m2), mod_euclid(-r + half, m2)};
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        if ((r * r - tau) % m2 != 0) throw invariant_violation("roots_two: lift failed");
    }
    integer scale = integer(1) << (c / 2);
    for (const integer& y : ys)
        for (integer j = 0; j < scale; ++j) out.push_back(scale * (y + j * m2));
    std::sort(out.begin(), out.end());
    return out;
}

// x = r1 (mod m1), x = r2 (mod m2) for coprime moduli
inline integer crt(const integer& r1, const integer& m1, const integer& r2, const integer& m2) {
    integer x = mod_euclid((r2 - r1) % m2 * mod_inverse(m1, m2), m2);
    return r1 + m1 * x;
}

}  // namespace detail

// number of u in [0, 2s) with u^2 = t (mod 4s); s >= 1
inline integer gamma(const integer& t, const integer& s) {
    if (s < 1) throw domain_error("gamma: s must be >= 1");
    integer r4 = mod_euclid(t, 4);
    if (r4 == 2 || r4 == 3) return 0;
    unsigned e2 = 2;
    integer odd = s;
    while ((odd & 1) == 0) {
        odd >>= 1;
        ++e2;
    }
    // u and u + 2s give the same residue class behaviour, so the window
    // [0, 2s) carries exactly half the roots mod 4s; the two-adic factor
    // absorbs the halving since the odd-prime factors are shared verbatim
    integer two_part = detail::count_roots_two(t, e2);
    if ((two_part & 1) != 0) throw invariant_violation("gamma: odd two-adic root count");
    integer total = two_part / 2;
    for (const auto& [p, e] : factor(odd)) total *= detail::count_roots_odd(t, p, e);
    return total;
}

inline integer gamma_prime_power(const integer& t, const integer& p, unsigned a) {
    if (p == 2) return detail::count_roots_two(t, a + 2) / 2;
    return detail::count_roots_odd(t, p, a);
}

struct congruence_solution {
    integer k, u, v;  // the form (k, u, v) has discriminant u^2 - 4 k v
};

// all u in [0, 2|k|) with u^2 = delta (mod 4|k|), each packaged as the form
// (k, u, (u^2 - delta) / (4k)); k != 0, delta = 0 or 1 (mod 4) for nonempty
inline std::vector<congruence_solution> solve_congruence(const integer& delta, const integer& k) {
    if (k == 0) throw domain_error("solve_congruence: k must be nonzero");
    integer r4 = mod_euclid(delta, 4);
    if (r4 == 2 || r4 == 3) return {};
    integer kk = abs(k);
    unsigned e2 = 2;
    integer odd = kk;
    while ((odd & 1) == 0) {
        odd >>= 1;
        ++e2;
    }
    std::vector<integer> us = detail::roots_two(delta, e2);
    integer mod = integer(1) << e2;
    for (const auto& [p, e] : factor(odd)) {
        std::vector<integer> rs = detail::roots_odd(delta, p, e);
        integer pe = detail::pow_int(p, e);
        std::vector<integer> merged;
        merged.reserve(us.size() * rs.size());
        for (const integer& u : us)
            for (const integer& r : rs) merged.push_back(detail::crt(u, mod, r, pe));
        mod *= pe;
        us = std::move(merged);
    }
    std::vector<congruence_solution> out;
    for (const integer& u : us) {
        if (u >= 2 * kk) continue;
        integer num = u * u - delta;
        if (num % (4 * k) != 0) throw invariant_violation("solve_congruence: inexact v");
        out.push_back({k, u, num / (4 * k)});
    }
    std::sort(out.begin(), out.end(),
              [](const congruence_solution& x, const congruence_solution& y) { return x.u < y.u; });
    if (integer(out.size()) != gamma(delta, kk))
        throw invariant_violation("solve_congruence: count disagrees with gamma");
    return out;
}

}  // namespace qf
