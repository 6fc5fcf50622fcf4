#pragma once

// Fundamental solutions of t^2 - D u^2 = 4 and the automorph groups of
// primitive forms built from them. The workhorse is the classical continued
// fraction expansion of sqrt(D) for x^2 - D y^2 = 1; the "= 4" solution is
// recovered from it by a residue-class analysis, including the half-integer
// case that can appear when D is 1 mod 4.

#include "qf/forms.hpp"
#include "qf/integers.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qf {

struct pell_solution {
    integer t, u;
    integer delta;
};

namespace detail {

// least positive (x, y) with x^2 - d y^2 = 1, d >= 2 nonsquare, via the
// continued fraction convergents of sqrt(d)
inline std::pair<integer, integer> pell_unit(const integer& d) {
    integer a0 = isqrt(d);
    integer p = 0, q = 1, a = a0;
    integer h_prev = 1, h = a0, k_prev = 0, k = 1;
    for (;;) {
        if (h * h - d * k * k == 1) return {h, k};
        p = a * q - p;
        q = (d - p * p) / q;
        a = (a0 + p) / q;
        integer h_next = a * h + h_prev;
        integer k_next = a * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
}

}  // namespace detail

// minimal t, u >= 1 with t^2 - delta u^2 = 4; delta >= 5 and nonsquare
inline pell_solution pell4_fundamental(const integer& delta) {
    if (delta < 5) throw domain_error("pell4_fundamental: delta must be >= 5");
    if (is_square(delta)) throw domain_error("pell4_fundamental: delta must be nonsquare");
    integer r = mod_euclid(delta, 4);
    if (r == 0) {
        auto [x, y] = detail::pell_unit(delta / 4);
        return {2 * x, y, delta};
    }
    auto [x, y] = detail::pell_unit(delta);
    if (r == 1) {
        // an odd solution (t, u) of t^2 - delta u^2 = 4 exists iff the unit
        // (x, y) is the cube of the half-integer fundamental unit, in which
        // case t solves t^3 - 3t = 2x
        integer target = 2 * x;
        integer t0 = icbrt(target);
        for (integer t = t0 - 2; t <= t0 + 2; ++t) {
            if (t < 3 || t * t * t - 3 * t != target) continue;
            integer num = t * t - 4;
            if (num % delta != 0) continue;
            integer u2 = num / delta;
            if (!is_square(u2)) continue;
            integer u = isqrt(u2);
            if (t * t - delta * u * u == 4) return {t, u, delta};
        }
    }
    return {2 * x, 2 * y, delta};
}

// automorph of the primitive form q from a solution of t^2 - disc(q) u^2 = 4
inline unimodular automorph_from_pell(const quad_form& q, const integer& t, const integer& u) {
    if (!is_primitive(q)) throw domain_error("automorph_from_pell: form must be primitive");
    integer delta = discriminant(q);
    if (t * t - delta * u * u != 4)
        throw domain_error("automorph_from_pell: (t, u) does not solve t^2 - delta u^2 = 4");
    if (mod_euclid(t - q.b * u, 2) != 0)
        throw invariant_violation("automorph_from_pell: parity mismatch");
    unimodular m{(t - q.b * u) / 2, -q.c * u, q.a * u, (t + q.b * u) / 2};
    if (apply_transform(q, m) != q)
        throw invariant_violation("automorph_from_pell: matrix does not fix the form");
    return m;
}

// proper automorphism group of a form with nonzero nonsquare discriminant
struct automorph_group {
    bool finite;
    std::vector<unimodular> elements;      // full list when finite
    std::optional<unimodular> generator;   // infinite cyclic part (with -I) otherwise
};

inline automorph_group automorphs(const quad_form& q) {
    if (!is_primitive(q)) throw domain_error("automorphs: form must be primitive");
    integer delta = discriminant(q);
    if (delta == 0 || (delta > 0 && is_square(delta)))
        throw unsupported_class("automorphs: discriminant is a square");
    if (delta < 0) {
        // all integer solutions of t^2 + |delta| u^2 = 4
        std::vector<std::pair<integer, integer>> sols{{2, 0}, {-2, 0}};
        if (delta == -4) {
            sols.push_back({0, 1});
            sols.push_back({0, -1});
        } else if (delta == -3) {
            sols.push_back({1, 1});
            sols.push_back({-1, 1});
            sols.push_back({1, -1});
            sols.push_back({-1, -1});
        }
        automorph_group g{true, {}, std::nullopt};
        for (const auto& [t, u] : sols) g.elements.push_back(automorph_from_pell(q, t, u));
        return g;
    }
    pell_solution s = pell4_fundamental(delta);
    return {false, {}, automorph_from_pell(q, s.t, s.u)};
}

// imprimitive forms share the automorphs of their primitive part
inline automorph_group automorphs_nonprimitive(const quad_form& q) {
    integer s = content(q);
    if (s == 0) throw unsupported_class("automorphs_nonprimitive: zero form");
    return automorphs({q.a / s, q.b / s, q.c / s});
}

}  // namespace qf
