#pragma once

// Integral binary quadratic forms q(m, n) = a m^2 + b m n + c n^2 together
// with the GL2(Z) change-of-variable action, Gauss reduction for definite
// forms, the rho-step reduction cycle for indefinite nonsquare forms, and
// equivalence testing with explicit witness matrices.

#include "qf/integers.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qf {

struct quad_form {
    integer a, b, c;

    friend bool operator==(const quad_form&, const quad_form&) = default;
};

inline bool operator<(const quad_form& x, const quad_form& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
}

inline std::ostream& operator<<(std::ostream& os, const quad_form& q) {
    return os << "(" << q.a << "," << q.b << "," << q.c << ")";
}

inline integer eval(const quad_form& q, const integer& m, const integer& n) {
    return q.a * m * m + q.b * m * n + q.c * n * n;
}

inline integer discriminant(const quad_form& q) { return q.b * q.b - 4 * q.a * q.c; }

// gcd of the coefficients; 0 exactly for the zero form
inline integer content(const quad_form& q) { return gcd(gcd(abs(q.a), abs(q.b)), abs(q.c)); }

inline bool is_primitive(const quad_form& q) { return content(q) == 1; }

inline bool is_zero_form(const quad_form& q) { return q.a == 0 && q.b == 0 && q.c == 0; }

enum class form_class {
    positive_definite,
    negative_definite,
    indefinite_nonsquare,
    square_discriminant,
};

inline const char* to_string(form_class fc) {
    switch (fc) {
        case form_class::positive_definite: return "positive_definite";
        case form_class::negative_definite: return "negative_definite";
        case form_class::indefinite_nonsquare: return "indefinite_nonsquare";
        case form_class::square_discriminant: return "square_discriminant";
    }
    return "?";
}

inline form_class classify(const quad_form& q) {
    integer d = discriminant(q);
    if (d < 0) return q.a > 0 ? form_class::positive_definite : form_class::negative_definite;
    if (is_square(d)) return form_class::square_discriminant;
    return form_class::indefinite_nonsquare;
}

// column-action matrix [alpha beta; gamma delta], determinant +-1
struct unimodular {
    integer alpha = 1, beta = 0, gamma = 0, delta = 1;

    friend bool operator==(const unimodular&, const unimodular&) = default;
};

inline integer det(const unimodular& t) { return t.alpha * t.delta - t.beta * t.gamma; }

inline bool is_unimodular(const unimodular& t) {
    integer d = det(t);
    return d == 1 || d == -1;
}

inline unimodular operator*(const unimodular& s, const unimodular& t) {
    return {s.alpha * t.alpha + s.beta * t.gamma, s.alpha * t.beta + s.beta * t.delta,
            s.gamma * t.alpha + s.delta * t.gamma, s.gamma * t.beta + s.delta * t.delta};
}

inline unimodular inverse(const unimodular& t) {
    integer d = det(t);
    if (d == 1) return {t.delta, -t.beta, -t.gamma, t.alpha};
    if (d == -1) return {-t.delta, t.beta, t.gamma, -t.alpha};
    throw domain_error("inverse: matrix is not unimodular");
}

inline unimodular negate(const unimodular& t) { return {-t.alpha, -t.beta, -t.gamma, -t.delta}; }

inline std::ostream& operator<<(std::ostream& os, const unimodular& t) {
    return os << "[" << t.alpha << "," << t.beta << ";" << t.gamma << "," << t.delta << "]";
}

// q'(m, n) = q(alpha m + beta n, gamma m + delta n)
inline quad_form apply_transform(const quad_form& q, const unimodular& t) {
    if (!is_unimodular(t)) throw domain_error("apply_transform: matrix is not unimodular");
    const integer &a = q.a, &b = q.b, &c = q.c;
    integer A = a * t.alpha * t.alpha + b * t.alpha * t.gamma + c * t.gamma * t.gamma;
    integer B = 2 * a * t.alpha * t.beta + b * (t.alpha * t.delta + t.beta * t.gamma) +
                2 * c * t.gamma * t.delta;
    integer C = a * t.beta * t.beta + b * t.beta * t.delta + c * t.delta * t.delta;
    return {A, B, C};
}

struct reduction {
    quad_form form;
    unimodular witness;  // apply_transform(input, witness) == form, det +1
};

namespace detail {

inline bool is_reduced_definite(const integer& a, const integer& b, const integer& c) {
    // convention for the positive definite shape: |b| <= a <= c, and b >= 0
    // on either boundary
    if (!(abs(b) <= a && a <= c)) return false;
    if (b < 0 && (abs(b) == a || a == c)) return false;
    return true;
}

inline bool is_reduced_indefinite(const integer& a, const integer& b, const integer& s) {
    return b >= 1 && b <= s && 2 * abs(a) + b >= s + 1 && 2 * abs(a) - b <= s;
}

// single rho step with witness accumulation; q indefinite nonsquare, c != 0
inline void rho_step(quad_form& q, unimodular& t, const integer& delta, const integer& s) {
    integer ac = abs(q.c);
    integer two_ac = 2 * ac;
    integer r = mod_euclid(-q.b, two_ac);
    integer b2;
    if (ac > s) {
        // smallest absolute residue, ties to +|c|
        b2 = (r > ac) ? r - two_ac : r;
    } else {
        // largest residue <= s
        b2 = s - mod_euclid(s - r, two_ac);
    }
    integer m = (q.b + b2) / (2 * q.c);
    if ((q.b + b2) % (2 * q.c) != 0) throw invariant_violation("rho_step: inexact shear");
    t = t * unimodular{0, -1, 1, m};
    integer c2 = (b2 * b2 - delta) / (4 * q.c);
    q = {q.c, b2, c2};
}

}  // namespace detail

inline bool is_reduced(const quad_form& q) {
    switch (classify(q)) {
        case form_class::positive_definite:
            return detail::is_reduced_definite(q.a, q.b, q.c);
        case form_class::negative_definite:
            return detail::is_reduced_definite(-q.a, -q.b, -q.c);
        case form_class::indefinite_nonsquare:
            return detail::is_reduced_indefinite(q.a, q.b, isqrt(discriminant(q)));
        case form_class::square_discriminant:
            throw unsupported_class("is_reduced: square discriminant");
    }
    throw invariant_violation("is_reduced: unreachable");
}

// canonical reduced representative with a determinant +1 witness
inline reduction reduce(const quad_form& q) {
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("reduce: square discriminant");

    unimodular t;
    if (fc == form_class::positive_definite || fc == form_class::negative_definite) {
        bool flip = fc == form_class::negative_definite;
        integer a = flip ? -q.a : q.a, b = flip ? -q.b : q.b, c = flip ? -q.c : q.c;
        for (;;) {
            // shear b into (-a, a]
            integer sh = floor_div(a - b, 2 * a);
            if (sh != 0) {
                c += (a * sh + b) * sh;
                b += 2 * a * sh;
                t = t * unimodular{1, sh, 0, 1};
            }
            if (a > c) {
                integer na = c, nb = -b, nc = a;
                a = na;
                b = nb;
                c = nc;
                t = t * unimodular{0, -1, 1, 0};
                continue;
            }
            break;
        }
        if (b < 0 && a == c) {
            b = -b;
            t = t * unimodular{0, -1, 1, 0};
        }
        quad_form r = flip ? quad_form{-a, -b, -c} : quad_form{a, b, c};
        return {r, t};
    }

    integer delta = discriminant(q);
    integer s = isqrt(delta);
    quad_form cur = q;
    unsigned cap = 64 * (bit_length(abs(q.a) + abs(q.b) + abs(q.c)) + 4);
    for (unsigned i = 0; i < cap; ++i) {
        if (detail::is_reduced_indefinite(cur.a, cur.b, s)) return {cur, t};
        detail::rho_step(cur, t, delta, s);
    }
    throw invariant_violation("reduce: step budget exhausted");
}

// full cycle of reduced forms equivalent to q, starting at reduce(q).form
inline std::vector<reduction> cycle_with_witnesses(const quad_form& q) {
    if (classify(q) != form_class::indefinite_nonsquare)
        throw unsupported_class("cycle: requires an indefinite nonsquare form");
    reduction r0 = reduce(q);
    integer delta = discriminant(q);
    integer s = isqrt(delta);
    std::vector<reduction> cyc{r0};
    quad_form cur = r0.form;
    unimodular t = r0.witness;
    for (;;) {
        detail::rho_step(cur, t, delta, s);
        if (cur == r0.form) break;
        cyc.push_back({cur, t});
        if (cyc.size() > 100000) throw invariant_violation("cycle: did not close");
    }
    return cyc;
}

inline std::vector<quad_form> cycle_of(const quad_form& q) {
    std::vector<quad_form> out;
    for (const auto& r : cycle_with_witnesses(q)) out.push_back(r.form);
    return out;
}

// witness t with apply_transform(q1, t) == q2, if the forms are equivalent
inline std::optional<unimodular> equivalent(const quad_form& q1, const quad_form& q2) {
    if (discriminant(q1) != discriminant(q2)) return std::nullopt;
    form_class fc = classify(q1);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("equivalent: square discriminant");
    if (fc == form_class::positive_definite || fc == form_class::negative_definite) {
        if (classify(q2) != fc) return std::nullopt;
        reduction r1 = reduce(q1), r2 = reduce(q2);
        if (r1.form != r2.form) return std::nullopt;
        unimodular t = r1.witness * inverse(r2.witness);
        if (apply_transform(q1, t) != q2) throw invariant_violation("equivalent: bad witness");
        return t;
    }
    reduction r1 = reduce(q1), r2 = reduce(q2);
    for (const auto& step : cycle_with_witnesses(r1.form)) {
        if (step.form == r2.form) {
            // q1 -> r1.form -> step.form == r2.form -> q2
            unimodular t = r1.witness * step.witness * inverse(r2.witness);
            if (apply_transform(q1, t) != q2)
                throw invariant_violation("equivalent: bad witness");
            return t;
        }
    }
    return std::nullopt;
}

inline quad_form parse_form(const std::string& s) {
    std::array<std::string, 3> parts;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t comma = s.find(',', pos);
        if (i < 2 && comma == std::string::npos)
            throw domain_error("form must be 'a,b,c': '" + s + "'");
        parts[i] = s.substr(pos, i < 2 ? comma - pos : std::string::npos);
        pos = comma + 1;
    }
    return {parse_integer(parts[0]), parse_integer(parts[1]), parse_integer(parts[2])};
}

inline std::string form_to_string(const quad_form& q) {
    return q.a.str() + "," + q.b.str() + "," + q.c.str();
}

}  // namespace qf
