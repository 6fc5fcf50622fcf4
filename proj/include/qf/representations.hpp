#pragma once

// Representations q(m, n) = k and their orbit structure. Proper
// representations with m != 0 fall into finitely many classes indexed by a
// square divisor g^2 of k and a congruence solution u^2 = disc (mod 4 k/g^2);
// each class is either empty or a full orbit of the automorphism group. On
// top of the class decomposition sit the concrete searches: bounded
// enumeration, brute force scans, and the walk along an indefinite orbit to
// a representative with small first coordinate.

#include "qf/congruence.hpp"
#include "qf/factorization.hpp"
#include "qf/forms.hpp"
#include "qf/integers.hpp"
#include "qf/pell.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

namespace qf {

struct representation {
    integer m, n;
    integer k;  // the represented value, q(m, n)
    integer g;  // gcd(|m|, |n|); zero only for (0, 0)
};

inline bool operator==(const representation& x, const representation& y) {
    return x.m == y.m && x.n == y.n && x.k == y.k && x.g == y.g;
}

/// canonical listing order: |m| ascending, positive m before negative, n ascending
inline bool rep_order(const representation& x, const representation& y) {
    integer am = abs(x.m), bm = abs(y.m);
    if (am != bm) return am < bm;
    if (x.m != y.m) return x.m > y.m;
    return x.n < y.n;
}

// all n with q(m, n) = k for a fixed m; requires c != 0, or c == 0 with
// b != 0 and m != 0 (otherwise the n-slice is degenerate)
inline std::vector<integer> solve_n(const quad_form& q, const integer& k, const integer& m) {
    std::vector<integer> out;
    if (q.c != 0) {
        integer disc = discriminant(q) * m * m + 4 * q.c * k;
        if (disc < 0) return out;
        integer s = isqrt(disc);
        if (s * s != disc) return out;
        integer den = 2 * q.c;
        integer num_pos = -q.b * m + s, num_neg = -q.b * m - s;
        for (const integer& num : {num_pos, num_neg}) {
            if (num % den == 0) out.push_back(num / den);
            if (s == 0) break;
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    if (q.b == 0 || m == 0) throw domain_error("solve_n: degenerate slice");
    integer num = k - q.a * m * m, den = q.b * m;
    if (num % den == 0) out.push_back(num / den);
    return out;
}

// all (m, n) with q(m, n) = k and 1 <= |m| <= bound, in canonical order
inline std::vector<representation> enumerate_reps_bounded(const quad_form& q, const integer& k,
                                                          const integer& bound) {
    if (q.b == 0 && q.c == 0)
        throw domain_error("enumerate_reps_bounded: form depends on m alone");
    std::vector<representation> out;
    for (integer am = 1; am <= bound; ++am) {
        for (int s : {1, -1}) {
            integer m = s > 0 ? am : integer(-am);
            for (const integer& n : solve_n(q, k, m))
                out.push_back({m, n, k, gcd(am, abs(n))});
        }
    }
    return out;
}

// every (m, n) with |m| <= m_bound, |n| <= n_bound and q(m, n) = k,
// including the m = 0 column; canonical order
inline std::vector<representation> brute_force_reps(const quad_form& q, const integer& k,
                                                    const integer& m_bound,
                                                    const integer& n_bound) {
    std::vector<representation> out;
    for (integer m = -m_bound; m <= m_bound; ++m)
        for (integer n = -n_bound; n <= n_bound; ++n)
            if (eval(q, m, n) == k) out.push_back({m, n, k, gcd(abs(m), abs(n))});
    std::sort(out.begin(), out.end(), rep_order);
    return out;
}

// structure of the zero set {q = 0}
enum class zero_set_kind { origin_only, all_lattice, lines };

struct zero_set {
    zero_set_kind kind;
    std::vector<std::pair<integer, integer>> directions;  // primitive, for lines
};

namespace detail {

inline std::pair<integer, integer> primitive_direction(integer m, integer n) {
    integer g = gcd(abs(m), abs(n));
    if (g != 0) {
        m /= g;
        n /= g;
    }
    if (m < 0 || (m == 0 && n < 0)) {
        m = -m;
        n = -n;
    }
    return {m, n};
}

}  // namespace detail

inline zero_set zero_representations(const quad_form& q) {
    switch (classify(q)) {
        case form_class::positive_definite:
        case form_class::negative_definite:
        case form_class::indefinite_nonsquare:
            return {zero_set_kind::origin_only, {}};
        case form_class::square_discriminant:
            break;
    }
    if (is_zero_form(q)) return {zero_set_kind::all_lattice, {}};
    std::vector<std::pair<integer, integer>> dirs;
    if (q.c != 0) {
        integer d = isqrt(discriminant(q));
        dirs.push_back(detail::primitive_direction(2 * q.c, -q.b + d));
        dirs.push_back(detail::primitive_direction(2 * q.c, -q.b - d));
    } else {
        // q(m, n) = m (a m + b n): the n-axis, plus a second line when b != 0
        dirs.push_back({0, 1});
        if (q.b != 0) dirs.push_back(detail::primitive_direction(q.b, -q.a));
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    return {zero_set_kind::lines, dirs};
}

// one class of proper representations scaled by g
struct rep_class {
    integer g;
    congruence_solution base;              // (k/g^2, u, v)
    std::optional<unimodular> witness;     // q -> base form; empty class otherwise
    std::optional<unimodular> orbit_anchor;  // positive first column, when computed
};

inline std::optional<unimodular> leftmost_positive_matrix(const quad_form& q, const unimodular& w);

// decomposition of the m != 0 representations of k by q into orbit classes
inline std::vector<rep_class> rep_classes(const quad_form& q_in, const integer& k_in) {
    if (k_in == 0) throw domain_error("rep_classes: k must be nonzero");
    quad_form q = q_in;
    integer k = k_in;
    integer sigma = content(q);
    if (sigma == 0) throw unsupported_class("rep_classes: zero form");
    if (sigma > 1) {
        if (k % sigma != 0) return {};
        q = {q.a / sigma, q.b / sigma, q.c / sigma};
        k /= sigma;
    }
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("rep_classes: square discriminant");
    if (fc == form_class::negative_definite) {
        // (m, n) represents k by q exactly when it represents -k by -q
        q = {-q.a, -q.b, -q.c};
        k = -k;
    }
    integer delta = discriminant(q);
    bool diagonal_indefinite =
        fc == form_class::indefinite_nonsquare && q.b == 0 && q.a > 0 && q.c < 0;
    std::vector<rep_class> out;
    for (const integer& g : square_divisor_roots(k)) {
        integer k2 = k / (g * g);
        for (const congruence_solution& cs : solve_congruence(delta, k2)) {
            rep_class rc{g, cs, std::nullopt, std::nullopt};
            rc.witness = equivalent(q, {cs.k, cs.u, cs.v});
            if (rc.witness && diagonal_indefinite)
                rc.orbit_anchor = leftmost_positive_matrix(q, *rc.witness);
            out.push_back(std::move(rc));
        }
    }
    std::sort(out.begin(), out.end(), [](const rep_class& x, const rep_class& y) {
        if (x.g != y.g) return x.g < y.g;
        return x.base.u < y.base.u;
    });
    return out;
}

namespace detail {

// sign of alpha*sqrt(delta) + 2|c|*gamma, exactly; this is the coordinate of
// (alpha, gamma) along the expanding eigendirection of the automorph of a
// diagonal indefinite form with a > 0 > c
inline int expanding_component_sign(const integer& alpha, const integer& gamma,
                                    const integer& delta, const integer& c) {
    if (alpha >= 0 && gamma >= 0) return (alpha == 0 && gamma == 0) ? 0 : 1;
    if (alpha <= 0 && gamma <= 0) return -1;
    integer lhs = alpha * alpha * delta;        // sign carried by alpha
    integer rhs = 4 * c * c * gamma * gamma;    // sign carried by gamma
    if (lhs == rhs) return 0;
    if (alpha > 0) return lhs > rhs ? 1 : -1;
    return rhs > lhs ? 1 : -1;
}

struct orbit_walk {
    unimodular fwd, bwd;  // automorph generator and its inverse
};

inline orbit_walk walk_matrices(const quad_form& q) {
    pell_solution s = pell4_fundamental(discriminant(q));
    unimodular a = automorph_from_pell(q, s.t, s.u);
    return {a, inverse(a)};
}

inline std::pair<integer, integer> apply_column(const unimodular& t, const integer& x,
                                                const integer& y) {
    return {t.alpha * x + t.beta * y, t.gamma * x + t.delta * y};
}

}  // namespace detail

// slides w along the automorph orbit to the matrix with both first-column
// entries positive; requires q diagonal with a > 0 > c, primitive, and w a
// change of variables from q to some (k, u, v) with k != 0
inline std::optional<unimodular> leftmost_positive_matrix(const quad_form& q,
                                                          const unimodular& w_in) {
    if (q.b != 0 || q.a <= 0 || q.c >= 0)
        throw domain_error("leftmost_positive_matrix: need a diagonal form with a > 0 > c");
    if (!is_primitive(q)) throw domain_error("leftmost_positive_matrix: form must be primitive");
    if (!is_unimodular(w_in)) throw domain_error("leftmost_positive_matrix: matrix not unimodular");
    integer delta = discriminant(q);
    detail::orbit_walk walk = detail::walk_matrices(q);
    unimodular w = w_in;
    int s = detail::expanding_component_sign(w.alpha, w.gamma, delta, q.c);
    if (s == 0) throw invariant_violation("leftmost_positive_matrix: column on an asymptote");
    if (s < 0) w = negate(w);
    unsigned cap = 64 * (bit_length(abs(w.alpha) + abs(w.gamma) + 2) + 4);
    unsigned steps = 0;
    while (!(w.alpha > 0 && w.gamma > 0)) {
        w = walk.fwd * w;
        if (++steps > cap) return std::nullopt;
    }
    for (;;) {
        unimodular prev = walk.bwd * w;
        if (prev.alpha > 0 && prev.gamma > 0) {
            w = prev;
            if (++steps > cap) return std::nullopt;
            continue;
        }
        return w;
    }
}

// walks the orbit of a representation class toward small |m| and returns the
// first member with 0 < m <= bound (scaled by the class's g). Members on the
// n-axis (second coordinate zero) count only when allow_axis is set.
inline std::optional<representation> small_rep_for_class(const quad_form& q, const rep_class& cls,
                                                         const integer& bound,
                                                         bool allow_axis = true) {
    if (!cls.witness) throw domain_error("small_rep_for_class: class is empty");
    if (q.b != 0 || q.a <= 0 || q.c >= 0)
        throw domain_error("small_rep_for_class: need a diagonal form with a > 0 > c");
    if (!is_primitive(q)) throw domain_error("small_rep_for_class: form must be primitive");
    detail::orbit_walk walk = detail::walk_matrices(q);
    integer x = cls.witness->alpha, y = cls.witness->gamma;

    auto accept = [&](const integer& m, const integer& n) -> std::optional<representation> {
        integer am = abs(m);
        if (am == 0 || am > bound) return std::nullopt;
        if (n == 0 && !allow_axis) return std::nullopt;
        integer sm = m, sn = n;
        if (sm < 0) {
            sm = -sm;
            sn = -sn;
        }
        integer k = cls.base.k * cls.g * cls.g;
        return representation{cls.g * sm, cls.g * sn, k, cls.g};
    };

    if (auto r = accept(x, y)) return r;
    // |m| along the orbit is unimodal, so follow the decreasing direction
    auto [fx, fy] = detail::apply_column(walk.fwd, x, y);
    auto [bx, by] = detail::apply_column(walk.bwd, x, y);
    bool forward = abs(fx) < abs(bx);
    integer cx = forward ? fx : bx, cy = forward ? fy : by;
    const unimodular& step = forward ? walk.fwd : walk.bwd;
    const unimodular& back = forward ? walk.bwd : walk.fwd;
    for (;;) {
        if (auto r = accept(cx, cy)) return r;
        auto [nx, ny] = detail::apply_column(step, cx, cy);
        if (abs(nx) < abs(cx)) {
            cx = nx;
            cy = ny;
            continue;
        }
        // cx sits at the orbit minimum of |m|; its two neighbours were
        // already visited or are about to be rejected as larger
        if (auto r = accept(nx, ny)) return r;
        auto [px, py] = detail::apply_column(back, cx, cy);
        if (auto r = accept(px, py)) return r;
        return std::nullopt;
    }
}

// thread-safe memo for rep_classes results, keyed by the form and k
class rep_cache {
public:
    std::optional<std::vector<rep_class>> get(const quad_form& q, const integer& k) const {
        std::shared_lock lock(mu_);
        auto it = map_.find(key(q, k));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void put(const quad_form& q, const integer& k, std::vector<rep_class> classes) {
        std::unique_lock lock(mu_);
        map_.emplace(key(q, k), std::move(classes));
    }

    template <typename F>
    void for_each(F&& f) const {
        std::shared_lock lock(mu_);
        for (const auto& [k, v] : map_)
            f(quad_form{std::get<0>(k), std::get<1>(k), std::get<2>(k)}, std::get<3>(k), v);
    }

    std::size_t size() const {
        std::shared_lock lock(mu_);
        return map_.size();
    }

private:
    using key_t = std::tuple<integer, integer, integer, integer>;
    static key_t key(const quad_form& q, const integer& k) { return {q.a, q.b, q.c, k}; }

    mutable std::shared_mutex mu_;
    std::map<key_t, std::vector<rep_class>> map_;
};

inline std::vector<rep_class> rep_classes_cached(const quad_form& q, const integer& k,
                                                 rep_cache* cache) {
    if (cache) {
        if (auto hit = cache->get(q, k)) return *hit;
    }
    std::vector<rep_class> out = rep_classes(q, k);
    if (cache) cache->put(q, k, out);
    return out;
}

}  // namespace qf
