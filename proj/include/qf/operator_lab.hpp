#pragma once

// Numerical side of the library: weighted sums over the representations of a
// single value, the discrete fractional-integral style operator they build,
// a small-window solution-count check, a supremum probe over a range of k,
// and divergence certificates for several explicit extremal families.

#include "qf/congruence.hpp"
#include "qf/factorization.hpp"
#include "qf/forms.hpp"
#include "qf/integers.hpp"
#include "qf/pell.hpp"
#include "qf/representations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace qf {

// finitely supported integer-indexed function
struct sparse_function {
    std::map<integer, double> entries;
    std::string generator;  // optional label carried into reports

    double at(const integer& k) const {
        auto it = entries.find(k);
        return it == entries.end() ? 0.0 : it->second;
    }
};

enum class sum_method { exact_finite, orbit_tail, truncated_scan };

inline const char* to_string(sum_method m) {
    switch (m) {
        case sum_method::exact_finite: return "exact_finite";
        case sum_method::orbit_tail: return "orbit_tail";
        case sum_method::truncated_scan: return "truncated_scan";
    }
    return "?";
}

// S(k) = sum over q(m, n) = k, m != 0 of |m|^(-lambda)
struct sum_report {
    quad_form form;
    integer k;
    double lambda;
    sum_method method;
    double value;
    integer truncation;  // scan bound when truncated, 0 otherwise
    double tail_bound;   // rigorous bound on the omitted mass
    std::size_t terms;   // lattice points accounted for individually
};

namespace detail {

// weight decay per orbit step once consecutive |m| grow by at least sqrt(3)
inline long double geometric_tail_ratio(double lambda) {
    return std::pow(3.0L, -0.5L * static_cast<long double>(lambda));
}

enum class walk_stop {
    keep_going,
    stop,
};

// Walks one automorph direction starting at the node after (x, y) and feeds
// every node to visit(g |alpha|, term). A term is 2 (g |alpha|)^(-lambda),
// covering the sign pair (m, n), (-m, -n); nodes with alpha = 0 carry no
// term. The growth test |alpha'|^2 >= 3 |alpha|^2 is exact. Past the orbit
// apex the step ratio is monotone toward the automorph eigenvalue, itself
// above sqrt(3) for every fundamental solution, so three observed growth
// steps certify that all unvisited terms decay geometrically; the returned
// value is that geometric closure for the direction.
template <typename Visit>
inline long double walk_direction(const unimodular& step, integer x, integer y, const integer& g,
                                  double lambda, Visit&& visit) {
    integer prev = abs(x);
    int grown = 0;
    const long double ratio = geometric_tail_ratio(lambda);
    for (;;) {
        integer nx = step.alpha * x + step.beta * y;
        integer ny = step.gamma * x + step.delta * y;
        x = std::move(nx);
        y = std::move(ny);
        integer cur = abs(x);
        long double term =
            cur == 0 ? 0.0L : 2.0L * inverse_power_weight(g * cur, lambda);
        if (cur * cur >= 3 * prev * prev)
            ++grown;
        else
            grown = 0;
        prev = cur;
        walk_stop s = visit(g * cur, term);
        if (grown >= 3 && s == walk_stop::stop) return term * ratio / (1.0L - ratio);
    }
}

inline std::int64_t isqrt64(std::int64_t v) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    if (r > 0) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

inline integer definite_m_limit(const quad_form& q, const integer& k) {
    // q positive definite, k > 0: q(m, n) = k forces m^2 <= 4ck / |disc|
    return isqrt(floor_div(4 * q.c * k, -discriminant(q)));
}

}  // namespace detail

// weighted sum over all representations of k, with a certified tail when the
// orbit structure is infinite
inline sum_report rep_weight_sum(const quad_form& q, const integer& k, double lambda,
                                 double tol = 1e-12, rep_cache* cache = nullptr) {
    if (!(lambda > 0)) throw domain_error("rep_weight_sum: lambda must be positive");
    if (!(tol > 0)) throw domain_error("rep_weight_sum: tol must be positive");
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("rep_weight_sum: square discriminant");

    if (fc == form_class::positive_definite || fc == form_class::negative_definite) {
        quad_form qq = fc == form_class::negative_definite ? quad_form{-q.a, -q.b, -q.c} : q;
        integer kk = fc == form_class::negative_definite ? -k : k;
        sum_report rep{q, k, lambda, sum_method::exact_finite, 0.0, 0, 0.0, 0};
        if (kk <= 0) return rep;
        long double acc = 0.0L;
        for (const representation& r : enumerate_reps_bounded(qq, kk, detail::definite_m_limit(qq, kk))) {
            acc += inverse_power_weight(r.m, lambda);
            ++rep.terms;
        }
        rep.value = static_cast<double>(acc);
        return rep;
    }

    sum_report rep{q, k, lambda, sum_method::orbit_tail, 0.0, 0, 0.0, 0};
    quad_form q0 = q;
    integer k0 = k;
    integer sigma = content(q);
    if (sigma > 1) {
        if (k % sigma != 0) return rep;
        q0 = {q.a / sigma, q.b / sigma, q.c / sigma};
        k0 = k / sigma;
    }
    std::vector<rep_class> classes = rep_classes_cached(q0, k0, cache);
    if (std::none_of(classes.begin(), classes.end(),
                     [](const rep_class& c) { return c.witness.has_value(); }))
        return rep;
    detail::orbit_walk walk = detail::walk_matrices(q0);
    long double acc = 0.0L, tail = 0.0L;
    std::size_t terms = 0;
    for (const rep_class& cls : classes) {
        if (!cls.witness) continue;
        integer x = cls.witness->alpha, y = cls.witness->gamma;
        if (x != 0) {
            acc += 2.0L * inverse_power_weight(cls.g * abs(x), lambda);
            terms += 2;
        }
        for (const unimodular* dir : {&walk.fwd, &walk.bwd}) {
            tail += detail::walk_direction(
                *dir, x, y, cls.g, lambda,
                [&](const integer&, long double term) {
                    if (term != 0.0L) {
                        acc += term;
                        terms += 2;
                    }
                    return (acc > 0.0L && term < static_cast<long double>(tol) * acc)
                               ? detail::walk_stop::stop
                               : detail::walk_stop::keep_going;
                });
        }
    }
    rep.value = static_cast<double>(acc);
    rep.tail_bound = static_cast<double>(tail);
    rep.terms = terms;
    return rep;
}

// rigorous upper bound on the weight mass at |m| > bound, via the same orbit
// walk (indefinite) or the exact finite remainder (definite)
inline double orbit_tail_beyond(const quad_form& q, const integer& k, double lambda,
                                const integer& bound, rep_cache* cache = nullptr) {
    if (!(lambda > 0)) throw domain_error("orbit_tail_beyond: lambda must be positive");
    if (bound < 1) throw domain_error("orbit_tail_beyond: bound must be >= 1");
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("orbit_tail_beyond: square discriminant");

    if (fc == form_class::positive_definite || fc == form_class::negative_definite) {
        quad_form qq = fc == form_class::negative_definite ? quad_form{-q.a, -q.b, -q.c} : q;
        integer kk = fc == form_class::negative_definite ? -k : k;
        if (kk <= 0) return 0.0;
        long double acc = 0.0L;
        for (const representation& r : enumerate_reps_bounded(qq, kk, detail::definite_m_limit(qq, kk)))
            if (abs(r.m) > bound) acc += inverse_power_weight(r.m, lambda);
        return static_cast<double>(acc);
    }

    quad_form q0 = q;
    integer k0 = k;
    integer sigma = content(q);
    if (sigma > 1) {
        if (k % sigma != 0) return 0.0;
        q0 = {q.a / sigma, q.b / sigma, q.c / sigma};
        k0 = k / sigma;
    }
    std::vector<rep_class> classes = rep_classes_cached(q0, k0, cache);
    if (std::none_of(classes.begin(), classes.end(),
                     [](const rep_class& c) { return c.witness.has_value(); }))
        return 0.0;
    detail::orbit_walk walk = detail::walk_matrices(q0);
    long double acc = 0.0L;
    for (const rep_class& cls : classes) {
        if (!cls.witness) continue;
        integer x = cls.witness->alpha, y = cls.witness->gamma;
        if (x != 0 && cls.g * abs(x) > bound)
            acc += 2.0L * inverse_power_weight(cls.g * abs(x), lambda);
        for (const unimodular* dir : {&walk.fwd, &walk.bwd}) {
            acc += detail::walk_direction(
                *dir, x, y, cls.g, lambda, [&](const integer& gm, long double term) {
                    if (term != 0.0L && gm > bound) acc += term;
                    return gm > bound ? detail::walk_stop::stop : detail::walk_stop::keep_going;
                });
        }
    }
    return static_cast<double>(acc);
}

// direct truncated scan over 1 <= |m| <= bound, independent of the orbit
// machinery; the tail bound certifies what the truncation can miss
inline sum_report rep_weight_sum_scan(const quad_form& q, const integer& k, double lambda,
                                      const integer& bound) {
    if (!(lambda > 0)) throw domain_error("rep_weight_sum_scan: lambda must be positive");
    if (bound < 1) throw domain_error("rep_weight_sum_scan: bound must be >= 1");
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("rep_weight_sum_scan: square discriminant");
    sum_report rep{q, k, lambda, sum_method::truncated_scan, 0.0, bound, 0.0, 0};
    long double acc = 0.0L;

    // everything fits comfortably in 64 bits for typical scans; fall back to
    // exact big-integer slices otherwise
    integer worst = abs(discriminant(q)) * bound * bound + 4 * abs(q.c) * abs(k) +
                    2 * abs(q.b) * bound + 2 * abs(q.c);
    if (q.c != 0 && worst < (integer(1) << 60)) {
        const std::int64_t d64 = discriminant(q).convert_to<std::int64_t>();
        const std::int64_t b64 = q.b.convert_to<std::int64_t>();
        const std::int64_t c64 = q.c.convert_to<std::int64_t>();
        const std::int64_t fourck = 4 * c64 * k.convert_to<std::int64_t>();
        const std::int64_t mmax = bound.convert_to<std::int64_t>();
        for (std::int64_t am = 1; am <= mmax; ++am) {
            std::int64_t dd = d64 * am * am + fourck;
            if (dd < 0) continue;
            std::int64_t s = detail::isqrt64(dd);
            if (s * s != dd) continue;
            long double w = inverse_power_weight(integer(am), lambda);
            for (std::int64_t m : {am, -am}) {
                for (std::int64_t num : {-b64 * m + s, -b64 * m - s}) {
                    if (num % (2 * c64) == 0) {
                        acc += w;
                        ++rep.terms;
                    }
                    if (s == 0) break;
                }
            }
        }
    } else {
        for (integer am = 1; am <= bound; ++am) {
            long double w = inverse_power_weight(am, lambda);
            for (int sgn : {1, -1}) {
                integer m = sgn > 0 ? am : -am;
                std::size_t hits = solve_n(q, k, m).size();
                acc += w * static_cast<long double>(hits);
                rep.terms += hits;
            }
        }
    }
    rep.value = static_cast<double>(acc);
    rep.tail_bound = orbit_tail_beyond(q, k, lambda, bound);
    return rep;
}

// solution count over the window |m| <= (|k| / disc^2)^(1/4)
struct lemma_check_report {
    quad_form form;
    integer k;
    integer window;
    integer count;
    bool pass;  // count <= 4
};

inline lemma_check_report lemma_window_check(const quad_form& q, const integer& k) {
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("lemma_window_check: square discriminant");
    integer d = discriminant(q);
    integer w = iroot4(abs(k) / (d * d));
    integer count = 0;
    for (integer m = -w; m <= w; ++m) count += integer(solve_n(q, k, m).size());
    return {q, k, w, count, count <= 4};
}

// (I f)(n) = sum over 1 <= |m| <= bound of f(q(m, n)) |m|^(-lambda)
inline std::vector<std::pair<integer, double>> apply_operator(const quad_form& q,
                                                              const sparse_function& f,
                                                              double lambda, const integer& n_lo,
                                                              const integer& n_hi,
                                                              const integer& bound) {
    if (!(lambda > 0)) throw domain_error("apply_operator: lambda must be positive");
    if (n_lo > n_hi) throw domain_error("apply_operator: empty window");
    if (bound < 1) throw domain_error("apply_operator: bound must be >= 1");
    std::vector<std::pair<integer, double>> out;
    for (integer n = n_lo; n <= n_hi; ++n) {
        long double acc = 0.0L;
        for (integer am = 1; am <= bound; ++am) {
            for (int sgn : {1, -1}) {
                integer m = sgn > 0 ? am : -am;
                double fv = f.at(eval(q, m, n));
                if (fv != 0.0)
                    acc += static_cast<long double>(fv) * inverse_power_weight(am, lambda);
            }
        }
        out.emplace_back(n, static_cast<double>(acc));
    }
    return out;
}

// l^p norm of the operator output over the window; p = infinity for the sup
inline double weighted_norm_estimate(const quad_form& q, const sparse_function& f, double lambda,
                                     double p, const integer& n_lo, const integer& n_hi,
                                     const integer& bound) {
    if (!(p >= 1))
        throw domain_error("weighted_norm_estimate: p must be >= 1 (or infinity)");
    auto vals = apply_operator(q, f, lambda, n_lo, n_hi, bound);
    if (std::isinf(p)) {
        double best = 0.0;
        for (const auto& [n, v] : vals) best = std::max(best, std::fabs(v));
        return best;
    }
    long double acc = 0.0L;
    for (const auto& [n, v] : vals)
        acc += std::pow(static_cast<long double>(std::fabs(v)), static_cast<long double>(p));
    return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

// for nonnegative f the l^1 mass of the operator output collapses to
// sum_k f(k) S(k); exact up to the per-k tail bounds
inline double norm1_exact(const quad_form& q, const sparse_function& f, double lambda,
                          double tol = 1e-12, rep_cache* cache = nullptr) {
    long double acc = 0.0L;
    for (const auto& [k, v] : f.entries) {
        if (v < 0) throw domain_error("norm1_exact: requires f >= 0");
        if (v == 0.0 || k == 0) continue;
        acc += static_cast<long double>(v) *
               static_cast<long double>(rep_weight_sum(q, k, lambda, tol, cache).value);
    }
    return static_cast<double>(acc);
}

// supremum of S(k) over 1 <= |k| <= max_k
struct probe_result {
    quad_form form;
    double lambda;
    integer max_k;
    double sup;
    integer argmax;
};

inline probe_result bound_constant_probe(const quad_form& q, double lambda, const integer& max_k,
                                         unsigned jobs = 1, rep_cache* cache = nullptr) {
    if (!(lambda > 0)) throw domain_error("bound_constant_probe: lambda must be positive");
    if (max_k < 1) throw domain_error("bound_constant_probe: max_k must be >= 1");
    form_class fc = classify(q);
    if (fc == form_class::square_discriminant)
        throw unsupported_class("bound_constant_probe: square discriminant");
    std::vector<integer> ks;
    if (fc == form_class::positive_definite) {
        for (integer k = 1; k <= max_k; ++k) ks.push_back(k);
    } else if (fc == form_class::negative_definite) {
        for (integer k = 1; k <= max_k; ++k) ks.push_back(-k);
    } else {
        for (integer k = 1; k <= max_k; ++k) {
            ks.push_back(k);
            ks.push_back(-k);
        }
    }
    // better value wins; ties prefer the smaller |k|, then the positive k
    auto better = [](double va, const integer& ka, double vb, const integer& kb) {
        if (va != vb) return va > vb;
        if (abs(ka) != abs(kb)) return abs(ka) < abs(kb);
        return ka > kb;
    };
    unsigned nthreads = std::max(1u, jobs);
    std::vector<std::pair<double, integer>> best(nthreads, {-1.0, 0});
    auto run = [&](unsigned t) {
        for (std::size_t i = t; i < ks.size(); i += nthreads) {
            double v = rep_weight_sum(q, ks[i], lambda, 1e-12, cache).value;
            if (best[t].second == 0 || better(v, ks[i], best[t].first, best[t].second))
                best[t] = {v, ks[i]};
        }
    };
    if (nthreads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }
    std::pair<double, integer> top{-1.0, 0};
    for (const auto& b : best)
        if (b.second != 0 && (top.second == 0 || better(b.first, b.second, top.first, top.second)))
            top = b;
    return {q, lambda, max_k, top.first, top.second};
}

// one certified step of a divergence family
struct certificate_term {
    integer index;   // step number within the family
    integer k;       // value represented at this step
    integer m, n;    // one explicit representation, re-substituted on emission
    integer count;   // certified lower bound on representations contributing
    double weight;   // per-representation weight lower bound
    double term;     // contribution to the partial sum
    bool verified;
};

struct divergence_certificate {
    std::string family;
    integer steps;
    double partial_sum_lower_bound;
    std::string predicted_growth;
    double comparison;  // predicted growth formula evaluated at this step count
    std::string notes;
    std::vector<certificate_term> terms;
};

namespace detail {

inline long double harmonic(const integer& n) {
    long double h = 0.0L;
    for (integer j = 1; j <= n; ++j) h += 1.0L / static_cast<long double>(j.convert_to<double>());
    return h;
}

// first `count` primes p with p % modulus in `residues`
inline std::vector<integer> primes_with_residue(unsigned count, unsigned modulus,
                                                std::initializer_list<unsigned> residues) {
    std::vector<integer> out;
    for (integer p = 3; out.size() < count; p += 2) {
        unsigned r = static_cast<unsigned>(p % modulus);
        bool ok = false;
        for (unsigned want : residues) ok = ok || r == want;
        if (ok && is_probable_prime(p)) out.push_back(p);
    }
    return out;
}

// p = x^2 + y^2 for a prime p = 1 (mod 4)
inline std::pair<integer, integer> two_square_split(const integer& p) {
    for (integer x = 1; x * x * 2 <= p; ++x) {
        integer y2 = p - x * x;
        if (is_square(y2)) return {x, isqrt(y2)};
    }
    throw invariant_violation("two_square_split: no decomposition found");
}

}  // namespace detail

// Sums of x^2 + y^2 against f(P^j) = j^(-2) with a logarithmic weight in
// place of the power weight. Each step certifies at least 2 d(k_j) - 2
// representations of k_j = P^j off the n-axis, where P is the product of
// r + 1 primes that are 1 mod 4; the divisor-count total is cross-checked by
// brute force while k_j stays small, and one explicit representation is
// carried per step.
inline divergence_certificate jacobi_family(unsigned r, const integer& steps) {
    if (r < 1) throw domain_error("jacobi_family: r must be >= 1");
    if (steps < 1) throw domain_error("jacobi_family: steps must be >= 1");
    const quad_form q{1, 0, 1};
    std::vector<integer> ps = detail::primes_with_residue(r + 1, 4, {1});
    integer big_p = 1;
    for (const integer& p : ps) big_p *= p;
    // Gaussian factor of each prime; their product powers give explicit reps
    std::vector<std::pair<integer, integer>> zs;
    for (const integer& p : ps) zs.push_back(detail::two_square_split(p));

    divergence_certificate cert;
    cert.family = "jacobi";
    cert.steps = steps;
    cert.predicted_growth = "(2 / ln(P)^r) * H_J, P = " + big_p.str();
    cert.notes = "r + 1 primes that are 1 mod 4; the two-prime case is the base construction";
    const long double lnp = log_integer(big_p);
    long double partial = 0.0L;

    integer zr = 1, zi = 0;  // running product of the Gaussian factors
    integer kj = 1;
    for (integer j = 1; j <= steps; ++j) {
        kj *= big_p;
        for (const auto& [x, y] : zs) {
            integer nr = zr * x - zi * y;
            integer ni = zr * y + zi * x;
            zr = std::move(nr);
            zi = std::move(ni);
        }
        integer m = zr != 0 ? zr : zi;
        integer n = zr != 0 ? zi : zr;
        if (eval(q, m, n) != kj) throw invariant_violation("jacobi_family: witness rejected");
        integer dk = 1;  // divisor count of kj from the known factorization
        for (unsigned i = 0; i <= r; ++i) dk *= j + 1;
        // 4 d(k) lattice points in total, at most 2 on the n-axis, so at
        // least 4 d - 2 count; the certificate uses the floor 2 d - 2
        integer used = 2 * dk - 2;
        if (kj <= 1000000) {
            // exact total: four representations per divisor, axis pairs included
            integer root = isqrt(kj);
            integer total = integer(enumerate_reps_bounded(q, kj, root).size());
            if (root * root == kj) total += 2;
            if (total != 4 * dk) throw invariant_violation("jacobi_family: count mismatch");
        }
        // every representation has |m| <= sqrt(k_j), so the r-fold log weight
        // is at least (1 / ln k_j)^r = (1 / (j ln P))^r
        long double jd = static_cast<long double>(j.convert_to<double>());
        long double weight = std::pow(1.0L / (jd * lnp), static_cast<long double>(r));
        long double term =
            (1.0L / (jd * jd)) * static_cast<long double>(used.convert_to<double>()) * weight;
        partial += term;
        cert.terms.push_back({j, kj, m, n, used, static_cast<double>(weight), static_cast<double>(term),
                              true});
    }
    cert.partial_sum_lower_bound = static_cast<double>(partial);
    cert.comparison = static_cast<double>(
        2.0L / std::pow(lnp, static_cast<long double>(r)) * detail::harmonic(steps));
    return cert;
}

// Pell-orbit family on m^2 - 8 n^2 = 4: the automorph orbit of (2, 0) gives
// infinitely many representations of 4 with doubly exponential m, so the
// logarithmic weight sums like a harmonic series against f = delta_4.
inline divergence_certificate pell_log_counterexample(const integer& steps) {
    if (steps < 1) throw domain_error("pell_log_counterexample: steps must be >= 1");
    const quad_form q{1, 0, -8};
    divergence_certificate cert;
    cert.family = "pell-log";
    cert.steps = steps;
    cert.predicted_growth = "(H_{J+1} - 1) / ln 6";
    cert.notes = "orbit of (2, 0) under the automorph [3 8; 1 3] of m^2 - 8 n^2";
    long double partial = 0.0L;
    integer t = 2, u = 0;
    integer pow6 = 1;
    for (integer j = 1; j <= steps; ++j) {
        integer nt = 3 * t + 8 * u;
        integer nu = t + 3 * u;
        t = std::move(nt);
        u = std::move(nu);
        pow6 *= 6;
        if (t * t - 8 * u * u != 4) throw invariant_violation("pell_log: orbit left the conic");
        if (eval(q, t, u) != 4) throw invariant_violation("pell_log: witness rejected");
        if (t + 1 > 6 * pow6) throw invariant_violation("pell_log: growth bound broke");
        long double w = 1.0L / log_integer(t + 1);
        partial += w;
        cert.terms.push_back({j, 4, t, u, 1, static_cast<double>(w), static_cast<double>(w), true});
    }
    cert.partial_sum_lower_bound = static_cast<double>(partial);
    cert.comparison =
        static_cast<double>((detail::harmonic(steps + 1) - 1.0L) / std::log(6.0L));
    return cert;
}

// Indefinite family on m^2 - 2 n^2 with k_j = P^(2j+1) for P a product of
// r + 1 primes that are +-1 mod 8. Each square-divisor stratum contributes
// 2^(r+1) congruence classes, each class yields an explicit representative
// of the cofactor with first coordinate at most ten times the cofactor, and
// the logarithmic weights add up harmonically.
inline divergence_certificate indefinite_log_family(unsigned r, const integer& steps) {
    if (r < 1) throw domain_error("indefinite_log_family: r must be >= 1");
    if (steps < 1) throw domain_error("indefinite_log_family: steps must be >= 1");
    const quad_form q{1, 0, -2};
    std::vector<integer> ps = detail::primes_with_residue(r + 1, 8, {1, 7});
    integer big_p = 1;
    for (const integer& p : ps) big_p *= p;

    divergence_certificate cert;
    cert.family = "indefinite-log";
    cert.steps = steps;
    cert.predicted_growth = "(1 / ln(P)) * H_J, P = " + big_p.str();
    cert.notes = "r + 1 primes that are +-1 mod 8; the two-prime case is the base construction";

    const std::size_t nprimes = ps.size();
    std::vector<unsigned> jexp(nprimes);
    // classes of each cofactor value, shared across steps
    std::map<integer, std::vector<std::pair<integer, integer>>> class_reps;
    auto reps_for = [&](const integer& kp) -> const std::vector<std::pair<integer, integer>>& {
        auto it = class_reps.find(kp);
        if (it != class_reps.end()) return it->second;
        if (gamma(8, kp) != (integer(1) << (r + 1)))
            throw invariant_violation("indefinite_log_family: congruence count off");
        std::vector<std::pair<integer, integer>> reps;
        for (const congruence_solution& cs : solve_congruence(8, kp)) {
            rep_class cls{1, cs, equivalent(q, {cs.k, cs.u, cs.v}), std::nullopt};
            if (!cls.witness) throw invariant_violation("indefinite_log_family: class empty");
            auto rep = small_rep_for_class(q, cls, 10 * kp);
            if (!rep) throw invariant_violation("indefinite_log_family: no small representative");
            if (eval(q, rep->m, rep->n) != kp || rep->m < 1 || rep->m > 10 * kp)
                throw invariant_violation("indefinite_log_family: representative rejected");
            reps.emplace_back(rep->m, rep->n);
        }
        return class_reps.emplace(kp, std::move(reps)).first->second;
    };

    long double partial = 0.0L;
    integer kj = big_p;  // P^(2j+1) maintained incrementally
    const integer psq = big_p * big_p;
    for (integer j = 1; j <= steps; ++j) {
        kj *= psq;
        long double stepsum = 0.0L;
        integer used = 0;
        integer wit_m = 0, wit_n = 0;
        double min_weight = std::numeric_limits<double>::infinity();
        // iterate over exponent vectors e_i <= j defining g = prod p_i^e_i
        std::fill(jexp.begin(), jexp.end(), 0u);
        for (;;) {
            integer g = 1;
            for (std::size_t i = 0; i < nprimes; ++i)
                for (unsigned e = 0; e < jexp[i]; ++e) g *= ps[i];
            integer kp = kj / (g * g);
            for (const auto& [alpha, gammav] : reps_for(kp)) {
                integer m = g * alpha, n = g * gammav;
                if (eval(q, m, n) != kj)
                    throw invariant_violation("indefinite_log_family: scaled witness rejected");
                double w = static_cast<double>(1.0L / log_integer(m + 1));
                if (w < min_weight) min_weight = w;
                if (wit_m == 0) {
                    wit_m = m;
                    wit_n = n;
                }
                stepsum += 1.0L / log_integer(m + 1);
                ++used;
            }
            // next exponent vector
            std::size_t i = 0;
            integer jj = j;
            while (i < nprimes) {
                if (integer(jexp[i]) < jj) {
                    ++jexp[i];
                    break;
                }
                jexp[i] = 0;
                ++i;
            }
            if (i == nprimes) break;
        }
        integer expected = integer(1) << (r + 1);
        for (unsigned i = 0; i <= r; ++i) expected *= j + 1;
        if (used != expected)
            throw invariant_violation("indefinite_log_family: stratum count mismatch");
        long double jd = static_cast<long double>(j.convert_to<double>());
        long double term = stepsum / (jd * jd);
        partial += term;
        cert.terms.push_back({j, kj, wit_m, wit_n, used, min_weight, static_cast<double>(term), true});
    }
    cert.partial_sum_lower_bound = static_cast<double>(partial);
    cert.comparison = static_cast<double>(detail::harmonic(steps) / log_integer(big_p));
    return cert;
}

// Sharpness family for the l^p bound at lambda = 1 - 1/p: f sits on the
// squares with slowly varying size, its p-norm converges (Cauchy tails go to
// zero) while the operator output at the origin grows like a power of ln M.
inline divergence_certificate lp_sharpness_family(double p, const integer& cutoff) {
    if (!(p > 1)) throw domain_error("lp_sharpness_family: p must be > 1");
    if (cutoff < 2) throw domain_error("lp_sharpness_family: cutoff must be >= 2");
    const quad_form q{1, 0, 1};
    const double lambda = 1.0 - 1.0 / p;
    const long double e = (1.0L + static_cast<long double>(p)) / (2.0L * static_cast<long double>(p));
    divergence_certificate cert;
    cert.family = "lp-sharp";
    cert.steps = cutoff;
    cert.predicted_growth = "(ln M)^(1 - (1+p)/(2p)) up to constants";
    cert.notes = "comparison field carries the convergent ||f||_p^p partial sum";
    long double partial = 0.0L, norm_pp = 0.0L;
    for (integer m = 2; m <= cutoff; ++m) {
        integer k = m * m;
        if (eval(q, m, 0) != k) throw invariant_violation("lp_sharpness_family: witness rejected");
        long double md = static_cast<long double>(m.convert_to<double>());
        long double lj = std::log(md);
        long double fval = std::pow(md, -1.0L / static_cast<long double>(p)) * std::pow(lj, -e);
        long double w = inverse_power_weight(m, lambda);
        long double term = 2.0L * fval * w;
        partial += term;
        norm_pp += std::pow(fval, static_cast<long double>(p));
        cert.terms.push_back({m, k, m, 0, 2, static_cast<double>(w), static_cast<double>(term), true});
    }
    cert.partial_sum_lower_bound = static_cast<double>(partial);
    cert.comparison = static_cast<double>(norm_pp);
    return cert;
}

// Divergence along a rational zero line of a square-discriminant form; the
// case with no off-axis zeros falls back to the constant column at m = 1.
inline divergence_certificate square_disc_zero_line(const quad_form& q, double lambda,
                                                    const integer& steps) {
    if (!(lambda > 0)) throw domain_error("square_disc_zero_line: lambda must be positive");
    if (steps < 1) throw domain_error("square_disc_zero_line: steps must be >= 1");
    if (classify(q) != form_class::square_discriminant)
        throw domain_error("square_disc_zero_line: discriminant must be a square");
    if (is_zero_form(q))
        throw domain_error("square_disc_zero_line: zero form has no line structure");

    divergence_certificate cert;
    cert.family = "square-disc-zero-line";
    cert.steps = steps;
    long double partial = 0.0L;

    if (q.b == 0 && q.c == 0) {
        // no zeros off the n-axis; the column m = 1 represents a at every n
        cert.predicted_growth = "J (constant terms at f = delta_a)";
        cert.notes = "q depends on m alone; target value is a = " + q.a.str();
        for (integer j = 1; j <= steps; ++j) {
            if (eval(q, 1, j) != q.a)
                throw invariant_violation("square_disc_zero_line: witness rejected");
            partial += 1.0L;
            cert.terms.push_back({j, q.a, 1, j, 1, 1.0, 1.0, true});
        }
        cert.partial_sum_lower_bound = static_cast<double>(partial);
        cert.comparison = static_cast<double>(steps.convert_to<double>());
        return cert;
    }

    zero_set zs = zero_representations(q);
    std::vector<std::pair<integer, integer>> dirs;
    for (const auto& d : zs.directions)
        if (d.first != 0) dirs.push_back(d);
    if (dirs.empty()) throw invariant_violation("square_disc_zero_line: no usable line");
    long double coeff = 0.0L;
    for (const auto& d : dirs) coeff += inverse_power_weight(d.first, lambda);
    cert.predicted_growth =
        lambda == 1.0 ? "sum(1/|d1|) * ln J over the zero lines" : "J^(1 - lambda) scale";
    cert.notes = "zero lines with nonzero first coordinate; f = delta_0";
    for (integer j = 1; j <= steps; ++j) {
        long double term = 0.0L;
        double min_w = std::numeric_limits<double>::infinity();
        for (const auto& d : dirs) {
            integer m = d.first * j, n = d.second * j;
            if (eval(q, m, n) != 0)
                throw invariant_violation("square_disc_zero_line: point off the line");
            long double w = inverse_power_weight(m, lambda);
            term += w;
            min_w = std::min(min_w, static_cast<double>(w));
        }
        partial += term;
        cert.terms.push_back({j, 0, dirs[0].first * j, dirs[0].second * j, integer(dirs.size()),
                              min_w, static_cast<double>(term), true});
    }
    cert.partial_sum_lower_bound = static_cast<double>(partial);
    long double hj = detail::harmonic(steps);
    cert.comparison = static_cast<double>(lambda == 1.0 ? coeff * hj : partial);
    return cert;
}

}  // namespace qf
