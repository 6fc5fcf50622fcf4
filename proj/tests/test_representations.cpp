#include <catch2/catch_amalgamated.hpp>

#include "qf/representations.hpp"

#include <algorithm>
#include <random>

using qf::integer;
using qf::quad_form;
using qf::representation;
using qf::unimodular;

TEST_CASE("solve_n inverts the quadratic on a fixed m slice") {
    quad_form q{1, 0, 1};
    auto ns = qf::solve_n(q, integer(65), integer(4));
    REQUIRE(ns.size() == 2);
    CHECK(ns[0] == -7);
    CHECK(ns[1] == 7);
    CHECK(qf::solve_n(q, integer(65), integer(5)).empty());
    auto single = qf::solve_n(quad_form{1, 0, -2}, integer(1), integer(1));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0);
    // c = 0 linear slices
    auto lin = qf::solve_n(quad_form{1, 3, 0}, integer(10), integer(1));
    REQUIRE(lin.size() == 1);
    CHECK(lin[0] == 3);
    CHECK_THROWS_AS(qf::solve_n(quad_form{1, 3, 0}, integer(10), integer(0)), qf::domain_error);
    CHECK_THROWS_AS(qf::solve_n(quad_form{1, 0, 0}, integer(10), integer(1)), qf::domain_error);
}

TEST_CASE("enumerate_reps_bounded lists the sixteen ways to write 65") {
    auto reps = qf::enumerate_reps_bounded(quad_form{1, 0, 1}, integer(65), integer(8));
    REQUIRE(reps.size() == 16);
    CHECK(reps.front() == representation{1, -8, 65, 1});
    CHECK(reps.back() == representation{-8, 1, 65, 1});
    for (const representation& r : reps) {
        CHECK(qf::eval(quad_form{1, 0, 1}, r.m, r.n) == 65);
        CHECK(r.g == gcd(abs(r.m), abs(r.n)));
    }
    CHECK(std::is_sorted(reps.begin(), reps.end(), qf::rep_order));
}

TEST_CASE("enumerate agrees with a rectangle scan on mixed forms") {
    std::vector<quad_form> forms{{1, 0, 1}, {1, 1, 1}, {2, 3, 4}, {1, 0, -2}, {3, 1, -5}};
    std::mt19937 rng(53);
    for (const quad_form& q : forms) {
        for (int i = 0; i < 40; ++i) {
            integer k = integer(rng() % 200) - 100;
            integer bound = 25;
            auto fast = qf::enumerate_reps_bounded(q, k, bound);
            auto brute = qf::brute_force_reps(q, k, bound, integer(600));
            std::erase_if(brute, [](const representation& r) { return r.m == 0; });
            CHECK(fast == brute);
        }
    }
}

TEST_CASE("brute_force_reps includes the m = 0 column") {
    auto all = qf::brute_force_reps(quad_form{1, 0, 1}, integer(25), integer(6), integer(6));
    // (0,+-5), (+-5,0), (+-3,+-4), (+-4,+-3)
    CHECK(all.size() == 12);
    auto nonaxis = qf::enumerate_reps_bounded(quad_form{1, 0, 1}, integer(25), integer(6));
    CHECK(nonaxis.size() == 10);
}

TEST_CASE("zero_representations classifies the null vectors") {
    CHECK(qf::zero_representations(quad_form{1, 0, 1}).kind == qf::zero_set_kind::origin_only);
    CHECK(qf::zero_representations(quad_form{1, 0, -2}).kind == qf::zero_set_kind::origin_only);
    CHECK(qf::zero_representations(quad_form{0, 0, 0}).kind == qf::zero_set_kind::all_lattice);
    CHECK(qf::zero_representations(quad_form{1, 3, 2}).kind == qf::zero_set_kind::lines);
}

TEST_CASE("zero_representations returns primitive directions on the zero lines") {
    auto dirs = qf::zero_representations(quad_form{1, 3, 2}).directions;
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[0] == std::pair<integer, integer>{1, -1});
    CHECK(dirs[1] == std::pair<integer, integer>{2, -1});
    for (const auto& [dm, dn] : dirs) CHECK(qf::eval(quad_form{1, 3, 2}, dm, dn) == 0);

    auto axis = qf::zero_representations(quad_form{0, 1, 0}).directions;
    REQUIRE(axis.size() == 2);
    CHECK(axis[0] == std::pair<integer, integer>{0, 1});
    CHECK(axis[1] == std::pair<integer, integer>{1, 0});

    auto one_line = qf::zero_representations(quad_form{0, 1, 2}).directions;
    CHECK(one_line.size() == 2);
    for (const auto& [dm, dn] : one_line) CHECK(qf::eval(quad_form{0, 1, 2}, dm, dn) == 0);
}

TEST_CASE("rep_classes splits 65 into four unit classes") {
    auto classes = qf::rep_classes(quad_form{1, 0, 1}, integer(65));
    REQUIRE(classes.size() == 4);
    for (const qf::rep_class& c : classes) {
        CHECK(c.g == 1);
        REQUIRE(c.witness.has_value());
        quad_form target{c.base.k, c.base.u, c.base.v};
        CHECK(qf::apply_transform(quad_form{1, 0, 1}, *c.witness) == target);
    }
}

TEST_CASE("rep_classes covers strata by square divisors") {
    // 45 has no primitive representations as a sum of two squares; every
    // lattice point sits over the g = 3 stratum (45 / 9 = 5, two classes)
    auto classes = qf::rep_classes(quad_form{1, 0, 1}, integer(45));
    REQUIRE(classes.size() == 2);
    for (const auto& c : classes) {
        CHECK(c.g == 3);
        CHECK(c.base.k == 5);
        CHECK(c.witness.has_value());
    }
}

TEST_CASE("rep_classes on the indefinite base form") {
    auto classes = qf::rep_classes(quad_form{1, 0, -2}, integer(7));
    REQUIRE(classes.size() == 2);
    for (const qf::rep_class& c : classes) {
        CHECK(c.g == 1);
        REQUIRE(c.witness.has_value());
        REQUIRE(c.orbit_anchor.has_value());
        CHECK(c.orbit_anchor->alpha > 0);
        CHECK(c.orbit_anchor->gamma > 0);
        CHECK(qf::eval(quad_form{1, 0, -2}, c.orbit_anchor->alpha, c.orbit_anchor->gamma) == 7);
    }
    // no representations of 3 by m^2 - 2 n^2
    auto none = qf::rep_classes(quad_form{1, 0, -2}, integer(3));
    CHECK(none.empty());
}

TEST_CASE("rep_classes divides out imprimitive content") {
    auto base = qf::rep_classes(quad_form{1, 0, -2}, integer(7));
    auto scaled = qf::rep_classes(quad_form{3, 0, -6}, integer(21));
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].g == scaled[i].g);
        CHECK(base[i].base.u == scaled[i].base.u);
    }
    CHECK(qf::rep_classes(quad_form{3, 0, -6}, integer(7)).empty());  // 3 does not divide 7
}

TEST_CASE("negative definite forms mirror their positive counterparts") {
    auto pos = qf::rep_classes(quad_form{1, 0, 1}, integer(65));
    auto neg = qf::rep_classes(quad_form{-1, 0, -1}, integer(-65));
    REQUIRE(pos.size() == neg.size());
    for (std::size_t i = 0; i < pos.size(); ++i) CHECK(pos[i].base.u == neg[i].base.u);
    // a definite form never reaches values of the wrong sign
    for (const auto& c : qf::rep_classes(quad_form{-1, 0, -1}, integer(65)))
        CHECK_FALSE(c.witness.has_value());
}

TEST_CASE("leftmost_positive_matrix lands in the positive quadrant at minimal alpha") {
    quad_form q{1, 0, -2};
    auto classes = qf::rep_classes(q, integer(7));
    REQUIRE(classes.size() == 2);
    std::vector<integer> alphas;
    for (const auto& c : classes) {
        REQUIRE(c.orbit_anchor.has_value());
        const unimodular& a = *c.orbit_anchor;
        CHECK(a.alpha > 0);
        CHECK(a.gamma > 0);
        alphas.push_back(a.alpha);
    }
    std::sort(alphas.begin(), alphas.end());
    // 7 = 3^2 - 2 * 1^2 = 5^2 - 2 * 3^2 are the orbit minima
    CHECK(alphas[0] == 3);
    CHECK(alphas[1] == 5);
}

TEST_CASE("small_rep_for_class descends to the least |m|") {
    quad_form q{1, 0, -2};
    auto classes = qf::rep_classes(q, integer(1));
    REQUIRE(classes.size() == 1);
    auto rep = qf::small_rep_for_class(q, classes[0], integer(10));
    REQUIRE(rep.has_value());
    CHECK(rep->m == 1);
    CHECK(rep->n == 0);
    CHECK(qf::eval(q, rep->m, rep->n) == 1);
    // axis representations excluded: the smallest is then (3, 2)
    auto off_axis = qf::small_rep_for_class(q, classes[0], integer(10), false);
    REQUIRE(off_axis.has_value());
    CHECK(off_axis->m == 3);
    CHECK(abs(off_axis->n) == 2);
    // bound too tight for the off-axis orbit
    CHECK_FALSE(qf::small_rep_for_class(q, classes[0], integer(2), false).has_value());
}

TEST_CASE("small_rep_for_class scales strata back up") {
    quad_form q{1, 0, -2};
    auto classes = qf::rep_classes(q, integer(8));  // 8 = 2 q(1, ...): strata g in {1, 2}
    bool saw_scaled = false;
    for (const auto& c : classes) {
        auto rep = qf::small_rep_for_class(q, c, integer(50));
        if (!rep) continue;
        CHECK(qf::eval(q, rep->m, rep->n) == 8);
        CHECK(rep->g == c.g);
        if (c.g == 2) saw_scaled = true;
    }
    CHECK(saw_scaled);
}

TEST_CASE("rep_cache stores and replays class decompositions") {
    qf::rep_cache cache;
    quad_form q{1, 0, -2};
    CHECK_FALSE(cache.get(q, integer(7)).has_value());
    auto classes = qf::rep_classes_cached(q, integer(7), &cache);
    CHECK(classes.size() == 2);
    CHECK(cache.size() == 1);
    auto hit = cache.get(q, integer(7));
    REQUIRE(hit.has_value());
    CHECK(hit->size() == 2);
    std::size_t visited = 0;
    cache.for_each([&](const quad_form& fq, const integer& k, const auto& cls) {
        CHECK(fq == q);
        CHECK(k == 7);
        CHECK(cls.size() == 2);
        ++visited;
    });
    CHECK(visited == 1);
}

TEST_CASE("rep_classes rejects degenerate input") {
    CHECK_THROWS_AS(qf::rep_classes(quad_form{1, 0, 1}, integer(0)), qf::domain_error);
    CHECK_THROWS_AS(qf::rep_classes(quad_form{0, 0, 0}, integer(5)), qf::unsupported_class);
}
