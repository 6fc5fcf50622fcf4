#include <catch2/catch_amalgamated.hpp>

#include "qf/forms.hpp"

#include <random>

using qf::integer;
using qf::quad_form;
using qf::unimodular;

namespace {

std::mt19937 rng(20240814);

integer small_int(int lo, int hi) {
    return integer(static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)) + lo);
}

quad_form random_form() { return {small_int(-30, 30), small_int(-30, 30), small_int(-30, 30)}; }

unimodular random_transform() {
    // random word in the standard generators, determinant stays 1
    unimodular t;
    const unimodular s{0, -1, 1, 0}, u{1, 1, 0, 1}, v{1, -1, 0, 1};
    for (int i = 0; i < 12; ++i) {
        switch (rng() % 3) {
            case 0: t = t * s; break;
            case 1: t = t * u; break;
            default: t = t * v; break;
        }
    }
    return t;
}

}  // namespace

TEST_CASE("eval expands the quadratic") {
    quad_form q{1, 0, -2};
    CHECK(qf::eval(q, integer(3), integer(2)) == 1);
    CHECK(qf::eval(q, integer(3), integer(-2)) == 1);
    CHECK(qf::eval(q, integer(0), integer(0)) == 0);
    CHECK(qf::eval(quad_form{2, 3, 4}, integer(-1), integer(5)) == 2 - 15 + 100);
}

TEST_CASE("discriminant and content") {
    CHECK(qf::discriminant(quad_form{1, 0, 1}) == -4);
    CHECK(qf::discriminant(quad_form{1, 0, -2}) == 8);
    CHECK(qf::discriminant(quad_form{1, 1, 1}) == -3);
    CHECK(qf::content(quad_form{4, 6, 10}) == 2);
    CHECK(qf::content(quad_form{0, 0, 0}) == 0);
    CHECK(qf::is_primitive(quad_form{2, 3, 4}));
    CHECK_FALSE(qf::is_primitive(quad_form{2, 4, 6}));
}

TEST_CASE("classify covers the four regimes") {
    using qf::form_class;
    CHECK(qf::classify(quad_form{1, 0, 1}) == form_class::positive_definite);
    CHECK(qf::classify(quad_form{-1, 0, -1}) == form_class::negative_definite);
    CHECK(qf::classify(quad_form{1, 0, -2}) == form_class::indefinite_nonsquare);
    CHECK(qf::classify(quad_form{1, 3, 2}) == form_class::square_discriminant);
    CHECK(qf::classify(quad_form{0, 0, 0}) == form_class::square_discriminant);
    CHECK(qf::classify(quad_form{1, 2, 1}) == form_class::square_discriminant);
}

TEST_CASE("unimodular algebra: determinant, product, inverse") {
    for (int i = 0; i < 200; ++i) {
        unimodular t = random_transform();
        CHECK(qf::det(t) == 1);
        unimodular ti = qf::inverse(t);
        CHECK(t * ti == unimodular{});
        CHECK(ti * t == unimodular{});
    }
    unimodular flip{0, 1, 1, 0};  // determinant -1
    CHECK(qf::det(flip) == -1);
    CHECK(flip * qf::inverse(flip) == unimodular{});
}

TEST_CASE("apply_transform preserves the discriminant and composes") {
    for (int i = 0; i < 200; ++i) {
        quad_form q = random_form();
        unimodular t = random_transform(), s = random_transform();
        quad_form qt = qf::apply_transform(q, t);
        CHECK(qf::discriminant(qt) == qf::discriminant(q));
        CHECK(qf::apply_transform(qt, s) == qf::apply_transform(q, t * s));
        CHECK(qf::apply_transform(qt, qf::inverse(t)) == q);
    }
}

TEST_CASE("transform action matches direct substitution") {
    for (int i = 0; i < 100; ++i) {
        quad_form q = random_form();
        unimodular t = random_transform();
        quad_form qt = qf::apply_transform(q, t);
        integer m = small_int(-9, 9), n = small_int(-9, 9);
        // columns of t carry (m, n) to (alpha m + beta n, gamma m + delta n)
        CHECK(qf::eval(qt, m, n) ==
              qf::eval(q, t.alpha * m + t.beta * n, t.gamma * m + t.delta * n));
    }
}

TEST_CASE("definite reduction lands in the fundamental domain with a witness") {
    int done = 0;
    while (done < 150) {
        quad_form q = random_form();
        if (qf::classify(q) != qf::form_class::positive_definite &&
            qf::classify(q) != qf::form_class::negative_definite)
            continue;
        ++done;
        qf::reduction r = qf::reduce(q);
        CHECK(qf::is_reduced(r.form));
        CHECK(qf::apply_transform(q, r.witness) == r.form);
        integer aa = abs(r.form.a), cc = abs(r.form.c);
        CHECK(abs(r.form.b) <= aa);
        CHECK(aa <= cc);
    }
    CHECK(qf::reduce(quad_form{5, 4, 1}).form == quad_form{1, 0, 1});
    CHECK(qf::reduce(quad_form{-5, 4, -1}).form == quad_form{-1, 0, -1});
    CHECK(qf::reduce(quad_form{12, 10, 3}).form == quad_form{3, 2, 4});
}

TEST_CASE("indefinite reduction lands on the cycle with a witness") {
    int done = 0;
    while (done < 150) {
        quad_form q = random_form();
        if (qf::classify(q) != qf::form_class::indefinite_nonsquare) continue;
        ++done;
        qf::reduction r = qf::reduce(q);
        CHECK(qf::is_reduced(r.form));
        CHECK(qf::apply_transform(q, r.witness) == r.form);
    }
    CHECK(qf::reduce(quad_form{1, 0, -2}).form == quad_form{1, 2, -1});
    CHECK(qf::reduce(quad_form{-1, 0, 2}).form == quad_form{-1, 2, 1});
    CHECK(qf::reduce(quad_form{7, 6, 1}).form == quad_form{1, 2, -1});
}

TEST_CASE("the cycle of discriminant 8 has exactly two forms") {
    auto cyc = qf::cycle_of(quad_form{1, 0, -2});
    REQUIRE(cyc.size() == 2);
    CHECK(cyc[0] == quad_form{1, 2, -1});
    CHECK(cyc[1] == quad_form{-1, 2, 1});
}

TEST_CASE("cycle steps carry witnesses back to the starting form") {
    quad_form q{3, 1, -5};  // discriminant 61
    qf::reduction r = qf::reduce(q);
    auto cyc = qf::cycle_with_witnesses(r.form);
    CHECK(cyc.size() >= 2);
    for (const qf::reduction& node : cyc) {
        CHECK(qf::is_reduced(node.form));
        CHECK(qf::apply_transform(r.form, node.witness) == node.form);
    }
}

TEST_CASE("equivalent finds witnesses exactly for equivalent pairs") {
    // same discriminant, same reduced form
    auto w = qf::equivalent(quad_form{1, 0, 1}, quad_form{5, 4, 1});
    REQUIRE(w.has_value());
    CHECK(qf::apply_transform(quad_form{1, 0, 1}, *w) == quad_form{5, 4, 1});
    // same discriminant -20, distinct classes
    CHECK_FALSE(qf::equivalent(quad_form{1, 0, 5}, quad_form{2, 2, 3}).has_value());
    // different discriminants
    CHECK_FALSE(qf::equivalent(quad_form{1, 0, 1}, quad_form{1, 0, 2}).has_value());
    // indefinite pair through the cycle
    auto wi = qf::equivalent(quad_form{1, 0, -2}, quad_form{7, 6, 1});
    REQUIRE(wi.has_value());
    CHECK(qf::apply_transform(quad_form{1, 0, -2}, *wi) == quad_form{7, 6, 1});
    // opposite ends of the discriminant 8 cycle
    auto wo = qf::equivalent(quad_form{1, 0, -2}, quad_form{-1, 0, 2});
    REQUIRE(wo.has_value());
    CHECK(qf::apply_transform(quad_form{1, 0, -2}, *wo) == quad_form{-1, 0, 2});
}

TEST_CASE("equivalence is reflexive and symmetric on random forms") {
    int done = 0;
    while (done < 60) {
        quad_form q = random_form();
        if (qf::classify(q) == qf::form_class::square_discriminant) continue;
        ++done;
        unimodular t = random_transform();
        quad_form qt = qf::apply_transform(q, t);
        auto w = qf::equivalent(q, qt);
        REQUIRE(w.has_value());
        CHECK(qf::apply_transform(q, *w) == qt);
        auto back = qf::equivalent(qt, q);
        REQUIRE(back.has_value());
        CHECK(qf::apply_transform(qt, *back) == q);
    }
}

TEST_CASE("square discriminants are rejected by reduce and equivalent") {
    CHECK_THROWS_AS(qf::reduce(quad_form{1, 3, 2}), qf::unsupported_class);
    CHECK_THROWS_AS(qf::equivalent(quad_form{1, 3, 2}, quad_form{1, 3, 2}),
                    qf::unsupported_class);
    CHECK_THROWS_AS(qf::is_reduced(quad_form{0, 1, 0}), qf::unsupported_class);
}

TEST_CASE("parse_form round trips and rejects malformed input") {
    CHECK(qf::parse_form("1,0,-2") == quad_form{1, 0, -2});
    CHECK(qf::parse_form("-3,12,7") == quad_form{-3, 12, 7});
    CHECK(qf::form_to_string(quad_form{1, 0, -2}) == "1,0,-2");
    CHECK(qf::parse_form(qf::form_to_string(quad_form{-3, 12, 7})) == quad_form{-3, 12, 7});
    CHECK_THROWS_AS(qf::parse_form("1,0"), qf::domain_error);
    CHECK_THROWS_AS(qf::parse_form("1,0,2,3"), qf::domain_error);
    CHECK_THROWS_AS(qf::parse_form("1,,2"), qf::domain_error);
    CHECK_THROWS_AS(qf::parse_form("a,b,c"), qf::domain_error);
}
