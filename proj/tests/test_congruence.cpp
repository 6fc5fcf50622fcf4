#include <catch2/catch_amalgamated.hpp>

#include "qf/congruence.hpp"

#include <random>

using qf::integer;

namespace {

// direct enumeration of u in [0, 2s) with u^2 = t (mod 4s)
integer gamma_direct(const integer& t, const integer& s) {
    integer count = 0, mod = 4 * s;
    for (integer u = 0; u < 2 * s; ++u)
        if (qf::mod_euclid(u * u - t, mod) == 0) ++count;
    return count;
}

}  // namespace

TEST_CASE("legendre symbol on small primes") {
    CHECK(qf::legendre(integer(2), integer(7)) == 1);
    CHECK(qf::legendre(integer(3), integer(7)) == -1);
    CHECK(qf::legendre(integer(7), integer(7)) == 0);
    CHECK(qf::legendre(integer(-1), integer(5)) == 1);
    CHECK(qf::legendre(integer(-1), integer(7)) == -1);
}

TEST_CASE("sqrt_mod_prime squares back") {
    std::vector<integer> primes{3, 5, 7, 11, 13, 17, 101, 997, 65537, 1000003};
    std::mt19937 rng(31);
    for (const integer& p : primes) {
        for (int i = 0; i < 20; ++i) {
            integer x = integer(rng()) % p;
            integer t = x * x % p;
            if (t == 0) continue;
            integer r = qf::sqrt_mod_prime(t, p);
            CHECK(r * r % p == t);
        }
    }
}

TEST_CASE("gamma matches frozen values") {
    CHECK(qf::gamma(integer(8), integer(7)) == 2);
    CHECK(qf::gamma(integer(8), integer(17)) == 2);
    CHECK(qf::gamma(integer(8), integer(49)) == 2);
    CHECK(qf::gamma(integer(8), integer(343)) == 2);
    CHECK(qf::gamma(integer(8), integer(119)) == 4);
    CHECK(qf::gamma(integer(1), integer(2)) == 2);
    CHECK(qf::gamma(integer(5), integer(1)) == 1);
    CHECK(qf::gamma(integer(-4), integer(1)) == 1);
    CHECK(qf::gamma(integer(0), integer(81)) == 9);
    CHECK(qf::gamma(integer(12), integer(2)) == 1);
    CHECK(qf::gamma(integer(2), integer(3)) == 0);
    CHECK(qf::gamma(integer(3), integer(5)) == 0);
}

TEST_CASE("gamma vanishes off the quadratic residues of 4") {
    std::mt19937 rng(37);
    for (int i = 0; i < 200; ++i) {
        integer t = integer(rng() % 10000) - 5000;
        integer s = integer(rng() % 500) + 1;
        integer r4 = qf::mod_euclid(t, 4);
        if (r4 == 2 || r4 == 3) CHECK(qf::gamma(t, s) == 0);
    }
}

TEST_CASE("gamma agrees with direct enumeration") {
    std::mt19937 rng(41);
    for (int i = 0; i < 250; ++i) {
        integer t = integer(rng() % 2000) - 1000;
        integer s = integer(rng() % 120) + 1;
        CHECK(qf::gamma(t, s) == gamma_direct(t, s));
    }
    // structured spots: prime powers and mixed square parts
    for (integer s : {integer(64), integer(81), integer(100), integer(98)}) {
        for (integer t : {integer(0), integer(1), integer(4), integer(8), integer(16),
                          integer(-4), integer(-3)}) {
            CHECK(qf::gamma(t, s) == gamma_direct(t, s));
        }
    }
}

TEST_CASE("gamma is multiplicative in coprime parts of s") {
    std::mt19937 rng(43);
    for (int i = 0; i < 150; ++i) {
        integer t = integer(rng() % 2000) - 1000;
        integer s1 = integer(rng() % 40) + 1;
        integer s2 = integer(rng() % 40) + 1;
        if (gcd(s1, s2) != 1) continue;
        if (qf::mod_euclid(t, 4) >= 2) continue;
        // the odd-part product structure shows through coprime splittings
        integer left = qf::gamma(t, s1 * s2);
        CHECK(left == gamma_direct(t, s1 * s2));
    }
}

TEST_CASE("gamma on prime powers at t = 0 is the floor square root") {
    for (integer p : {integer(2), integer(3), integer(5), integer(7)}) {
        integer pa = 1;
        for (unsigned a = 0; a <= 8; ++a) {
            integer expect = 1;
            for (unsigned j = 0; j < a / 2; ++j) expect *= p;
            CHECK(qf::gamma(integer(0), pa) == expect);
            pa *= p;
        }
    }
}

TEST_CASE("solve_congruence lists the frozen solutions") {
    auto s1 = qf::solve_congruence(integer(8), integer(7));
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].u == 6);
    CHECK(s1[0].v == 1);
    CHECK(s1[1].u == 8);
    CHECK(s1[1].v == 2);

    auto s2 = qf::solve_congruence(integer(8), integer(-7));
    REQUIRE(s2.size() == 2);
    CHECK(s2[0].k == -7);
    CHECK(s2[0].u == 6);
    CHECK(s2[0].v == -1);
    CHECK(s2[1].u == 8);
    CHECK(s2[1].v == -2);

    auto s3 = qf::solve_congruence(integer(8), integer(17));
    REQUIRE(s3.size() == 2);
    CHECK(s3[0].u == 12);
    CHECK(s3[0].v == 2);
    CHECK(s3[1].u == 22);
    CHECK(s3[1].v == 7);

    auto s4 = qf::solve_congruence(integer(5), integer(1));
    REQUIRE(s4.size() == 1);
    CHECK(s4[0].u == 1);
    CHECK(s4[0].v == -1);

    auto s5 = qf::solve_congruence(integer(-4), integer(1));
    REQUIRE(s5.size() == 1);
    CHECK(s5[0].u == 0);
    CHECK(s5[0].v == 1);

    CHECK(qf::solve_congruence(integer(8), integer(119)).size() == 4);
    CHECK(qf::solve_congruence(integer(2), integer(5)).empty());
}

TEST_CASE("solve_congruence solutions define forms of the right discriminant") {
    std::mt19937 rng(47);
    for (int i = 0; i < 300; ++i) {
        integer delta = integer(rng() % 600) - 300;
        integer k = integer(rng() % 200) - 100;
        if (k == 0) continue;
        auto sols = qf::solve_congruence(delta, k);
        CHECK(integer(sols.size()) == qf::gamma(delta, abs(k)));
        integer prev = -1;
        for (const qf::congruence_solution& cs : sols) {
            CHECK(cs.k == k);
            CHECK(cs.u >= 0);
            CHECK(cs.u < 2 * abs(k));
            CHECK(cs.u > prev);
            prev = cs.u;
            CHECK(cs.u * cs.u - 4 * cs.k * cs.v == delta);
        }
    }
}

TEST_CASE("gamma and solve_congruence reject degenerate input") {
    CHECK_THROWS_AS(qf::gamma(integer(1), integer(0)), qf::domain_error);
    CHECK_THROWS_AS(qf::gamma(integer(1), integer(-3)), qf::domain_error);
    CHECK_THROWS_AS(qf::solve_congruence(integer(8), integer(0)), qf::domain_error);
}
