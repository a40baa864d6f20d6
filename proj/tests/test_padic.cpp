#include "doctest.h"
#include "pcell/padic.hpp"

#include <random>

using namespace pcell;

namespace {

PAdic rnd_padic(const PrimeConfig& cfg, std::mt19937_64& rng, bool allow_zero = true) {
    if (allow_zero && rng() % 8 == 0) return PAdic();
    long mant = static_cast<long>(rng() % 2000) - 1000;
    if (mant == 0) mant = 7;
    long e = static_cast<long>(rng() % 13) - 6;
    return PAdic(cfg, mant, e);
}

}  // namespace

TEST_CASE("valuation") {
    PrimeConfig p5(5);
    CHECK(valuation(PAdic::from_int(p5, 75)) == Valuation(2));  // 75 = 5^2 * 3
    CHECK(valuation(PAdic()) == Valuation::infinity());
    CHECK(valuation(PAdic(p5, 3, -2)) == Valuation(-2));
    CHECK(PAdic(p5, 3, -2) == *parse_padic(p5, "3*p^-2"));
}

TEST_CASE("angular component") {
    PrimeConfig p5(5);
    CHECK(angular_component(p5, PAdic::from_int(p5, 75), 2) == 3);
    for (long p : {2L, 3L, 5L, 7L}) {
        PrimeConfig cfg(p);
        for (long m = 1; m <= 3; ++m) {
            CHECK(angular_component(cfg, PAdic::from_int(cfg, p), m) == 1);
            CHECK(angular_component(cfg, PAdic(cfg, 1, -4), m) == 1);
        }
    }
    CHECK(angular_component(p5, PAdic(), 1) == 0);
    CHECK(angular_component(p5, PAdic::from_int(p5, -1), 1) == 4);
}

TEST_CASE("coset membership") {
    PrimeConfig p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    CHECK(coset_member(p5, PAdic::from_int(p5, 150), one, 2, 1));  // ord 2, ac_1 = 1
    CHECK(!coset_member(p5, PAdic::from_int(p5, 5), one, 2, 1));   // ord 1 odd
    CHECK(coset_member(p5, PAdic(), PAdic(), 1, 1));               // 0-cell convention
    CHECK(!coset_member(p5, PAdic::from_int(p5, 5), PAdic(), 1, 1));
    CHECK(!coset_member(p5, PAdic(), one, 1, 1));
}

TEST_CASE("ring arithmetic") {
    PrimeConfig p2(2), p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    CHECK(subtract(p5, one, one).is_zero());
    CHECK(valuation(subtract(p2, PAdic::from_int(p2, 17), PAdic::from_int(p2, 1))) ==
          Valuation(4));
    CHECK(add(p5, PAdic(p5, 1, -1), PAdic(p5, 4, -1)) == one);
}

TEST_CASE("canonicalization is idempotent and exact") {
    PrimeConfig p3(3);
    PAdic a(p3, 18, -1);  // 18 * 3^-1 = 2 * 3^1
    CHECK(a.mantissa() == 2);
    CHECK(a.exponent() == 1);
    CHECK(PAdic(p3, a.mantissa(), a.exponent()) == a);
}

TEST_CASE("ultrametric inequality, randomized") {
    for (long p : {2L, 3L, 5L}) {
        PrimeConfig cfg(p);
        std::mt19937_64 rng(42 + p);
        for (int i = 0; i < 500; ++i) {
            PAdic x = rnd_padic(cfg, rng), y = rnd_padic(cfg, rng);
            Valuation vx = valuation(x), vy = valuation(y);
            Valuation vs = valuation(add(cfg, x, y));
            CHECK(vs >= std::min(vx, vy));
            if (vx != vy) CHECK(vs == std::min(vx, vy));
        }
    }
}

TEST_CASE("ac_m multiplicativity and compatibility") {
    for (long p : {2L, 3L, 5L}) {
        PrimeConfig cfg(p);
        std::mt19937_64 rng(7 * p);
        for (int i = 0; i < 300; ++i) {
            PAdic x = rnd_padic(cfg, rng, false), y = rnd_padic(cfg, rng, false);
            for (long m = 1; m <= 3; ++m) {
                BigInt lhs = angular_component(cfg, multiply(cfg, x, y), m);
                BigInt rhs =
                    angular_component(cfg, x, m) * angular_component(cfg, y, m) % cfg.pow(m);
                CHECK(lhs == rhs);
            }
            for (long m = 1; m <= 3; ++m)
                for (long mp = 1; mp <= m; ++mp)
                    CHECK(angular_component(cfg, x, m) % cfg.pow(mp) ==
                          angular_component(cfg, x, mp));
        }
    }
}

TEST_CASE("coset membership is translation invariant under exact division") {
    for (long p : {2L, 5L}) {
        PrimeConfig cfg(p);
        std::mt19937_64 rng(99 + p);
        for (int i = 0; i < 300; ++i) {
            PAdic lambda = rnd_padic(cfg, rng, false);
            PAdic q = rnd_padic(cfg, rng, false);
            PAdic x = multiply(cfg, lambda, q);  // guaranteed divisible
            auto quotient = try_divide(cfg, x, lambda);
            REQUIRE(quotient.has_value());
            CHECK(*quotient == q);
            for (long n = 1; n <= 3; ++n)
                for (long m = 1; m <= 2; ++m)
                    CHECK(coset_member(cfg, x, lambda, n, m) ==
                          coset_member(cfg, q, PAdic::from_int(cfg, 1), n, m));
        }
    }
}

TEST_CASE("literal syntax round-trips") {
    PrimeConfig p5(5);
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        PAdic x = rnd_padic(p5, rng);
        auto back = parse_padic(p5, to_string(x));
        REQUIRE(back.has_value());
        CHECK(*back == x);
    }
    CHECK(!parse_padic(p5, "").has_value());
    CHECK(!parse_padic(p5, "3*q^2").has_value());
    CHECK(!parse_padic(p5, "3*p^").has_value());
    CHECK(parse_padic(p5, " 10 ").has_value());
    CHECK(*parse_padic(p5, "10") == PAdic(p5, 2, 1));
}

TEST_CASE("prime validation") {
    CHECK_THROWS_AS(PrimeConfig(4), domain_error);
    CHECK_THROWS_AS(PrimeConfig(1), domain_error);
    CHECK_NOTHROW(PrimeConfig(13));
}
