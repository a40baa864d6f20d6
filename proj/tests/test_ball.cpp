#include "doctest.h"
#include "pcell/ball.hpp"

#include <random>

using namespace pcell;

namespace {

Ball rnd_ball(const PrimeConfig& cfg, std::mt19937_64& rng) {
    long mant = static_cast<long>(rng() % 600) - 300;
    if (mant == 0) mant = 1;
    long e = static_cast<long>(rng() % 9) - 4;
    long r = static_cast<long>(rng() % 9) - 4;
    return Ball(cfg, PAdic(cfg, mant, e), Valuation(r));
}

}  // namespace

TEST_CASE("membership") {
    PrimeConfig p5(5);
    Ball b2(p5, PAdic(), Valuation(2));
    CHECK(ball_member(p5, b2, PAdic::from_int(p5, 25)));
    CHECK(!ball_member(p5, b2, PAdic::from_int(p5, 5)));
    Ball pt = Ball::point(PAdic::from_int(p5, 7));
    CHECK(ball_member(p5, pt, PAdic::from_int(p5, 7)));
    CHECK(!ball_member(p5, pt, PAdic::from_int(p5, 8)));
}

TEST_CASE("containment") {
    PrimeConfig p5(5);
    Ball b2(p5, PAdic(), Valuation(2));
    Ball b3_25(p5, PAdic::from_int(p5, 25), Valuation(3));
    Ball b3_0(p5, PAdic(), Valuation(3));
    CHECK(ball_contains(p5, b2, b3_25));
    CHECK(!ball_contains(p5, b3_0, b2));
    CHECK(ball_contains(p5, b2, b2));
}

TEST_CASE("meet") {
    PrimeConfig p5(5);
    Ball a(p5, PAdic(), Valuation(3));
    Ball b(p5, PAdic::from_int(p5, 25), Valuation(3));
    CHECK(ball_meet(p5, a, b) == Ball(p5, PAdic(), Valuation(2)));  // ord 25 = 2
    CHECK(ball_meet(p5, a, a) == a);
    Ball pt = Ball::point(PAdic::from_int(p5, 3));
    Ball g(p5, PAdic::from_int(p5, 3), Valuation(1));
    CHECK(ball_meet(p5, pt, g) == g);
}

TEST_CASE("canonical center") {
    PrimeConfig p5(5);
    CHECK(canonical_point(Ball(p5, PAdic::from_int(p5, 25), Valuation(2))).is_zero());
    CHECK(canonical_point(Ball::point(PAdic::from_int(p5, 9))) == PAdic::from_int(p5, 9));
    CHECK(canonical_point(Ball(p5, PAdic::from_int(p5, 7), Valuation(1))) ==
          PAdic::from_int(p5, 2));
    // negative and fractional centers reduce into [0, p^gamma)
    CHECK(canonical_point(Ball(p5, PAdic::from_int(p5, -1), Valuation(1))) ==
          PAdic::from_int(p5, 4));
    CHECK(Ball(p5, PAdic(p5, 7, -2), Valuation(1)) == Ball(p5, PAdic(p5, 132, -2), Valuation(1)));
}

TEST_CASE("structural equality is set equality") {
    for (long p : {2L, 3L, 5L}) {
        PrimeConfig cfg(p);
        std::mt19937_64 rng(11 * p);
        for (int i = 0; i < 400; ++i) {
            Ball a = rnd_ball(cfg, rng), b = rnd_ball(cfg, rng);
            bool same_fields = (a == b);
            bool same_set = a.radius() == b.radius() &&
                            valuation(subtract(cfg, a.center(), b.center())) >= a.radius();
            CHECK(same_fields == same_set);
        }
    }
}

TEST_CASE("semi-lattice laws and dichotomy, randomized") {
    for (long p : {2L, 3L}) {
        PrimeConfig cfg(p);
        std::mt19937_64 rng(5 * p);
        for (int i = 0; i < 300; ++i) {
            Ball a = rnd_ball(cfg, rng), b = rnd_ball(cfg, rng), c = rnd_ball(cfg, rng);
            CHECK(ball_meet(cfg, a, b) == ball_meet(cfg, b, a));
            CHECK(ball_meet(cfg, ball_meet(cfg, a, b), c) == ball_meet(cfg, a, ball_meet(cfg, b, c)));
            CHECK(ball_contains(cfg, ball_meet(cfg, a, b), a));
            if (!balls_disjoint(cfg, a, b))
                CHECK((ball_contains(cfg, a, b) || ball_contains(cfg, b, a)));
        }
    }
}

TEST_CASE("subball partition") {
    PrimeConfig p5(5);
    Ball b(p5, PAdic(), Valuation(0));
    auto subs = subballs(p5, b, 1);
    REQUIRE(subs.size() == 5);
    for (long i = 0; i < 5; ++i)
        CHECK(subs[static_cast<size_t>(i)] ==
              Ball(p5, PAdic::from_int(p5, i), Valuation(1)));

    PrimeConfig p2(2);
    Ball b27(p2, PAdic::from_int(p2, 7), Valuation(2));
    auto s2 = subballs(p2, b27, 1);
    REQUIRE(s2.size() == 2);
    CHECK(balls_disjoint(p2, s2[0], s2[1]));
    CHECK(ball_contains(p2, b27, s2[0]));
    CHECK(ball_contains(p2, b27, s2[1]));
    // union = parent, spot checked on exact points of the parent
    for (long k = 0; k < 16; ++k) {
        PAdic t = add(p2, PAdic::from_int(p2, 7), PAdic(p2, k, 2));
        CHECK((ball_member(p2, s2[0], t) || ball_member(p2, s2[1], t)));
        CHECK(!(ball_member(p2, s2[0], t) && ball_member(p2, s2[1], t)));
    }

    CHECK_THROWS_AS(subballs(p5, b, 20), enumeration_limit_error);
    CHECK_THROWS_AS(subballs(p5, Ball::point(PAdic()), 1), domain_error);
}
