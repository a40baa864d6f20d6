#include "doctest.h"
#include "pcell/admissible.hpp"
#include "pcell/generators.hpp"
#include "pcell/oracle.hpp"

using namespace pcell;

namespace {

Cell mk_cell(const PrimeConfig& cfg, std::optional<long> lo, std::optional<long> hi,
             const PAdic& lambda, long n, long m, const PAdic& center) {
    Cell c;
    c.cond.lower = lo;
    c.cond.upper = hi;
    c.cond.lambda = lambda;
    c.cond.n = n;
    c.cond.m = m;
    c.center = center;
    return c;
}

Decomposition ball_as_cells(const PrimeConfig& cfg, const Ball& b) {
    long gamma = b.radius().finite();
    PAdic zeta = subtract(cfg, b.center(), pow_p(cfg, gamma - 1));
    return Decomposition{
        {mk_cell(cfg, gamma - 2, gamma, PAdic::from_int(cfg, 1), 1, 1, zeta)}};
}

bool grid_equal_sets(const PrimeConfig& cfg, const Decomposition& a, const Decomposition& b) {
    WindowStats st(cfg);
    st.add_decomposition(a);
    st.add_decomposition(b);
    GridSpec g = budget_window(st, 30000);
    return grid_set_equal(cfg, membership(cfg, a), membership(cfg, b), g).ok;
}

}  // namespace

TEST_CASE("pre-admissibility checks") {
    PrimeConfig p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    SUBCASE("cells centered at 0 are always compliant") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, 3, one, 1, 1, PAdic()));
        d.cells.push_back(mk_cell(p5, std::nullopt, std::nullopt, PAdic(), 1, 1, PAdic()));
        CHECK(is_preadmissible(p5, d).ok);
    }
    SUBCASE("interior 0-cell violates (a)") {
        // {1} sits inside the leaf B_2(1) of the covering cell
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, std::nullopt, PAdic(), 1, 1, one));
        d.cells.push_back(mk_cell(p5, -1, 1, one, 1, 2, PAdic()));
        auto rep = is_preadmissible(p5, d);
        REQUIRE(!rep.ok);
        CHECK(rep.violations.size() == 1);
        CHECK(rep.violations[0].condition == 'a');
        CHECK(rep.violations[0].cell_index == 0);
    }
    SUBCASE("non-interior 0-cell is fine") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, std::nullopt, PAdic(), 1, 1, one));
        d.cells.push_back(mk_cell(p5, 2, 5, one, 1, 1, PAdic()));
        CHECK(is_preadmissible(p5, d).ok);
    }
    SUBCASE("ord(center) above the lower bound violates (b)") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, 3, 8, one, 1, 1, pow_p(p5, 4)));
        auto rep = is_preadmissible(p5, d);
        REQUIRE(!rep.ok);
        CHECK(rep.violations[0].condition == 'b');
        // ord 1 = 0 <= 3 is compliant
        Decomposition ok;
        ok.cells.push_back(mk_cell(p5, 3, 8, one, 1, 1, one));
        CHECK(is_preadmissible(p5, ok).ok);
    }
    SUBCASE("missing lower bound with nonzero center violates (c)") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, 3, one, 1, 1, one));
        auto rep = is_preadmissible(p5, d);
        REQUIRE(!rep.ok);
        CHECK(rep.violations[0].condition == 'c');
    }
}

TEST_CASE("W computation") {
    PrimeConfig p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    SUBCASE("single cell") {
        Decomposition d{{mk_cell(p5, 0, 4, one, 1, 1, one)}};
        CHECK(compute_W(p5, d).empty());
    }
    SUBCASE("all centers zero") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, 0, 4, one, 1, 1, PAdic()));
        d.cells.push_back(mk_cell(p5, 4, 9, one, 2, 1, PAdic()));
        CHECK(compute_W(p5, d).empty());
    }
    SUBCASE("constructed straddle") {
        Rng rng(7);
        GenBounds gb;
        for (int i = 0; i < 25; ++i) {
            Decomposition d = random_straddle_instance(p5, rng, gb);
            // both the straddled center and the off-shifted inner center
            // see the same maximal ball, so W picks up one or both
            auto w = compute_W(p5, d);
            REQUIRE(!w.empty());
            CHECK(w.size() <= 2);
            CHECK(is_preadmissible(p5, d).ok);
        }
    }
}

TEST_CASE("case family builders denote the straddled ball") {
    PrimeConfig p3(3);
    SUBCASE("d1: ball containing 0") {
        for (long rho : {-2L, 0L, 3L}) {
            Decomposition fam{build_case_d1(p3, rho)};
            CHECK(set_equal(p3, fam, ball_as_cells(p3, Ball(p3, PAdic(), Valuation(rho)))));
        }
    }
    SUBCASE("d2: ball at finite distance from 0") {
        PAdic sigma0(p3, 2, 1);  // ord 1
        for (long rho : {2L, 4L}) {
            Decomposition fam{{build_case_d2(p3, sigma0, rho)}};
            CHECK(set_equal(p3, fam, ball_as_cells(p3, Ball(p3, sigma0, Valuation(rho)))));
        }
        CHECK_THROWS_AS(build_case_d2(p3, sigma0, 1), domain_error);  // 0 inside
    }
    SUBCASE("d3: cell around an outside point") {
        PAdic sigma0(p3, 2, 1);
        long rho = 4;
        PAdic zeta = add(p3, sigma0, pow_p(p3, rho - 1));
        Cell dz = build_case_d3(p3, zeta, sigma0, rho);
        CHECK(set_equal(p3, Decomposition{{dz}},
                        ball_as_cells(p3, Ball(p3, sigma0, Valuation(rho)))));
        CHECK(valuation(zeta) == valuation(sigma0));  // eq. (2)-style side condition
        CHECK_THROWS_AS(build_case_d3(p3, sigma0, sigma0, rho), domain_error);
    }
}

TEST_CASE("preadmissibilize") {
    PrimeConfig p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    SUBCASE("already pre-admissible: unchanged, empty trace") {
        Decomposition d{{mk_cell(p5, 0, 4, one, 1, 1, PAdic())}};
        auto [out, tr] = preadmissibilize(p5, d);
        CHECK(tr.steps.empty());
        CHECK(out == d);
    }
    SUBCASE("interior 0-cell is absorbed") {
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, std::nullopt, PAdic(), 1, 1, one));
        d.cells.push_back(mk_cell(p5, -1, 2, one, 1, 2, PAdic()));
        auto [out, tr] = preadmissibilize(p5, d);
        CHECK(is_preadmissible(p5, out).ok);
        CHECK(set_equal(p5, d, out));
        CHECK(grid_equal_sets(p5, d, out));
        REQUIRE(!tr.steps.empty());
        CHECK(tr.steps.front().rule == StepRule::zero_cell_interior);
    }
    SUBCASE("recenter a (b)-violating cell") {
        Decomposition d{{mk_cell(p5, 1, 6, one, 1, 1, pow_p(p5, 3))}};
        auto [out, tr] = preadmissibilize(p5, d);
        CHECK(is_preadmissible(p5, out).ok);
        CHECK(set_equal(p5, d, out));
        CHECK(grid_equal_sets(p5, d, out));
        for (const auto& s : tr.steps) CHECK(s.rule == StepRule::recenter);
    }
    SUBCASE("recenter a (c)-violating cell") {
        for (long lu : {1L, 2L, 6L}) {
            Decomposition d{{mk_cell(p5, std::nullopt, 5, PAdic(p5, lu, 0), 2, 2,
                                     PAdic(p5, 3, 1))}};
            auto [out, tr] = preadmissibilize(p5, d);
            CHECK(is_preadmissible(p5, out).ok);
            CHECK(set_equal(p5, d, out));
            CHECK(grid_equal_sets(p5, d, out));
        }
    }
    SUBCASE("every trace step preserves the set, randomized") {
        for (long p : {2L, 3L, 5L}) {
            PrimeConfig cfg(p);
            Rng rng(300 + p);
            GenBounds gb;
            for (int i = 0; i < 40; ++i) {
                Decomposition d = random_decomposition(cfg, rng, gb);
                auto [out, tr] = preadmissibilize(cfg, d);
                CHECK(is_preadmissible(cfg, out).ok);
                CHECK(set_equal(cfg, d, out));
                for (const auto& s : tr.steps) CHECK(set_equal(cfg, s.before, s.after));
            }
        }
    }
}

TEST_CASE("admissibilize") {
    PrimeConfig p5(5);
    PAdic one = PAdic::from_int(p5, 1);
    SUBCASE("empty W: unchanged") {
        Decomposition d{{mk_cell(p5, 0, 4, one, 1, 1, PAdic())}};
        auto [out, tr] = admissibilize(p5, d);
        CHECK(tr.steps.empty());
        CHECK(out == d);
    }
    SUBCASE("precondition is enforced") {
        Decomposition d{{mk_cell(p5, std::nullopt, 3, one, 1, 1, one)}};
        CHECK_THROWS_AS(admissibilize(p5, d), domain_error);
    }
    SUBCASE("straddle instances become admissible with decreasing W") {
        for (long p : {2L, 3L, 5L}) {
            PrimeConfig cfg(p);
            Rng rng(17 * p);
            GenBounds gb;
            for (int i = 0; i < 20; ++i) {
                Decomposition d = random_straddle_instance(cfg, rng, gb);
                REQUIRE(is_preadmissible(cfg, d).ok);
                auto [out, tr] = admissibilize(cfg, d);
                CHECK(is_admissible(cfg, out));
                CHECK(set_equal(cfg, d, out));
                CHECK(grid_equal_sets(cfg, d, out));
                std::size_t w0 = compute_W(cfg, d).size();
                CHECK(tr.steps.size() <= w0);
                for (const auto& s : tr.steps) {
                    CHECK(s.w_after < s.w_before);
                    CHECK(set_equal(cfg, s.before, s.after));
                    CHECK((s.rule == StepRule::case_d2 || s.rule == StepRule::case_d3));
                    for (const auto& y : s.y_records) {
                        CHECK(y.formula_matches);
                        CHECK(!y.enumerated.empty());
                    }
                }
            }
        }
    }
}

TEST_CASE("decompose_admissible end to end") {
    SUBCASE("empty input") {
        PrimeConfig p5(5);
        auto [out, tr] = decompose_admissible(p5, Decomposition{});
        CHECK(out.cells.empty());
    }
    SUBCASE("point plus covering cone") {
        PrimeConfig p5(5);
        Decomposition d;
        d.cells.push_back(mk_cell(p5, std::nullopt, std::nullopt, PAdic(), 1, 1, PAdic()));
        for (long a = 1; a < 5; ++a)
            d.cells.push_back(
                mk_cell(p5, -2, std::nullopt, PAdic::from_int(p5, a), 1, 1, PAdic()));
        auto [out, tr] = decompose_admissible(p5, d);
        CHECK(is_admissible(p5, out));
        CHECK(set_equal(p5, d, out));
    }
    SUBCASE("randomized suite") {
        for (long p : {2L, 3L, 5L}) {
            PrimeConfig cfg(p);
            Rng rng(1000 + p);
            GenBounds gb;
            for (int i = 0; i < 30; ++i) {
                Decomposition d = (i % 4 == 0) ? random_straddle_instance(cfg, rng, gb)
                                               : random_decomposition(cfg, rng, gb);
                auto [out, tr] = decompose_admissible(cfg, d);
                CHECK(is_admissible(cfg, out));
                CHECK(set_equal(cfg, d, out));
            }
        }
    }
}
