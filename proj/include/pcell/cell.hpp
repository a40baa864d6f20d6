#pragma once

// Denef cell conditions over a trivial parameter set: predicates of the
// form  α □1 ord(t−σ) □2 β  ∧  t−σ ∈ λ·Q_{n,m}, their heights and leaf
// balls, and finite decompositions (unions of cells).

#include "pcell/ball.hpp"
#include "pcell/padic.hpp"

#include <optional>
#include <vector>

namespace pcell {

// A square is < when the bound is present, ∅ (no condition) otherwise.
// λ = 0 makes this a 0-cell condition, λ ≠ 0 a 1-cell condition.
// Bounds need not be consistent; emptiness is a computed property.
struct CellCondition {
    std::optional<long> lower;  // α
    std::optional<long> upper;  // β
    PAdic lambda;
    long n = 1;
    long m = 1;

    bool is_zero_cell() const { return lambda.is_zero(); }
    bool operator==(const CellCondition&) const = default;
};

struct Cell {
    CellCondition cond;
    PAdic center;  // σ

    bool operator==(const Cell&) const = default;
};

// Finite union of cells; order is presentation only.
struct Decomposition {
    std::vector<Cell> cells;

    bool operator==(const Decomposition&) const = default;
};

inline long floor_mod(long a, long n) { return ((a % n) + n) % n; }

// largest x' <= x with x' ≡ r (mod n)
inline long align_down(long x, long r, long n) { return x - floor_mod(x - r, n); }
// smallest x' >= x with x' ≡ r (mod n)
inline long align_up(long x, long r, long n) { return x + floor_mod(r - x, n); }

// The set {γ : α □1 γ □2 β ∧ γ ≡ ord λ (mod n)} of heights carrying a
// leaf. Bounds, when present, are aligned to the congruence class.
struct HeightSet {
    long n = 1;
    long residue = 0;                // in [0, n)
    std::optional<long> lo, hi;      // inclusive and class-aligned; absent = unbounded
    bool empty = true;

    bool bounded() const { return lo.has_value() && hi.has_value(); }
    bool contains(long gamma) const {
        if (empty || floor_mod(gamma, n) != residue) return false;
        if (lo && gamma < *lo) return false;
        if (hi && gamma > *hi) return false;
        return true;
    }
    std::vector<long> enumerate() const {
        if (empty) return {};
        if (!bounded()) throw domain_error("HeightSet::enumerate: progression is unbounded");
        std::vector<long> out;
        for (long g = *lo; g <= *hi; g += n) out.push_back(g);
        return out;
    }
};

inline bool cell_member(const PrimeConfig& cfg, const Cell& c, const PAdic& t) {
    PAdic d = subtract(cfg, t, c.center);
    Valuation o = valuation(d);
    if (c.cond.lower && !(Valuation(*c.cond.lower) < o)) return false;
    if (c.cond.upper && !(o < Valuation(*c.cond.upper))) return false;
    return coset_member(cfg, d, c.cond.lambda, c.cond.n, c.cond.m);
}

inline HeightSet leaf_heights(const CellCondition& cond) {
    if (cond.is_zero_cell()) throw domain_error("leaf_heights: 0-cell condition");
    HeightSet h;
    h.n = cond.n;
    h.residue = floor_mod(cond.lambda.exponent(), cond.n);
    if (cond.lower) h.lo = align_up(*cond.lower + 1, h.residue, h.n);
    if (cond.upper) h.hi = align_down(*cond.upper - 1, h.residue, h.n);
    h.empty = h.lo && h.hi && *h.lo > *h.hi;
    return h;
}

inline HeightSet leaf_heights(const Cell& c) { return leaf_heights(c.cond); }

// whether the denoted set is empty
inline bool cell_empty(const Cell& c) {
    if (c.cond.is_zero_cell()) return c.cond.upper.has_value();  // ord 0 = ∞ fails "< β"
    return leaf_heights(c.cond).empty;
}

// Height of the top leaf; defined for 1-cell conditions with □2 = <
// and a nonempty height set. Satisfies β − n <= ρ_max <= β − 1.
inline long rho_max(const CellCondition& cond) {
    if (cond.is_zero_cell()) throw domain_error("rho_max: 0-cell condition");
    if (!cond.upper) throw domain_error("rho_max: no upper bound");
    HeightSet h = leaf_heights(cond);
    if (h.empty) throw domain_error("rho_max: empty height set");
    return *h.hi;
}

// The leaf at height γ: B_{γ+m}(σ + λ_γ) with λ_γ the canonical element
// of ord γ and ac_m equal to ac_m(λ).
inline Ball leaf_ball(const PrimeConfig& cfg, const Cell& c, long gamma) {
    if (!leaf_heights(c.cond).contains(gamma))
        throw domain_error("leaf_ball: gamma is not a leaf height");
    PAdic shifted = unit_times_power(cfg, angular_component(cfg, c.cond.lambda, c.cond.m), gamma);
    return Ball(cfg, add(cfg, c.center, shifted), Valuation(gamma + c.cond.m));
}

// B_{ρ_max+m}(σ): replacing σ by any member leaves the cell unchanged.
inline Ball center_ball(const PrimeConfig& cfg, const Cell& c) {
    return Ball(cfg, c.center, Valuation(rho_max(c.cond) + c.cond.m));
}

// C^σ_{|(α',β')}: requires both squares <; intersected interval.
inline Cell restrict(const Cell& c, long alpha2, long beta2) {
    if (!c.cond.lower || !c.cond.upper)
        throw domain_error("restrict: cell must have both squares <");
    Cell out = c;
    out.cond.lower = std::max(*c.cond.lower, alpha2);
    out.cond.upper = std::min(*c.cond.upper, beta2);
    return out;
}

// σ' ∈ Cl(C^σ) test: the closure adds σ itself exactly when the height
// set is unbounded above (□2 = ∅).
inline bool cell_closure_member(const PrimeConfig& cfg, const Cell& c, const PAdic& t) {
    if (cell_member(cfg, c, t)) return true;
    if (c.cond.is_zero_cell() || cell_empty(c)) return false;
    return !c.cond.upper && t == c.center;
}

inline bool decomposition_member(const PrimeConfig& cfg, const Decomposition& d, const PAdic& t) {
    for (const auto& c : d.cells)
        if (cell_member(cfg, c, t)) return true;
    return false;
}

// b ⊆ C^σ. A ball inside a 1-cell must sit inside a single leaf: two
// leaves differ in height, and anything spanning them contains points
// of the wrong coset.
inline bool cell_contains_ball(const PrimeConfig& cfg, const Cell& c, const Ball& b) {
    if (c.cond.is_zero_cell())
        return b.is_point() && !cell_empty(c) && b.center() == c.center;
    PAdic d = subtract(cfg, b.center(), c.center);
    if (d.is_zero()) return false;  // σ itself is never a member
    long g = d.exponent();
    if (!leaf_heights(c.cond).contains(g)) return false;
    if (Valuation(g + c.cond.m) > b.radius()) return false;
    return angular_component(cfg, d, c.cond.m) == angular_component(cfg, c.cond.lambda, c.cond.m);
}

// b ∩ C^σ ≠ ∅: some leaf contains b, or some leaf lies inside b
inline bool cell_meets_ball(const PrimeConfig& cfg, const Cell& c, const Ball& b) {
    if (b.is_point()) return cell_member(cfg, c, b.center());
    if (c.cond.is_zero_cell()) return !cell_empty(c) && ball_member(cfg, b, c.center);
    if (cell_contains_ball(cfg, c, b)) return true;
    HeightSet h = leaf_heights(c.cond);
    if (h.empty) return false;
    long r = b.radius().finite();
    auto exists_height_ge = [&](long from) {
        long g = align_up(from, h.residue, h.n);
        if (h.lo && g < *h.lo) g = *h.lo;
        return !h.hi || g <= *h.hi;
    };
    PAdic d = subtract(cfg, b.center(), c.center);
    if (d.is_zero()) return exists_height_ge(r);
    long vc = d.exponent();
    if (vc >= r) return exists_height_ge(r);
    if (!h.contains(vc) || vc + c.cond.m < r) return false;
    Ball leaf = leaf_ball(cfg, c, vc);
    return valuation(subtract(cfg, leaf.center(), b.center())) >= Valuation(r);
}

}  // namespace pcell
