#pragma once

// The ball semi-lattice 𝔹 of Q_p. A ball B_γ(a) = {x : ord(x−a) ≥ γ}
// is stored with its canonical center, the least non-negative
// representative of a modulo p^γ·Z, so that structural equality equals
// set equality. Radius ∞ denotes the point {a}.

#include "pcell/padic.hpp"

#include <vector>

namespace pcell {

class Ball {
public:
    Ball() = default;  // B_0(0) by default

    Ball(const PrimeConfig& cfg, const PAdic& center, Valuation radius)
        : center_(canonical_center(cfg, center, radius)), radius_(radius) {}

    static Ball point(const PAdic& a) {
        Ball b;
        b.center_ = a;
        b.radius_ = Valuation::infinity();
        return b;
    }

    const PAdic& center() const { return center_; }
    Valuation radius() const { return radius_; }
    bool is_point() const { return radius_.is_infinite(); }

    bool operator==(const Ball&) const = default;
    friend std::strong_ordering operator<=>(const Ball& a, const Ball& b) {
        if (auto c = a.radius_ <=> b.radius_; c != 0) return c;
        return a.center_ <=> b.center_;
    }

    // Reduction of a modulo p^γ·Z into [0, p^γ): the unique member of
    // the ball all of whose p-adic digits sit strictly below γ.
    static PAdic canonical_center(const PrimeConfig& cfg, const PAdic& a, Valuation radius) {
        if (radius.is_infinite() || a.is_zero()) return a;
        long gamma = radius.finite();
        if (a.exponent() >= gamma) return PAdic();  // 0 is in the ball
        long low = std::min(a.exponent(), gamma);
        BigInt t = a.mantissa() * cfg.pow(a.exponent() - low);
        BigInt modulus = cfg.pow(gamma - low);
        BigInt r = t % modulus;
        if (r < 0) r += modulus;
        return PAdic(cfg, r, low);
    }

private:
    PAdic center_;
    Valuation radius_;
};

inline bool ball_member(const PrimeConfig& cfg, const Ball& b, const PAdic& x) {
    return valuation(subtract(cfg, x, b.center())) >= b.radius();
}

// inner ⊆ outer
inline bool ball_contains(const PrimeConfig& cfg, const Ball& outer, const Ball& inner) {
    return outer.radius() <= inner.radius() &&
           valuation(subtract(cfg, inner.center(), outer.center())) >= outer.radius();
}

inline bool balls_disjoint(const PrimeConfig& cfg, const Ball& a, const Ball& b) {
    // Ultrametric: two balls are nested or disjoint.
    return !ball_contains(cfg, a, b) && !ball_contains(cfg, b, a);
}

// inf(b1, b2): the smallest ball containing both.
inline Ball ball_meet(const PrimeConfig& cfg, const Ball& b1, const Ball& b2) {
    Valuation r = std::min(std::min(b1.radius(), b2.radius()),
                           valuation(subtract(cfg, b1.center(), b2.center())));
    return Ball(cfg, b1.center(), r);
}

// deterministic representative of a ball; equal balls yield equal points
inline PAdic canonical_point(const Ball& b) { return b.center(); }

// The p^depth disjoint balls of radius b.radius+depth partitioning b,
// ordered by residue. Guarded by a cap since the count is exponential.
std::vector<Ball> subballs(const PrimeConfig& cfg, const Ball& b, long depth,
                           std::size_t cap = 100000);

}  // namespace pcell
