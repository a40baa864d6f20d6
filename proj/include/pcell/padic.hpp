#pragma once

// Exact arithmetic in Z[1/p], the dense subring of Q_p on which the
// valuation ord and the angular component maps ac_m can be computed
// exactly. Every center, bound witness and test point in this library
// is a PAdic value; there is no truncated p-adic arithmetic here.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pcell {

using BigInt = boost::multiprecision::cpp_int;

// Thrown on misuse of an operation (violated precondition, wrong kind
// of object). Distinct from enumeration_limit_error, which signals a
// configured cap rather than a logic error.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct enumeration_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The ground field is Q_p for a fixed prime p. The residue field has
// q_K = p elements and the uniformizer is p itself.
struct PrimeConfig {
    long p = 2;

    PrimeConfig() = default;
    explicit PrimeConfig(long prime) : p(prime) {
        if (p < 2 || !is_prime(p))
            throw domain_error("PrimeConfig: p must be a prime >= 2");
    }

    static bool is_prime(long n) {
        if (n < 2) return false;
        for (long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    BigInt pow(long k) const {  // p^k for k >= 0
        if (k < 0) throw domain_error("PrimeConfig::pow: negative exponent");
        BigInt r = 1, base = p;
        while (k > 0) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    bool operator==(const PrimeConfig&) const = default;
};

// Element of Gamma_K ∪ {∞} = Z ∪ {∞}; totally ordered with ∞ maximal,
// addition absorbs ∞. Houses valuations, bounds and ball radii.
class Valuation {
public:
    constexpr Valuation() = default;
    constexpr Valuation(long v) : v_(v) {}

    static constexpr Valuation infinity() {
        Valuation g;
        g.inf_ = true;
        return g;
    }

    constexpr bool is_infinite() const { return inf_; }
    constexpr long finite() const {
        return inf_ ? throw domain_error("Valuation: infinite value used as finite") : v_;
    }

    friend constexpr bool operator==(const Valuation& a, const Valuation& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }
    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
        if (a.inf_ && b.inf_) return std::strong_ordering::equal;
        if (a.inf_) return std::strong_ordering::greater;
        if (b.inf_) return std::strong_ordering::less;
        return a.v_ <=> b.v_;
    }

    friend Valuation operator+(const Valuation& a, long k) {
        return a.inf_ ? a : Valuation(a.v_ + k);
    }
    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.inf_ || b.inf_) return infinity();
        return Valuation(a.v_ + b.v_);
    }

    std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

private:
    long v_ = 0;
    bool inf_ = false;
};

// value = mantissa * p^exponent. Canonical form: p does not divide the
// mantissa, or mantissa = 0 with exponent = 0. Equality of canonical
// forms is value equality; all constructors canonicalize.
class PAdic {
public:
    PAdic() = default;  // zero

    PAdic(const PrimeConfig& cfg, BigInt mantissa, long exponent) {
        if (mantissa == 0) return;
        while (mantissa % cfg.p == 0) {
            mantissa /= cfg.p;
            ++exponent;
        }
        mantissa_ = std::move(mantissa);
        exponent_ = exponent;
    }

    static PAdic from_int(const PrimeConfig& cfg, const BigInt& n) {
        return PAdic(cfg, n, 0);
    }

    bool is_zero() const { return mantissa_ == 0; }
    const BigInt& mantissa() const { return mantissa_; }
    long exponent() const { return exponent_; }

    bool operator==(const PAdic&) const = default;

    // Total order used only for deterministic output and container keys;
    // it has no field-theoretic meaning.
    friend std::strong_ordering operator<=>(const PAdic& a, const PAdic& b) {
        if (a.is_zero() || b.is_zero()) {
            if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
            return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        if (auto c = a.exponent_ <=> b.exponent_; c != 0) return c;
        if (a.mantissa_ < b.mantissa_) return std::strong_ordering::less;
        if (b.mantissa_ < a.mantissa_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    BigInt mantissa_ = 0;
    long exponent_ = 0;
};

// ord : K -> Gamma_K ∪ {∞}, with ord(0) = ∞.
inline Valuation valuation(const PAdic& x) {
    return x.is_zero() ? Valuation::infinity() : Valuation(x.exponent());
}

// ac_m : K -> O_K / p^m O_K, the unique group homomorphism on units
// with ac_m(p) = 1, extended by ac_m(0) = 0. Returns the residue as an
// integer in [0, p^m).
inline BigInt angular_component(const PrimeConfig& cfg, const PAdic& x, long m) {
    if (m < 1) throw domain_error("angular_component: m must be >= 1");
    if (x.is_zero()) return 0;
    BigInt pm = cfg.pow(m);
    BigInt r = x.mantissa() % pm;
    if (r < 0) r += pm;
    return r;
}

// Membership in λ·Q_{n,m} where Q_{n,m} = {x ≠ 0 | ord x ≡ 0 mod n,
// ac_m(x) = 1}. For λ = 0 the coset degenerates to {0} (0-cell case).
inline bool coset_member(const PrimeConfig& cfg, const PAdic& x, const PAdic& lambda, long n,
                         long m) {
    if (n < 1 || m < 1) throw domain_error("coset_member: n, m must be >= 1");
    if (lambda.is_zero()) return x.is_zero();
    if (x.is_zero()) return false;
    long d = x.exponent() - lambda.exponent();
    if (((d % n) + n) % n != 0) return false;
    return angular_component(cfg, x, m) == angular_component(cfg, lambda, m);
}

inline PAdic add(const PrimeConfig& cfg, const PAdic& a, const PAdic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long e = std::min(a.exponent(), b.exponent());
    BigInt m = a.mantissa() * cfg.pow(a.exponent() - e) + b.mantissa() * cfg.pow(b.exponent() - e);
    return PAdic(cfg, std::move(m), e);
}

inline PAdic negate(const PrimeConfig& cfg, const PAdic& a) {
    return PAdic(cfg, -a.mantissa(), a.exponent());
}

inline PAdic subtract(const PrimeConfig& cfg, const PAdic& a, const PAdic& b) {
    return add(cfg, a, negate(cfg, b));
}

inline PAdic multiply(const PrimeConfig& cfg, const PAdic& a, const PAdic& b) {
    if (a.is_zero() || b.is_zero()) return PAdic();
    return PAdic(cfg, a.mantissa() * b.mantissa(), a.exponent() + b.exponent());
}

// Exact quotient, defined only when the mantissa of b divides the
// mantissa of a (Z[1/p] is not a field).
inline std::optional<PAdic> try_divide(const PrimeConfig& cfg, const PAdic& a, const PAdic& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return PAdic();
    if (a.mantissa() % b.mantissa() != 0) return std::nullopt;
    return PAdic(cfg, a.mantissa() / b.mantissa(), a.exponent() - b.exponent());
}

inline PAdic pow_p(const PrimeConfig& cfg, long k) { return PAdic(cfg, 1, k); }

// The canonical element of ord γ and prescribed angular component:
// ac · p^γ with ac taken as an integer representative in [1, p^m).
inline PAdic unit_times_power(const PrimeConfig& cfg, const BigInt& ac, long gamma) {
    return PAdic(cfg, ac, gamma);
}

// Textual literal: "<int>" or "<int>*p^<int>"; printing always emits the
// canonical form, parsing accepts any mantissa/exponent pair.
std::string to_string(const PAdic& x);
std::optional<PAdic> parse_padic(const PrimeConfig& cfg, const std::string& text);

}  // namespace pcell
