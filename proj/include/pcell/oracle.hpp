#pragma once

// Brute-force verification layer: exhaustive enumeration of exact
// p-power rationals over a valuation window. Membership on grid points
// uses the exact core predicates, so a counterexample found here is a
// genuine counterexample; completeness is parameterized by the window.

#include "pcell/cell.hpp"
#include "pcell/leafform.hpp"
#include "pcell/padic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pcell {

struct GridSpec {
    long vmin = -4;
    long vmax = 4;
    long digits = 9;  // units enumerated modulo p^digits
    bool include_zero = true;

    // (vmax - vmin + 1) * (p^D - p^(D-1)) + 1
    BigInt size(const PrimeConfig& cfg) const {
        BigInt units = cfg.pow(digits) - cfg.pow(digits - 1);
        BigInt s = BigInt(vmax - vmin + 1) * units;
        return include_zero ? s + 1 : s;
    }
};

// The window formula: vmin = min(relevant valuations) - (n + m + 2),
// vmax = max + m + 2, digits = (vmax - vmin) + m + 1. Every threshold
// that occurs in the objects then lies inside the window. Throws
// enumeration_limit_error when the result exceeds cap.
GridSpec default_window(const WindowStats& stats, std::size_t cap = 1000000);

// Same vmin/vmax as default_window but digits clipped so the grid fits
// the cap: a sound (weaker) window for bulk randomized checking.
GridSpec budget_window(const WindowStats& stats, std::size_t cap);

using MembershipFn = std::function<bool(const PAdic&)>;

struct GridCheckResult {
    bool ok = true;
    std::optional<PAdic> counterexample;
    std::string detail;
};

// visits points in canonical order: 0 first, then by (valuation, unit)
void for_each_grid_point(const PrimeConfig& cfg, const GridSpec& g,
                         const std::function<bool(const PAdic&)>& visit);

GridCheckResult grid_set_equal(const PrimeConfig& cfg, const MembershipFn& a,
                               const MembershipFn& b, const GridSpec& g);

// every grid point of `whole` lies in exactly one part; every part
// point lies in `whole`
GridCheckResult grid_partition_check(const PrimeConfig& cfg,
                                     const std::vector<MembershipFn>& parts,
                                     const MembershipFn& whole, const GridSpec& g);

inline MembershipFn membership(const PrimeConfig& cfg, const Decomposition& d) {
    return [cfg, d](const PAdic& t) { return decomposition_member(cfg, d, t); };
}

inline MembershipFn membership(const PrimeConfig& cfg, const Cell& c) {
    return [cfg, c](const PAdic& t) { return cell_member(cfg, c, t); };
}

inline MembershipFn membership(const PrimeConfig& cfg, const Ball& b) {
    return [cfg, b](const PAdic& t) { return ball_member(cfg, b, t); };
}

}  // namespace pcell
