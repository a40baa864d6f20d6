#include "pcell/oracle.hpp"

#include <sstream>

namespace pcell {

namespace {

GridSpec window_formula(const WindowStats& stats) {
    GridSpec g;
    long n = stats.joint_modulus(), m = stats.joint_depth();
    if (!stats.has_values()) {
        g.vmin = -4;
        g.vmax = 4;
        g.digits = 9;
    } else {
        g.vmin = stats.min_value() - (n + m + 2);
        g.vmax = stats.max_value() + m + 2;
        g.digits = (g.vmax - g.vmin) + m + 1;
    }
    return g;
}

}  // namespace

GridSpec default_window(const WindowStats& stats, std::size_t cap) {
    GridSpec g = window_formula(stats);
    if (g.size(stats.config()) > cap)
        throw enumeration_limit_error(
            "default_window: grid size exceeds cap; shrink parameter ranges or raise --cap");
    return g;
}

GridSpec budget_window(const WindowStats& stats, std::size_t cap) {
    GridSpec g = window_formula(stats);
    while (g.digits > 1 && g.size(stats.config()) > cap) --g.digits;
    if (g.size(stats.config()) > cap)
        throw enumeration_limit_error("budget_window: cap too small even at minimal digits");
    return g;
}

void for_each_grid_point(const PrimeConfig& cfg, const GridSpec& g,
                         const std::function<bool(const PAdic&)>& visit) {
    if (g.include_zero && !visit(PAdic())) return;
    BigInt pd = cfg.pow(g.digits);
    for (long v = g.vmin; v <= g.vmax; ++v) {
        for (BigInt u = 1; u < pd; ++u) {
            if (u % cfg.p == 0) continue;
            if (!visit(PAdic(cfg, u, v))) return;
        }
    }
}

GridCheckResult grid_set_equal(const PrimeConfig& cfg, const MembershipFn& a,
                               const MembershipFn& b, const GridSpec& g) {
    GridCheckResult res;
    for_each_grid_point(cfg, g, [&](const PAdic& t) {
        bool ma = a(t), mb = b(t);
        if (ma != mb) {
            res.ok = false;
            res.counterexample = t;
            std::ostringstream os;
            os << "point " << to_string(t) << ": lhs=" << ma << " rhs=" << mb;
            res.detail = os.str();
            return false;
        }
        return true;
    });
    return res;
}

GridCheckResult grid_partition_check(const PrimeConfig& cfg,
                                     const std::vector<MembershipFn>& parts,
                                     const MembershipFn& whole, const GridSpec& g) {
    GridCheckResult res;
    for_each_grid_point(cfg, g, [&](const PAdic& t) {
        int count = 0;
        for (const auto& p : parts)
            if (p(t)) ++count;
        bool w = whole(t);
        if ((w && count != 1) || (!w && count != 0)) {
            res.ok = false;
            res.counterexample = t;
            std::ostringstream os;
            os << "point " << to_string(t) << ": whole=" << w << " part-count=" << count;
            res.detail = os.str();
            return false;
        }
        return true;
    });
    return res;
}

}  // namespace pcell
