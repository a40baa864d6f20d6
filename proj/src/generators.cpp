#include "pcell/generators.hpp"

namespace pcell {

long rnd_range(Rng& rng, long lo, long hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

PAdic random_value(const PrimeConfig& cfg, Rng& rng, const GenBounds& b) {
    long e = rnd_range(rng, b.val_lo, b.val_hi);
    long umax = cfg.p * cfg.p;
    long u = rnd_range(rng, 1, umax - 1);
    if (u % cfg.p == 0) ++u;
    if (rng() % 2) u = -u;
    return PAdic(cfg, u, e);
}

namespace {

PAdic random_center(const PrimeConfig& cfg, Rng& rng, const GenBounds& b,
                    const std::vector<PAdic>& previous) {
    unsigned long roll = rng() % 100;
    if (roll < 30) return PAdic();
    if (roll < 70 && !previous.empty()) {
        // perturb an existing center so that decompositions routinely
        // contain near-coincident and nested configurations
        const PAdic& base = previous[rng() % previous.size()];
        long k = rnd_range(rng, b.val_lo, b.val_hi + 2);
        long u = rnd_range(rng, 0, cfg.p - 1);
        return add(cfg, base, PAdic(cfg, u, k));
    }
    return random_value(cfg, rng, b);
}

}  // namespace

Cell random_cell(const PrimeConfig& cfg, Rng& rng, const GenBounds& b) {
    std::vector<PAdic> none;
    Cell c;
    c.center = random_center(cfg, rng, b, none);
    if (static_cast<int>(rng() % 100) < b.zero_cell_pct) {
        c.cond.lambda = PAdic();
        if (rng() % 4 == 0) c.cond.lower = rnd_range(rng, b.val_lo, b.val_hi);
        return c;
    }
    c.cond.n = rnd_range(rng, 1, b.max_n);
    c.cond.m = rnd_range(rng, 1, b.max_m);
    long lu = rnd_range(rng, 1, cfg.p * cfg.p - 1);
    if (lu % cfg.p == 0) ++lu;
    c.cond.lambda = PAdic(cfg, lu, rnd_range(rng, b.val_lo, b.val_hi));
    long a = rnd_range(rng, b.val_lo, b.val_hi);
    long beta = rnd_range(rng, a, b.val_hi + 2);
    if (static_cast<int>(rng() % 100) >= b.unbounded_pct) c.cond.lower = a;
    if (static_cast<int>(rng() % 100) >= b.unbounded_pct) c.cond.upper = beta;
    return c;
}

Decomposition random_decomposition(const PrimeConfig& cfg, Rng& rng, const GenBounds& b) {
    Decomposition d;
    int count = static_cast<int>(rnd_range(rng, 1, b.max_cells));
    std::vector<PAdic> centers;
    for (int i = 0; i < count; ++i) {
        Cell c = random_cell(cfg, rng, b);
        c.center = random_center(cfg, rng, b, centers);
        centers.push_back(c.center);
        d.cells.push_back(std::move(c));
    }
    return d;
}

Decomposition random_straddle_instance(const PrimeConfig& cfg, Rng& rng, const GenBounds& b) {
    // ball B_ρ(σ0) with ord σ0 = e < ρ, written as the union of
    // one-height-band cells around σ0 plus a final leaf around a center
    // ζ = σ0 − p^h shifted off σ0; no single cell contains the ball
    long e = rnd_range(rng, b.val_lo, b.val_hi - 2);
    long rho = rnd_range(rng, e + 1, b.val_hi - 1);
    long h = rnd_range(rng, rho, b.val_hi);
    long u = rnd_range(rng, 1, cfg.p - 1);
    PAdic sigma0(cfg, u, e);

    Decomposition d;
    for (long a = 1; a < cfg.p; ++a) {
        Cell c;
        c.center = sigma0;
        c.cond.lower = rho - 1;
        c.cond.upper = h + 1;
        c.cond.lambda = PAdic::from_int(cfg, a);
        c.cond.n = 1;
        c.cond.m = 1;
        d.cells.push_back(c);
    }
    Cell inner;
    inner.center = subtract(cfg, sigma0, pow_p(cfg, h));
    inner.cond.lower = h - 1;
    inner.cond.upper = h + 1;
    inner.cond.lambda = PAdic::from_int(cfg, 1);
    inner.cond.n = 1;
    inner.cond.m = 1;
    d.cells.push_back(inner);

    if (rng() % 2) {
        // off-ball filler, centered at 0 to stay pre-admissible
        Cell filler;
        filler.center = PAdic();
        filler.cond.lower = b.val_hi + 2;
        filler.cond.upper = b.val_hi + 4;
        filler.cond.lambda = PAdic::from_int(cfg, 1);
        filler.cond.n = 1;
        filler.cond.m = 1;
        d.cells.push_back(filler);
    }
    return d;
}

}  // namespace pcell
