#pragma once

// Reproducible pseudo-random instances for the differential test
// harness. Determinism matters more than distribution quality here:
// the same seed must produce the same instance on every platform, so
// values are drawn with plain modulo arithmetic on a fixed engine.

#include "pcell/cell.hpp"

#include <cstdint>
#include <random>

namespace pcell {

struct GenBounds {
    long val_lo = -4;
    long val_hi = 4;
    int max_cells = 5;
    long max_n = 3;
    long max_m = 2;
    int zero_cell_pct = 15;
    int unbounded_pct = 25;  // chance for each square to be ∅
};

using Rng = std::mt19937_64;

long rnd_range(Rng& rng, long lo, long hi);  // uniform-ish in [lo, hi]

PAdic random_value(const PrimeConfig& cfg, Rng& rng, const GenBounds& b);
Cell random_cell(const PrimeConfig& cfg, Rng& rng, const GenBounds& b);
Decomposition random_decomposition(const PrimeConfig& cfg, Rng& rng, const GenBounds& b);

// a decomposition containing a ball B_ρ(σ0), σ0 ≠ 0, deliberately
// covered by several cells none of which contains it alone — the W ≠ ∅
// configuration that drives the admissibilization loop
Decomposition random_straddle_instance(const PrimeConfig& cfg, Rng& rng, const GenBounds& b);

}  // namespace pcell
