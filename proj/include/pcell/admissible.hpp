#pragma once

// Admissible decompositions: the pre-admissibility conditions (a)-(c),
// the obstruction set W, and the constructive transformations that turn
// an arbitrary decomposition into an equivalent admissible one. Every
// transformation step records a trace entry whose before/after sets are
// equal, and the W-elimination loop strictly shrinks W each round.

#include "pcell/cell.hpp"
#include "pcell/leafform.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pcell {

struct PreadmissibilityViolation {
    std::size_t cell_index;
    char condition;  // 'a', 'b' or 'c'
    std::string note;
};

struct PreadmissibilityReport {
    bool ok = true;
    std::vector<PreadmissibilityViolation> violations;
};

enum class StepRule {
    drop_empty,          // "restrict"-style normalization, set-preserving
    zero_cell_interior,  // Lemma on pre-admissible decompositions, fix of (a)
    recenter,            // fix of (b)/(c): split off center-0 cells
    case_d1,             // W-elimination, straddled ball containing 0
    case_d2,             // W-elimination, ball at finite scale from 0
    case_d3,             // W-elimination, unreachable over Z-valued fields
};

const char* step_rule_name(StepRule r);

// one traced J' member: the heights its leaves contribute inside the
// straddled ball, enumerated and via the arithmetic-progression formula
struct YRecord {
    std::size_t cell_index;
    long gamma1, gamma2;
    long lambda_ord, n;
    std::vector<long> enumerated;
    bool formula_matches;
};

struct TraceStep {
    StepRule rule;
    Decomposition before, after;
    std::size_t w_before = 0, w_after = 0;
    std::vector<YRecord> y_records;
};

struct AdmissibilizeTrace {
    std::vector<TraceStep> steps;
};

// Conditions (a)-(c). Cells denoting the empty set are exempt: they
// carry no geometry and the transformations drop them anyway.
PreadmissibilityReport is_preadmissible(const PrimeConfig& cfg, const Decomposition& d);

// centers of the open nonzero-centered subfamily whose maximal ball in
// that subfamily's union is not contained in any single of its cells
std::vector<PAdic> compute_W(const PrimeConfig& cfg, const Decomposition& d);

bool is_admissible(const PrimeConfig& cfg, const Decomposition& d);

std::pair<Decomposition, AdmissibilizeTrace> preadmissibilize(const PrimeConfig& cfg,
                                                              const Decomposition& d);

// precondition: d pre-admissible
std::pair<Decomposition, AdmissibilizeTrace> admissibilize(const PrimeConfig& cfg,
                                                           const Decomposition& d);

std::pair<Decomposition, AdmissibilizeTrace> decompose_admissible(const PrimeConfig& cfg,
                                                                  const Decomposition& d);

// The three ball-covering families of the W-elimination case split,
// each denoting exactly B_ρ(σ0). Condition (b) forces every element of
// the open nonzero-centered union to share the valuation of its cell's
// center, so a straddled ball never contains 0 and d=1 cannot fire on
// pre-admissible input; over Γ = Z the distance ρ − ord σ0 is then a
// concrete positive integer and d=2 always applies. Both other
// builders are kept and exercised directly.
std::vector<Cell> build_case_d1(const PrimeConfig& cfg, long rho);  // pre: 0 ∈ B_ρ(σ0)
Cell build_case_d2(const PrimeConfig& cfg, const PAdic& sigma0, long rho);
Cell build_case_d3(const PrimeConfig& cfg, const PAdic& zeta, const PAdic& sigma0, long rho);

}  // namespace pcell
