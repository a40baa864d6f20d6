#pragma once

// Exact normal form for the sets denoted by finite unions of cells.
//
// At a joint resolution (N = lcm of the moduli n, M = max of the ac
// depths m) every 1-cell expands into height classes: for each residue
// ρ mod N and each unit a mod p^M lifting ac_m(λ), the heights
// γ ≡ ρ (mod N) inside the cell's interval each contribute one leaf
// ball B_{γ+M}(σ + a·p^γ). Bounded height ranges are expanded into
// explicit balls; the two infinite shapes stay symbolic:
//
//   * tails    — heights unbounded below. Such leaves eventually forget
//                their center (ord σ ≥ γ+M), so every tail is stored
//                re-centered at 0 with a class-aligned upper bound.
//   * ladders  — heights unbounded above, accumulating at the center σ.
//                The accumulation point pins σ, so ladders keep it.
//
// The explicit/symbolic boundary sits outside a window [lo, hi] that
// clears every valuation occurring in the input (including pairwise
// center distances) by a margin, which makes all symbolic parts either
// identical or disjoint and confines every nontrivial interaction to
// the explicit region. Merging explicit balls to maximal ones and
// plugging accumulation holes then yields a canonical form: two
// decompositions built with shared parameters denote the same set
// exactly when their forms are structurally equal.

#include "pcell/ball.hpp"
#include "pcell/cell.hpp"
#include "pcell/padic.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pcell {

struct FormParams {
    PrimeConfig cfg;
    long modulus = 1;    // N
    long depth = 1;      // M
    long lo_window = 0;  // tails end at the last class height <= lo_window
    long hi_window = 0;  // ladders start at the first class height >= hi_window
    std::size_t expansion_cap = 500000;

    bool operator==(const FormParams&) const = default;
};

// Accumulates every valuation relevant to a family of objects so the
// window can be placed beyond all of them. Pairwise differences of
// centers/points count as well: they are the branching heights of the
// anchor family and bound where symbolic parts could interact.
class WindowStats {
public:
    explicit WindowStats(const PrimeConfig& cfg) : cfg_(cfg) {}

    void add_value(long v);
    void add_valuation(Valuation v);
    void add_anchor(const PAdic& a);  // point or center: ord + pairwise distances
    void add_modulus(long n, long m);
    void add_cell(const Cell& c);
    void add_decomposition(const Decomposition& d);
    void add_ball(const Ball& b);

    FormParams finalize() const;

    long joint_modulus() const { return modulus_; }
    long joint_depth() const { return depth_; }
    bool has_values() const { return any_; }
    long min_value() const { return any_ ? lo_ : 0; }
    long max_value() const { return any_ ? hi_ : 0; }
    const PrimeConfig& config() const { return cfg_; }

private:
    PrimeConfig cfg_;
    long lo_ = 0, hi_ = 0;
    bool any_ = false;
    long modulus_ = 1, depth_ = 1;
    std::vector<PAdic> anchors_;
};

// heights ≡ residue (mod N), γ <= bound, each giving the maximal ball
// B_{γ+M}(ac·p^γ); bound is the last class height <= lo_window
struct TailPart {
    long residue = 0;
    BigInt ac = 1;
    long bound = 0;

    bool operator==(const TailPart&) const = default;
};

// heights ≡ residue (mod N), γ >= lo, leaves B_{γ+M}(center + ac·p^γ)
// accumulating at center; lo is the first class height >= hi_window
struct LadderPart {
    PAdic center;
    long residue = 0;
    BigInt ac = 1;
    long lo = 0;

    bool operator==(const LadderPart&) const = default;
};

class LeafForm {
public:
    LeafForm() = default;
    LeafForm(const FormParams& par, const Decomposition& d);

    const FormParams& params() const { return par_; }
    const std::vector<PAdic>& points() const { return pts_; }
    const std::vector<Ball>& balls() const { return balls_; }
    const std::vector<TailPart>& tails() const { return tails_; }
    const std::vector<LadderPart>& ladders() const { return ladders_; }

    // input had a □1 = ∅ cell with σ ≠ 0 (not pre-admissible)
    bool had_offcenter_tail() const { return offcenter_tail_; }

    bool empty() const {
        return pts_.empty() && balls_.empty() && tails_.empty() && ladders_.empty();
    }

    bool member(const PAdic& t) const;

    // b ⊆ denoted set, decided exactly
    bool covers_ball(const Ball& b) const;

    // b ∩ denoted set ≠ ∅, decided exactly
    bool ball_meets_anything(const Ball& b) const;

    // some single part (ball, tail leaf or ladder leaf) contains b
    bool part_contains_ball(const Ball& b) const;

    // the two denoted sets intersect (both forms must share params)
    bool intersects(const LeafForm& other) const;

    // structural equality = set equality for forms built with equal params
    bool same_set(const LeafForm& other) const;

    std::string describe() const;  // diagnostic dump, deterministic

private:
    void ingest(const Decomposition& d);
    void add_cell(const Cell& c);
    void canonicalize();
    void index_balls();
    bool has_ball(const Ball& b) const;
    bool some_ball_contains(const Ball& b) const;
    bool member_tail(const PAdic& t) const;
    bool member_ladder(const PAdic& t) const;
    bool covers_rec(const Ball& b, long guard) const;
    bool accumulation_covered(const PAdic& sigma, long from_radius) const;
    bool all_classes_tailed() const;
    std::size_t class_count() const;

    FormParams par_;
    std::vector<PAdic> pts_;
    std::vector<Ball> balls_;  // kept sorted by (radius, center)
    std::vector<long> ball_radii_;  // distinct finite radii present
    std::vector<TailPart> tails_;
    std::vector<LadderPart> ladders_;
    bool offcenter_tail_ = false;
};

// result of max_ball_in_union: none / a maximal ball / the whole space
struct MaxBallResult {
    enum Kind { none, ball, whole_space } kind = none;
    Ball value;  // valid only when kind == ball
};

// ---- operations on decompositions, each building forms with a shared
// ---- window derived from all of its arguments

LeafForm normalize_to_leafform(const PrimeConfig& cfg, const Decomposition& d);

bool set_equal(const PrimeConfig& cfg, const Decomposition& a, const Decomposition& b);
bool set_disjoint_cells(const PrimeConfig& cfg, const Cell& a, const Cell& b);
bool sets_intersect(const PrimeConfig& cfg, const Decomposition& a, const Decomposition& b);

// every grid-free identity check: parts pairwise disjoint and union = whole
bool symbolic_partition_check(const PrimeConfig& cfg, const std::vector<Decomposition>& parts,
                              const Decomposition& whole);

MaxBallResult max_ball_in_union(const PrimeConfig& cfg, const Decomposition& d, const PAdic& a);

std::optional<PAdic> find_point_outside(const PrimeConfig& cfg, const Decomposition& d,
                                        const Ball& b);

// form-level variants for callers that query one form repeatedly; the
// form's window must have been built with the query among its anchors
MaxBallResult max_ball_on_form(const LeafForm& f, const PAdic& a);
std::optional<PAdic> find_point_outside_on_form(const LeafForm& f, const Ball& b);

}  // namespace pcell
