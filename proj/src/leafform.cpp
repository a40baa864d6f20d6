#include "pcell/leafform.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace pcell {

namespace {

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

#define PCELL_CHECK(cond, msg) \
    do {                       \
        if (!(cond)) throw internal_error(msg); \
    } while (0)

bool tail_less(const TailPart& a, const TailPart& b) {
    if (a.residue != b.residue) return a.residue < b.residue;
    if (a.ac != b.ac) return a.ac < b.ac;
    return a.bound < b.bound;
}

bool ladder_less(const LadderPart& a, const LadderPart& b) {
    if (auto c = a.center <=> b.center; c != 0) return c < 0;
    if (a.residue != b.residue) return a.residue < b.residue;
    if (a.ac != b.ac) return a.ac < b.ac;
    return a.lo < b.lo;
}

long lcm_long(long a, long b) {
    long g = std::gcd(a, b);
    return a / g * b;
}

}  // namespace

// ---------------------------------------------------------------------------
// WindowStats

void WindowStats::add_value(long v) {
    if (!any_) {
        lo_ = hi_ = v;
        any_ = true;
    } else {
        lo_ = std::min(lo_, v);
        hi_ = std::max(hi_, v);
    }
}

void WindowStats::add_valuation(Valuation v) {
    if (!v.is_infinite()) add_value(v.finite());
}

void WindowStats::add_anchor(const PAdic& a) {
    add_valuation(valuation(a));
    for (const auto& other : anchors_)
        add_valuation(valuation(subtract(cfg_, a, other)));
    anchors_.push_back(a);
}

void WindowStats::add_modulus(long n, long m) {
    if (n < 1 || m < 1) throw domain_error("WindowStats: n, m must be >= 1");
    modulus_ = lcm_long(modulus_, n);
    depth_ = std::max(depth_, m);
}

void WindowStats::add_cell(const Cell& c) {
    if (c.cond.lower) add_value(*c.cond.lower);
    if (c.cond.upper) add_value(*c.cond.upper);
    if (!c.cond.is_zero_cell()) {
        add_modulus(c.cond.n, c.cond.m);
        add_valuation(valuation(c.cond.lambda));
    }
    add_anchor(c.center);
}

void WindowStats::add_decomposition(const Decomposition& d) {
    for (const auto& c : d.cells) add_cell(c);
}

void WindowStats::add_ball(const Ball& b) {
    add_valuation(b.radius());
    add_anchor(b.center());
}

FormParams WindowStats::finalize() const {
    FormParams par;
    par.cfg = cfg_;
    par.modulus = modulus_;
    par.depth = depth_;
    long margin = modulus_ + depth_ + 3;
    long lo = any_ ? lo_ : 0;
    long hi = any_ ? hi_ : 0;
    par.lo_window = lo - margin;
    par.hi_window = hi + margin;
    return par;
}

// ---------------------------------------------------------------------------
// LeafForm construction

LeafForm::LeafForm(const FormParams& par, const Decomposition& d) : par_(par) {
    ingest(d);
    canonicalize();
}

void LeafForm::ingest(const Decomposition& d) {
    for (const auto& c : d.cells) add_cell(c);
}

void LeafForm::add_cell(const Cell& c) {
    const PrimeConfig& cfg = par_.cfg;
    if (c.cond.is_zero_cell()) {
        if (!c.cond.upper) pts_.push_back(c.center);  // ord 0 = ∞ fails any "< β"
        return;
    }
    HeightSet h = leaf_heights(c.cond);
    if (h.empty) return;

    const long N = par_.modulus, M = par_.depth;
    PCELL_CHECK(N % c.cond.n == 0 && M >= c.cond.m, "LeafForm: params do not refine the cell");
    BigInt base_ac = angular_component(cfg, c.cond.lambda, c.cond.m);
    BigInt pm = cfg.pow(c.cond.m);
    BigInt lift_count = cfg.pow(M - c.cond.m);
    std::size_t produced = 0;

    for (long rho = h.residue; rho < N; rho += c.cond.n) {
        for (BigInt k = 0; k < lift_count; ++k) {
            BigInt ac = base_ac + k * pm;  // unit lift of ac_m(λ) to depth M
            std::optional<long> clo, chi;
            if (h.lo) clo = align_up(*h.lo, rho, N);
            if (h.hi) chi = align_down(*h.hi, rho, N);
            if (clo && chi && *clo > *chi) continue;

            long explicit_lo, explicit_hi;
            if (!h.lo) {
                long bound = align_down(par_.lo_window, rho, N);
                // re-centering the tail at 0 is exact only once ord σ >= γ+M
                PCELL_CHECK(c.center.is_zero() || bound <= c.center.exponent() - M,
                            "LeafForm: tail bound does not clear the center");
                tails_.push_back(TailPart{rho, ac, bound});
                if (!c.center.is_zero()) offcenter_tail_ = true;
                explicit_lo = bound + N;
            } else {
                explicit_lo = *clo;
            }
            if (!h.hi) {
                long start = align_up(par_.hi_window, rho, N);
                ladders_.push_back(LadderPart{c.center, rho, ac, start});
                explicit_hi = start - N;
            } else {
                explicit_hi = *chi;
            }
            for (long g = explicit_lo; g <= explicit_hi; g += N) {
                balls_.emplace_back(cfg, add(cfg, c.center, unit_times_power(cfg, ac, g)),
                                    Valuation(g + M));
                if (++produced > par_.expansion_cap)
                    throw enumeration_limit_error("LeafForm: explicit expansion exceeds cap");
            }
        }
    }
}

std::size_t LeafForm::class_count() const {
    BigInt units = par_.cfg.pow(par_.depth) - par_.cfg.pow(par_.depth - 1);
    return static_cast<std::size_t>(par_.modulus) * static_cast<std::size_t>(units);
}

bool LeafForm::all_classes_tailed() const { return tails_.size() == class_count(); }

void LeafForm::index_balls() {
    std::sort(balls_.begin(), balls_.end());
    balls_.erase(std::unique(balls_.begin(), balls_.end()), balls_.end());
    ball_radii_.clear();
    for (const auto& b : balls_) {
        long r = b.radius().finite();  // point balls never live in balls_
        if (ball_radii_.empty() || ball_radii_.back() != r) ball_radii_.push_back(r);
    }
}

bool LeafForm::has_ball(const Ball& b) const {
    return std::binary_search(balls_.begin(), balls_.end(), b,
                              [](const Ball& x, const Ball& y) { return x < y; });
}

// containment test against the sorted ball list: walk the distinct
// radii from coarse to fine; o ⊇ b iff o is b's ancestor at o's radius
bool LeafForm::some_ball_contains(const Ball& b) const {
    for (long r : ball_radii_) {
        if (Valuation(r) > b.radius()) break;
        if (has_ball(Ball(par_.cfg, b.center(), Valuation(r)))) return true;
    }
    return false;
}

void LeafForm::canonicalize() {
    const PrimeConfig& cfg = par_.cfg;

    std::sort(tails_.begin(), tails_.end(), tail_less);
    tails_.erase(std::unique(tails_.begin(), tails_.end()), tails_.end());
    for (std::size_t i = 1; i < tails_.size(); ++i)
        PCELL_CHECK(tails_[i - 1].residue != tails_[i].residue || tails_[i - 1].ac != tails_[i].ac,
                    "LeafForm: same tail class with two bounds");

    std::sort(ladders_.begin(), ladders_.end(), ladder_less);
    ladders_.erase(std::unique(ladders_.begin(), ladders_.end()), ladders_.end());

    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    index_balls();

    bool changed = true;
    while (changed) {
        changed = false;

        // balls nested in coarser balls
        {
            std::vector<Ball> keep;
            keep.reserve(balls_.size());
            for (const auto& b : balls_) {
                bool inside = false;
                for (long r : ball_radii_) {
                    if (r >= b.radius().finite()) break;
                    if (has_ball(Ball(cfg, b.center(), Valuation(r)))) {
                        inside = true;
                        break;
                    }
                }
                if (!inside) keep.push_back(b);
            }
            if (keep.size() != balls_.size()) {
                balls_ = std::move(keep);
                index_balls();
                changed = true;
            }
        }

        // sibling merge: p disjoint balls of radius r sharing the parent
        // of radius r-1 are exactly that parent
        {
            std::map<std::pair<long, PAdic>, long> groups;
            for (const auto& b : balls_) {
                long r = b.radius().finite();
                ++groups[{r, Ball::canonical_center(cfg, b.center(), Valuation(r - 1))}];
            }
            std::vector<Ball> parents;
            for (auto& [key, count] : groups)
                if (count == cfg.p) parents.emplace_back(cfg, key.second, Valuation(key.first - 1));
            if (!parents.empty()) {
                std::vector<Ball> keep;
                keep.reserve(balls_.size());
                for (const auto& b : balls_) {
                    long r = b.radius().finite();
                    auto it = groups.find(
                        {r, Ball::canonical_center(cfg, b.center(), Valuation(r - 1))});
                    if (it == groups.end() || it->second != cfg.p) keep.push_back(b);
                }
                keep.insert(keep.end(), parents.begin(), parents.end());
                balls_ = std::move(keep);
                index_balls();
                changed = true;
                continue;  // cascade further merges before the other rules
            }
        }

        // a ladder whose accumulation center sits inside a ball is fully
        // absorbed: every symbolic leaf has radius >= hi_window + depth,
        // which no explicit ball exceeds
        for (auto it = ladders_.begin(); it != ladders_.end();) {
            bool dead = false;
            for (long r : ball_radii_)
                if (has_ball(Ball(cfg, it->center, Valuation(r)))) {
                    dead = true;
                    break;
                }
            if (dead) {
                it = ladders_.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }

        // points absorbed by any other part
        for (auto it = pts_.begin(); it != pts_.end();) {
            bool inside = false;
            for (long r : ball_radii_)
                if (has_ball(Ball(cfg, *it, Valuation(r)))) {
                    inside = true;
                    break;
                }
            if (!inside && (member_tail(*it) || member_ladder(*it))) inside = true;
            if (inside) {
                it = pts_.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }

        // plug the hole: a complete family of ladders at a center that is
        // itself a member forms a full ball around it
        if (!changed) {
            for (const auto& q : pts_) {
                std::vector<std::size_t> at;
                for (std::size_t i = 0; i < ladders_.size(); ++i)
                    if (ladders_[i].center == q) at.push_back(i);
                if (at.size() != class_count() || at.empty()) continue;
                long gstar = ladders_[at.front()].lo;
                for (auto i : at) gstar = std::max(gstar, ladders_[i].lo);
                for (auto i : at) {
                    const auto& ld = ladders_[i];
                    for (long g = ld.lo; g < gstar; g += par_.modulus)
                        balls_.emplace_back(cfg, add(cfg, q, unit_times_power(cfg, ld.ac, g)),
                                            Valuation(g + par_.depth));
                }
                balls_.emplace_back(cfg, q, Valuation(gstar));
                for (auto it = at.rbegin(); it != at.rend(); ++it)
                    ladders_.erase(ladders_.begin() + static_cast<std::ptrdiff_t>(*it));
                pts_.erase(std::find(pts_.begin(), pts_.end(), q));
                index_balls();
                changed = true;
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// membership

bool LeafForm::member_tail(const PAdic& t) const {
    if (t.is_zero()) return false;
    long v = t.exponent();
    long rho = floor_mod(v, par_.modulus);
    BigInt ac = angular_component(par_.cfg, t, par_.depth);
    for (const auto& tl : tails_)
        if (tl.residue == rho && tl.ac == ac && v <= tl.bound) return true;
    return false;
}

bool LeafForm::member_ladder(const PAdic& t) const {
    for (const auto& ld : ladders_) {
        PAdic d = subtract(par_.cfg, t, ld.center);
        if (d.is_zero()) continue;
        long g = d.exponent();
        if (g < ld.lo || floor_mod(g, par_.modulus) != ld.residue) continue;
        if (angular_component(par_.cfg, d, par_.depth) == ld.ac) return true;
    }
    return false;
}

bool LeafForm::member(const PAdic& t) const {
    if (std::binary_search(pts_.begin(), pts_.end(), t)) return true;
    for (long r : ball_radii_)
        if (has_ball(Ball(par_.cfg, t, Valuation(r)))) return true;
    return member_tail(t) || member_ladder(t);
}

// ---------------------------------------------------------------------------
// ball coverage

bool LeafForm::part_contains_ball(const Ball& b) const {
    const PrimeConfig& cfg = par_.cfg;
    if (some_ball_contains(b)) return true;
    // tail leaf ⊇ b
    if (!b.center().is_zero()) {
        long v = b.center().exponent();
        if (Valuation(v + par_.depth) <= b.radius()) {
            long rho = floor_mod(v, par_.modulus);
            BigInt ac = angular_component(cfg, b.center(), par_.depth);
            for (const auto& tl : tails_)
                if (tl.residue == rho && tl.ac == ac && v <= tl.bound) return true;
        }
    }
    // ladder leaf ⊇ b
    for (const auto& ld : ladders_) {
        PAdic d = subtract(cfg, b.center(), ld.center);
        if (d.is_zero()) continue;
        long g = d.exponent();
        if (g < ld.lo || floor_mod(g, par_.modulus) != ld.residue) continue;
        if (Valuation(g + par_.depth) > b.radius()) continue;
        if (angular_component(cfg, d, par_.depth) == ld.ac) return true;
    }
    if (b.radius().is_infinite()) return member(b.center());
    return false;
}

namespace {

// Does the progression {B_{γ+M}(origin + ac·p^γ) : γ ≡ rho (mod N),
// γ ∈ [lo, hi]} own a leaf that is a subset of b? A leaf sits inside b
// iff γ + M >= radius(b) and its center lies in b; writing d for
// b.center − origin, ord(ac·p^γ − d) collapses to min(γ, ord d) except
// at the single height γ = ord d, which is checked exactly.
bool progression_leaf_inside(const PrimeConfig& cfg, const PAdic& origin, long rho, long N, long M,
                             std::optional<long> lo, std::optional<long> hi, const BigInt& ac,
                             const Ball& b) {
    if (b.radius().is_infinite()) return false;
    long r = b.radius().finite();
    auto exists_height_ge = [&](long from) {
        long g = align_up(from, rho, N);
        if (lo && g < *lo) g = *lo;
        return !hi || g <= *hi;
    };
    PAdic d = subtract(cfg, b.center(), origin);
    if (d.is_zero()) return exists_height_ge(r);  // leaf center ∈ b iff γ >= r
    long vc = d.exponent();
    if (vc >= r) return exists_height_ge(r);
    // only the height γ = ord d can interact
    if (floor_mod(vc, N) != rho) return false;
    if ((lo && vc < *lo) || (hi && vc > *hi)) return false;
    if (vc + M < r) return false;
    PAdic leafc = add(cfg, origin, unit_times_power(cfg, ac, vc));
    return valuation(subtract(cfg, leafc, b.center())) >= Valuation(r);
}

}  // namespace

bool LeafForm::ball_meets_anything(const Ball& b) const {
    const PrimeConfig& cfg = par_.cfg;
    for (const auto& q : pts_)
        if (ball_member(cfg, b, q)) return true;
    if (part_contains_ball(b)) return true;
    for (const auto& o : balls_)
        if (ball_contains(cfg, b, o)) return true;
    for (const auto& tl : tails_)
        if (progression_leaf_inside(cfg, PAdic(), tl.residue, par_.modulus, par_.depth,
                                    std::nullopt, tl.bound, tl.ac, b))
            return true;
    for (const auto& ld : ladders_)
        if (progression_leaf_inside(cfg, ld.center, ld.residue, par_.modulus, par_.depth, ld.lo,
                                    std::nullopt, ld.ac, b))
            return true;
    return false;
}

bool LeafForm::accumulation_covered(const PAdic& sigma, long /*from_radius*/) const {
    std::size_t have = 0;
    for (const auto& ld : ladders_)
        if (ld.center == sigma) ++have;
    return have == class_count() && member(sigma);
}

bool LeafForm::covers_rec(const Ball& b, long guard) const {
    PCELL_CHECK(guard > 0, "LeafForm::covers_ball: depth guard exhausted");
    const PrimeConfig& cfg = par_.cfg;
    if (b.is_point()) return member(b.center());
    if (part_contains_ball(b)) return true;

    long r = b.radius().finite();
    const long N = par_.modulus, M = par_.depth;

    // deep around 0: only tails reach below the window
    if (b.center().is_zero() && r < par_.lo_window - N)
        return all_classes_tailed() && covers_rec(Ball(cfg, PAdic(), par_.lo_window - N), guard - 1);

    // deep around an accumulation center: B_r(σ) is {σ} plus one leaf
    // slot per class and height >= r, so coverage is a direct check.
    // Without an accumulation center inside, b can still straddle single
    // ladder leaves at its fixed distance to some center; subdivision
    // resolves those within depth <= M. If not even that is possible the
    // ball meets at most isolated points, which cannot cover it.
    if (r >= par_.hi_window + M + 1) {
        for (const auto& ld : ladders_)
            if (ball_member(cfg, b, ld.center)) return accumulation_covered(ld.center, r);
        bool sphere_locked = false;
        for (const auto& ld : ladders_) {
            PAdic d = subtract(cfg, b.center(), ld.center);
            if (!d.is_zero() && d.exponent() >= r - M) sphere_locked = true;
        }
        if (!sphere_locked) return false;
    }

    if (!ball_meets_anything(b)) return false;

    for (const auto& child : subballs(cfg, b, 1))
        if (!covers_rec(child, guard - 1)) return false;
    return true;
}

bool LeafForm::covers_ball(const Ball& b) const {
    long guard = (par_.hi_window - par_.lo_window) + 2 * par_.depth + 2 * par_.modulus + 64;
    return covers_rec(b, guard);
}

// ---------------------------------------------------------------------------
// intersection

bool LeafForm::intersects(const LeafForm& other) const {
    PCELL_CHECK(par_ == other.par_, "LeafForm::intersects: mismatched params");
    const PrimeConfig& cfg = par_.cfg;
    for (const auto& q : pts_)
        if (other.member(q)) return true;
    for (const auto& q : other.pts_)
        if (member(q)) return true;
    // ball vs anything of the other form, both directions
    auto ball_vs = [&](const LeafForm& owner, const Ball& b) {
        if (owner.part_contains_ball(b)) return true;
        for (const auto& tl : owner.tails_)
            if (progression_leaf_inside(cfg, PAdic(), tl.residue, par_.modulus, par_.depth,
                                        std::nullopt, tl.bound, tl.ac, b))
                return true;
        for (const auto& ld : owner.ladders_)
            if (progression_leaf_inside(cfg, ld.center, ld.residue, par_.modulus, par_.depth,
                                        ld.lo, std::nullopt, ld.ac, b))
                return true;
        return false;
    };
    for (const auto& b : balls_)
        if (ball_vs(other, b)) return true;
    for (const auto& b : other.balls_)
        if (ball_vs(*this, b)) return true;
    // tails vs tails: identical class ranges or disjoint
    for (const auto& a : tails_)
        for (const auto& b : other.tails_)
            if (a.residue == b.residue && a.ac == b.ac) return true;
    // ladders vs ladders: same accumulation center and class, or disjoint
    // (distinct centers branch inside the window, below every symbolic leaf)
    for (const auto& a : ladders_)
        for (const auto& b : other.ladders_)
            if (a.center == b.center && a.residue == b.residue && a.ac == b.ac) return true;
    return false;
}

bool LeafForm::same_set(const LeafForm& other) const {
    PCELL_CHECK(par_ == other.par_, "LeafForm::same_set: mismatched params");
    return pts_ == other.pts_ && balls_ == other.balls_ && tails_ == other.tails_ &&
           ladders_ == other.ladders_;
}

std::string LeafForm::describe() const {
    std::ostringstream os;
    os << "points:";
    for (const auto& q : pts_) os << ' ' << to_string(q);
    os << "\nballs:";
    for (const auto& b : balls_) os << " B(" << to_string(b.center()) << ',' << b.radius().str() << ')';
    os << "\ntails:";
    for (const auto& t : tails_)
        os << " {rho=" << t.residue << ",ac=" << t.ac.str() << ",<=" << t.bound << '}';
    os << "\nladders:";
    for (const auto& l : ladders_)
        os << " {at=" << to_string(l.center) << ",rho=" << l.residue << ",ac=" << l.ac.str()
           << ",>=" << l.lo << '}';
    os << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// top-level operations

LeafForm normalize_to_leafform(const PrimeConfig& cfg, const Decomposition& d) {
    WindowStats st(cfg);
    st.add_decomposition(d);
    return LeafForm(st.finalize(), d);
}

bool set_equal(const PrimeConfig& cfg, const Decomposition& a, const Decomposition& b) {
    WindowStats st(cfg);
    st.add_decomposition(a);
    st.add_decomposition(b);
    FormParams par = st.finalize();
    return LeafForm(par, a).same_set(LeafForm(par, b));
}

bool sets_intersect(const PrimeConfig& cfg, const Decomposition& a, const Decomposition& b) {
    WindowStats st(cfg);
    st.add_decomposition(a);
    st.add_decomposition(b);
    FormParams par = st.finalize();
    return LeafForm(par, a).intersects(LeafForm(par, b));
}

bool set_disjoint_cells(const PrimeConfig& cfg, const Cell& a, const Cell& b) {
    return !sets_intersect(cfg, Decomposition{{a}}, Decomposition{{b}});
}

bool symbolic_partition_check(const PrimeConfig& cfg, const std::vector<Decomposition>& parts,
                              const Decomposition& whole) {
    WindowStats st(cfg);
    for (const auto& p : parts) st.add_decomposition(p);
    st.add_decomposition(whole);
    FormParams par = st.finalize();
    std::vector<LeafForm> forms;
    forms.reserve(parts.size());
    Decomposition all;
    for (const auto& p : parts) {
        forms.emplace_back(par, p);
        all.cells.insert(all.cells.end(), p.cells.begin(), p.cells.end());
    }
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = i + 1; j < forms.size(); ++j)
            if (forms[i].intersects(forms[j])) return false;
    return LeafForm(par, all).same_set(LeafForm(par, whole));
}

MaxBallResult max_ball_on_form(const LeafForm& f, const PAdic& a) {
    const FormParams& par = f.params();
    const PrimeConfig& cfg = par.cfg;
    if (!f.member(a)) return {};

    // starting radius: the innermost structural part containing a
    std::optional<long> start;
    for (const auto& b : f.balls())
        if (ball_member(cfg, b, a)) start = b.radius().finite();
    if (!start) {
        if (!a.is_zero()) {
            long v = a.exponent();
            BigInt ac = angular_component(cfg, a, par.depth);
            for (const auto& tl : f.tails())
                if (tl.residue == floor_mod(v, par.modulus) && tl.ac == ac && v <= tl.bound)
                    start = v + par.depth;
        }
        for (const auto& ld : f.ladders()) {
            PAdic dd = subtract(cfg, a, ld.center);
            if (dd.is_zero()) continue;
            long g = dd.exponent();
            if (g >= ld.lo && floor_mod(g, par.modulus) == ld.residue &&
                angular_component(cfg, dd, par.depth) == ld.ac)
                start = g + par.depth;
        }
    }
    if (!start) return {};  // isolated point of the union

    long floor_r = par.lo_window - par.modulus - 2;
    long r = *start;
    while (r > floor_r && f.covers_ball(Ball(cfg, a, Valuation(r - 1)))) --r;
    if (r <= floor_r) return {MaxBallResult::whole_space, Ball()};
    return {MaxBallResult::ball, Ball(cfg, a, Valuation(r))};
}

MaxBallResult max_ball_in_union(const PrimeConfig& cfg, const Decomposition& d, const PAdic& a) {
    WindowStats st(cfg);
    st.add_decomposition(d);
    st.add_anchor(a);
    LeafForm f(st.finalize(), d);
    return max_ball_on_form(f, a);
}

namespace {

std::optional<PAdic> outside_rec(const LeafForm& f, const Ball& b, long guard) {
    PCELL_CHECK(guard > 0, "find_point_outside: depth guard exhausted");
    const FormParams& par = f.params();
    const PrimeConfig& cfg = par.cfg;
    if (f.covers_ball(b)) return std::nullopt;
    if (b.is_point()) return b.center();  // not covered = not a member
    long r = b.radius().finite();

    // deep around 0: a missing tail class yields a witness height
    if (b.center().is_zero() && r < par.lo_window - par.modulus) {
        BigInt pM = cfg.pow(par.depth);
        for (long rho = 0; rho < par.modulus; ++rho) {
            for (BigInt ac = 1; ac < pM; ++ac) {
                if (ac % cfg.p == 0) continue;
                bool present = false;
                for (const auto& tl : f.tails())
                    if (tl.residue == rho && tl.ac == ac) present = true;
                if (!present) {
                    long h = align_down(par.lo_window, rho, par.modulus);
                    PAdic w = unit_times_power(cfg, ac, h);
                    if (!f.member(w)) return w;
                }
            }
        }
        return outside_rec(f, Ball(cfg, PAdic(), Valuation(par.lo_window - par.modulus)),
                           guard - 1);
    }

    // deep around an accumulation center: coverage fails because σ is
    // missing or some class is, and either yields a direct witness
    if (r >= par.hi_window + par.depth + 1) {
        for (const auto& ld : f.ladders()) {
            if (!ball_member(cfg, b, ld.center)) continue;
            const PAdic& sigma = ld.center;
            if (!f.member(sigma)) return sigma;
            BigInt pM = cfg.pow(par.depth);
            for (long rho = 0; rho < par.modulus; ++rho)
                for (BigInt ac = 1; ac < pM; ++ac) {
                    if (ac % cfg.p == 0) continue;
                    bool present = false;
                    for (const auto& l2 : f.ladders())
                        if (l2.center == sigma && l2.residue == rho && l2.ac == ac) present = true;
                    if (!present) {
                        long h = align_up(r, rho, par.modulus);
                        PAdic w = add(cfg, sigma, unit_times_power(cfg, ac, h));
                        if (!f.member(w)) return w;
                    }
                }
            throw internal_error("find_point_outside: accumulation ball uncovered but complete");
        }
        bool sphere_locked = false;
        for (const auto& ld : f.ladders()) {
            PAdic d = subtract(cfg, b.center(), ld.center);
            if (!d.is_zero() && d.exponent() >= r - par.depth) sphere_locked = true;
        }
        if (!sphere_locked) {
            // only isolated points can meet b here: step aside from them
            for (long j = 0; j <= static_cast<long>(f.points().size()) + 1; ++j) {
                PAdic w = j == 0 ? b.center() : add(cfg, b.center(), pow_p(cfg, r + j));
                if (!f.member(w)) return w;
            }
            throw internal_error("find_point_outside: point-only ball without witness");
        }
    }

    if (!f.ball_meets_anything(b)) return canonical_point(b);

    for (const auto& child : subballs(cfg, b, 1)) {
        if (!f.covers_ball(child))
            if (auto w = outside_rec(f, child, guard - 1)) return w;
    }
    throw internal_error("find_point_outside: uncovered ball without witness");
}

}  // namespace

std::optional<PAdic> find_point_outside_on_form(const LeafForm& f, const Ball& b) {
    const FormParams& par = f.params();
    auto w = outside_rec(f, b,
                         (par.hi_window - par.lo_window) + 2 * par.depth + 2 * par.modulus + 64);
    if (w)
        PCELL_CHECK(!f.member(*w) && ball_member(par.cfg, b, *w),
                    "find_point_outside: invalid witness");
    return w;
}

std::optional<PAdic> find_point_outside(const PrimeConfig& cfg, const Decomposition& d,
                                        const Ball& b) {
    WindowStats st(cfg);
    st.add_decomposition(d);
    st.add_ball(b);
    LeafForm f(st.finalize(), d);
    return find_point_outside_on_form(f, b);
}

}  // namespace pcell
