#include "pcell/admissible.hpp"

#include <algorithm>

namespace pcell {

namespace {

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

Decomposition drop_empty_cells(const Decomposition& d) {
    Decomposition out;
    for (const auto& c : d.cells)
        if (!cell_empty(c)) out.cells.push_back(c);
    return out;
}

bool in_interior(const PrimeConfig& cfg, const Decomposition& d, const PAdic& a) {
    auto mb = max_ball_in_union(cfg, d, a);
    return mb.kind != MaxBallResult::none;
}

std::vector<std::size_t> open_nonzero_indices(const Decomposition& d) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        const Cell& c = d.cells[i];
        if (!c.center.is_zero() && c.cond.lower && c.cond.upper) idx.push_back(i);
    }
    return idx;
}

Decomposition select_cells(const Decomposition& d, const std::vector<std::size_t>& idx) {
    Decomposition out;
    for (auto i : idx) out.cells.push_back(d.cells[i]);
    return out;
}

}  // namespace

const char* step_rule_name(StepRule r) {
    switch (r) {
        case StepRule::drop_empty: return "restrict";
        case StepRule::zero_cell_interior: return "zero-cell-interior";
        case StepRule::recenter: return "recenter";
        case StepRule::case_d1: return "case-d1";
        case StepRule::case_d2: return "case-d2";
        case StepRule::case_d3: return "case-d3";
    }
    return "?";
}

PreadmissibilityReport is_preadmissible(const PrimeConfig& cfg, const Decomposition& d) {
    PreadmissibilityReport rep;
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        const Cell& c = d.cells[i];
        if (cell_empty(c)) continue;
        if (c.cond.is_zero_cell()) {
            if (!c.center.is_zero() && in_interior(cfg, d, c.center))
                rep.violations.push_back({i, 'a', "0-cell center lies in the interior"});
            continue;
        }
        if (c.center.is_zero()) continue;
        if (c.cond.lower) {
            if (Valuation(c.center.exponent()) > Valuation(*c.cond.lower))
                rep.violations.push_back({i, 'b', "ord(center) exceeds the lower bound"});
        } else {
            rep.violations.push_back({i, 'c', "no lower bound but nonzero center"});
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

std::vector<PAdic> compute_W(const PrimeConfig& cfg, const Decomposition& d) {
    auto idx = open_nonzero_indices(d);
    Decomposition star = select_cells(d, idx);
    std::vector<PAdic> centers;
    for (const auto& c : star.cells) centers.push_back(c.center);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    if (centers.empty()) return {};

    WindowStats st(cfg);
    st.add_decomposition(star);
    LeafForm form(st.finalize(), star);

    std::vector<PAdic> w;
    for (const auto& sigma : centers) {
        auto mb = max_ball_on_form(form, sigma);
        if (mb.kind != MaxBallResult::ball) continue;
        bool single = false;
        for (const auto& c : star.cells)
            if (cell_contains_ball(cfg, c, mb.value)) {
                single = true;
                break;
            }
        if (!single) w.push_back(sigma);
    }
    return w;
}

bool is_admissible(const PrimeConfig& cfg, const Decomposition& d) {
    return is_preadmissible(cfg, d).ok && compute_W(cfg, d).empty();
}

// ---------------------------------------------------------------------------
// pre-admissibilization

namespace {

// fix one (a)-violation: absorb the interior 0-cell {σ} into the
// maximal ball B_γ(σ) of the nearby union, written as a single cell
// around ζ = σ + p^{γ-1}, and cut from every nearby cell exactly the
// leaves that ball swallows
Decomposition fix_interior_zero_cell(const PrimeConfig& cfg, const Decomposition& d,
                                     std::size_t j) {
    const PAdic sigma = d.cells[j].center;
    std::vector<std::size_t> near, far;
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        if (i == j) continue;
        if (cell_closure_member(cfg, d.cells[i], sigma))
            near.push_back(i);
        else
            far.push_back(i);
    }
    Decomposition xprime = select_cells(d, near);
    xprime.cells.push_back(d.cells[j]);
    auto mb = max_ball_in_union(cfg, xprime, sigma);
    long gamma;
    if (mb.kind == MaxBallResult::ball)
        gamma = mb.value.radius().finite();
    else if (mb.kind == MaxBallResult::whole_space)
        gamma = sigma.exponent();
    else
        throw internal_error("fix_interior_zero_cell: interior point without a ball");

    Ball target(cfg, sigma, Valuation(gamma));
    PAdic zeta = add(cfg, sigma, pow_p(cfg, gamma - 1));
    Cell dz;
    dz.center = zeta;
    dz.cond.lower = gamma - 2;
    dz.cond.upper = gamma;
    dz.cond.lambda = subtract(cfg, sigma, zeta);
    dz.cond.n = 1;
    dz.cond.m = 1;

    Decomposition out = select_cells(d, far);
    out.cells.push_back(dz);
    for (auto i : near) {
        const Cell& c = d.cells[i];
        if (c.cond.is_zero_cell()) continue;  // duplicate 0-cell at σ, swallowed
        PAdic diff = subtract(cfg, sigma, c.center);
        if (diff.is_zero()) {
            // leaves at heights >= γ sit inside the target ball
            Cell t = c;
            t.cond.upper = c.cond.upper ? std::min(*c.cond.upper, gamma) : gamma;
            if (!cell_empty(t)) out.cells.push_back(t);
        } else {
            // σ lies in the single leaf at height ord(σ − center), which
            // the maximal ball swallows whole; cut that height out
            long h = diff.exponent();
            Cell below = c, above = c;
            below.cond.upper = c.cond.upper ? std::min(*c.cond.upper, h) : h;
            above.cond.lower = c.cond.lower ? std::max(*c.cond.lower, h) : h;
            if (!cell_empty(below)) out.cells.push_back(below);
            if (!cell_empty(above)) out.cells.push_back(above);
        }
    }
    return out;
}

// fix one (b)/(c)-violation: re-center every height band of the cell at
// 0, keeping the part above ord σ centered at σ
Decomposition fix_recenter(const PrimeConfig& cfg, const Decomposition& d, std::size_t j) {
    const Cell& c = d.cells[j];
    const long e = c.center.exponent();
    const long n = c.cond.n, m = c.cond.m;
    const BigInt L = angular_component(cfg, c.cond.lambda, m);
    const BigInt V = angular_component(cfg, c.center, m);
    const BigInt pm = cfg.pow(m);
    HeightSet h = leaf_heights(c.cond);

    Decomposition out;
    for (std::size_t i = 0; i < d.cells.size(); ++i)
        if (i != j) out.cells.push_back(d.cells[i]);

    // heights > e: same center, now compliant since α' = e = ord σ
    {
        Cell top = c;
        top.cond.lower = c.cond.lower ? std::max(*c.cond.lower, e) : e;
        if (!cell_empty(top)) out.cells.push_back(top);
    }
    // heights <= e − m: the center contributes nothing to ord or ac_m
    {
        Cell low = c;
        low.center = PAdic();
        low.cond.upper = c.cond.upper ? std::min(*c.cond.upper, e - m + 1) : e - m + 1;
        if (!cell_empty(low)) out.cells.push_back(low);
    }
    // single heights e−m < γ < e: ac of t and of t−σ determine each other
    for (long g = e - m + 1; g <= e - 1; ++g) {
        if (!h.contains(g)) continue;
        long i = e - g;
        BigInt w = (L + V * cfg.pow(i)) % pm;
        Cell band;
        band.center = PAdic();
        band.cond.lower = g - 1;
        band.cond.upper = g + 1;
        band.cond.lambda = PAdic(cfg, w, g);
        band.cond.n = n;
        band.cond.m = m;
        out.cells.push_back(band);
    }
    // height e: ord(t) moves above e; the offset c := ac(λ)+ac(σ) decides
    if (h.contains(e)) {
        BigInt off = (L + V) % pm;
        if (off == 0) {
            // the slice is the full ball B_{e+m}(0): split into {0} and
            // the q_K − 1 top cones
            Cell f0;
            f0.center = PAdic();
            out.cells.push_back(f0);  // default condition is the 0-cell {0}
            for (long r = 1; r < cfg.p; ++r) {
                Cell fr;
                fr.center = PAdic();
                fr.cond.lower = e + m - 1;
                fr.cond.lambda = PAdic::from_int(cfg, r);
                fr.cond.n = 1;
                fr.cond.m = 1;
                out.cells.push_back(fr);
            }
        } else {
            long k = 0;
            BigInt u = off;
            while (u % cfg.p == 0) {
                u /= cfg.p;
                ++k;
            }
            Cell e0;
            e0.center = PAdic();
            e0.cond.lower = e + k - 1;
            e0.cond.upper = e + k + 1;
            e0.cond.lambda = PAdic(cfg, u, e + k);
            e0.cond.n = n;
            e0.cond.m = m - k;
            out.cells.push_back(e0);
        }
    }
    return out;
}

}  // namespace

std::pair<Decomposition, AdmissibilizeTrace> preadmissibilize(const PrimeConfig& cfg,
                                                              const Decomposition& d) {
    AdmissibilizeTrace trace;
    Decomposition cur = drop_empty_cells(d);
    if (cur.cells.size() != d.cells.size())
        trace.steps.push_back({StepRule::drop_empty, d, cur, 0, 0, {}});

    for (int rounds = 0; rounds < 10000; ++rounds) {
        auto rep = is_preadmissible(cfg, cur);
        if (rep.ok) return {cur, trace};
        // fix an (a)-violation first: the recenter fix never adds
        // off-zero 0-cells, so the (a)-count is monotone afterwards
        const PreadmissibilityViolation* pick = &rep.violations.front();
        for (const auto& v : rep.violations)
            if (v.condition == 'a') {
                pick = &v;
                break;
            }
        Decomposition next = pick->condition == 'a'
                                 ? fix_interior_zero_cell(cfg, cur, pick->cell_index)
                                 : fix_recenter(cfg, cur, pick->cell_index);
        next = drop_empty_cells(next);
        trace.steps.push_back({pick->condition == 'a' ? StepRule::zero_cell_interior
                                                      : StepRule::recenter,
                               cur, next, 0, 0, {}});
        cur = std::move(next);
    }
    throw internal_error("preadmissibilize: did not converge");
}

// ---------------------------------------------------------------------------
// admissibilization (W-elimination)

std::vector<Cell> build_case_d1(const PrimeConfig& cfg, long rho) {
    std::vector<Cell> cells;
    Cell origin;  // the 0-cell {0}
    origin.center = PAdic();
    cells.push_back(origin);
    for (long i = 1; i < cfg.p; ++i) {
        Cell cone;
        cone.center = PAdic();
        cone.cond.lower = rho - 1;
        cone.cond.lambda = PAdic::from_int(cfg, i);
        cone.cond.n = 1;
        cone.cond.m = 1;
        cells.push_back(cone);
    }
    return cells;
}

Cell build_case_d2(const PrimeConfig& cfg, const PAdic& sigma0, long rho) {
    long mprime = rho - sigma0.exponent();
    if (sigma0.is_zero() || mprime < 1)
        throw domain_error("build_case_d2: requires 0 outside the ball");
    Cell e0;
    e0.center = PAdic();
    e0.cond.lower = rho - mprime - 1;
    e0.cond.upper = rho - mprime + 1;
    e0.cond.lambda = sigma0;
    e0.cond.n = 1;
    e0.cond.m = mprime;
    return e0;
}

Cell build_case_d3(const PrimeConfig& cfg, const PAdic& zeta, const PAdic& sigma0, long rho) {
    PAdic lambda = subtract(cfg, sigma0, zeta);
    if (valuation(lambda) != Valuation(rho - 1))
        throw domain_error("build_case_d3: zeta must sit at distance rho-1 from sigma0");
    Cell dz;
    dz.center = zeta;
    dz.cond.lower = rho - 2;
    dz.cond.upper = rho;
    dz.cond.lambda = lambda;
    dz.cond.n = 1;
    dz.cond.m = 1;
    return dz;
}

std::pair<Decomposition, AdmissibilizeTrace> admissibilize(const PrimeConfig& cfg,
                                                           const Decomposition& d) {
    if (!is_preadmissible(cfg, d).ok)
        throw domain_error("admissibilize: input must be pre-admissible");
    AdmissibilizeTrace trace;
    Decomposition cur = drop_empty_cells(d);

    std::vector<PAdic> w = compute_W(cfg, cur);
    std::size_t rounds_left = w.size() + 1;
    while (!w.empty()) {
        if (rounds_left-- == 0) throw internal_error("admissibilize: |W| failed to decrease");
        PAdic sigma0 = *std::min_element(w.begin(), w.end());

        auto star_idx = open_nonzero_indices(cur);
        Decomposition star = select_cells(cur, star_idx);
        auto mb = max_ball_in_union(cfg, star, sigma0);
        if (mb.kind != MaxBallResult::ball)
            throw internal_error("admissibilize: W-center lost its maximal ball");
        Ball target = mb.value;
        long rho = target.radius().finite();

        // minimal covering subfamily J' of the straddled ball, pruned in
        // canonical (index) order
        std::vector<std::size_t> jprime;
        for (auto i : star_idx)
            if (cell_meets_ball(cfg, cur.cells[i], target)) jprime.push_back(i);
        {
            WindowStats st(cfg);
            st.add_decomposition(cur);
            st.add_ball(target);
            FormParams par = st.finalize();
            for (std::size_t k = 0; k < jprime.size();) {
                std::vector<std::size_t> rest;
                for (std::size_t t = 0; t < jprime.size(); ++t)
                    if (t != k) rest.push_back(jprime[t]);
                Decomposition du = select_cells(cur, rest);
                if (LeafForm(par, du).covers_ball(target))
                    jprime.erase(jprime.begin() + static_cast<std::ptrdiff_t>(k));
                else
                    ++k;
            }
        }
        if (jprime.size() < 2) throw internal_error("admissibilize: straddle with |J'| < 2");

        // the heights each J' member contributes inside the ball, with
        // the arithmetic-progression claim validated on the spot
        TraceStep step;
        step.before = cur;
        step.w_before = w.size();
        Decomposition next;
        std::vector<bool> in_jprime(cur.cells.size(), false);
        for (auto i : jprime) in_jprime[i] = true;
        for (std::size_t i = 0; i < cur.cells.size(); ++i)
            if (!in_jprime[i]) next.cells.push_back(cur.cells[i]);

        for (auto i : jprime) {
            const Cell& c = cur.cells[i];
            YRecord rec;
            rec.cell_index = i;
            rec.lambda_ord = c.cond.lambda.exponent();
            rec.n = c.cond.n;
            for (long g : leaf_heights(c.cond).enumerate())
                if (!balls_disjoint(cfg, leaf_ball(cfg, c, g), target)) rec.enumerated.push_back(g);
            if (rec.enumerated.empty())
                throw internal_error("admissibilize: J' member without leaves in the ball");
            rec.gamma1 = rec.enumerated.front();
            rec.gamma2 = rec.enumerated.back();
            std::vector<long> formula;
            for (long g = rec.gamma1; g <= rec.gamma2; ++g)
                if (floor_mod(g, rec.n) == floor_mod(rec.lambda_ord, rec.n)) formula.push_back(g);
            rec.formula_matches = formula == rec.enumerated;
            if (!rec.formula_matches)
                throw internal_error("admissibilize: height set is not an interval progression");
            step.y_records.push_back(rec);

            Cell below = restrict(c, *c.cond.lower, rec.gamma1);
            Cell above = restrict(c, rec.gamma2, *c.cond.upper);
            if (!cell_empty(below)) next.cells.push_back(below);
            if (!cell_empty(above)) next.cells.push_back(above);
        }

        if (ball_member(cfg, target, PAdic())) {
            // unreachable on pre-admissible input, kept for fidelity
            step.rule = StepRule::case_d1;
            auto fam = build_case_d1(cfg, rho);
            next.cells.insert(next.cells.end(), fam.begin(), fam.end());
        } else if (rho - sigma0.exponent() == 1) {
            step.rule = StepRule::case_d2;
            next.cells.push_back(build_case_d2(cfg, sigma0, rho));
        } else {
            // Maximality of the straddled ball guarantees a point of
            // B_{ρ-1}(σ0) outside the open nonzero-centered union, and any
            // such point sits at distance exactly ρ-1. Covering the ball
            // from there keeps every modulus at (1,1); the d=2 cell would
            // need ac-depth ρ − ord σ0 and blow up the joint refinement.
            step.rule = StepRule::case_d3;
            WindowStats st3(cfg);
            st3.add_decomposition(star);
            st3.add_ball(Ball(cfg, sigma0, Valuation(rho - 1)));
            LeafForm star_form(st3.finalize(), star);
            auto zeta =
                find_point_outside_on_form(star_form, Ball(cfg, sigma0, Valuation(rho - 1)));
            if (!zeta) throw internal_error("admissibilize: straddled ball is not maximal");
            next.cells.push_back(build_case_d3(cfg, *zeta, sigma0, rho));
        }

        next = drop_empty_cells(next);
        std::vector<PAdic> w_next = compute_W(cfg, next);
        if (w_next.size() > w.size() - 1)
            throw internal_error("admissibilize: |W| did not strictly decrease");
        step.after = next;
        step.w_after = w_next.size();
        trace.steps.push_back(std::move(step));
        cur = std::move(next);
        w = std::move(w_next);
    }
    return {cur, trace};
}

std::pair<Decomposition, AdmissibilizeTrace> decompose_admissible(const PrimeConfig& cfg,
                                                                  const Decomposition& d) {
    auto [pre, trace] = preadmissibilize(cfg, d);
    auto [adm, trace2] = admissibilize(cfg, pre);
    trace.steps.insert(trace.steps.end(), trace2.steps.begin(), trace2.steps.end());
    return {adm, std::move(trace)};
}

}  // namespace pcell
