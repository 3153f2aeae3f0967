#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betafam/basis.hpp"
#include "betafam/module.hpp"
#include "betafam/rules.hpp"

namespace betafam {

/* A slice of a page together with the matrix expressing its generators in
 * the coordinates of the run's E2 generators at the same bidegree. */
struct PageSlice {
    Slice slice;
    Mat reps;
};

/* One page of a spectral-sequence run.  Slices exist on the raw stem range
 * [lo − margin, hi + margin]; only [lo, hi] is certified.  `dr` is the index
 * of the installed differential (dr ≥ r; an absent matrix means zero). */
struct Page {
    int r = 2;
    int dr = 2;
    int lo = 0, hi = 0, margin = 0;
    Window window{0, 0};
    std::map<Bidegree, PageSlice> slices;
    std::map<Bidegree, Mat> diff; /* keyed by source bidegree */

    int raw_lo() const { return lo - margin; }
    int raw_hi() const { return hi + margin; }
    const PageSlice* find(Bidegree bd) const {
        auto it = slices.find(bd);
        return it == slices.end() ? nullptr : &it->second;
    }
    Shape shape_at(Bidegree bd) const {
        const PageSlice* ps = find(bd);
        return ps ? ps->slice.shape() : Shape{};
    }
    Mat diff_at(Bidegree bd) const {
        auto it = diff.find(bd);
        if (it != diff.end()) return it->second;
        const PageSlice* src = find(bd);
        const PageSlice* tgt = find(d_target(bd, dr));
        return Mat::Zero(tgt ? tgt->slice.n() : 0, src ? src->slice.n() : 0);
    }
};

/* E2-level differential: coordinates of d(generator `gen` of the E2 slice at
 * src) in the E2 slice at d_target(src, r).  The run's E2 page is passed in
 * so closures need not capture it. */
using GenFormula = std::function<Vec(const Page& e2, Bidegree src, int gen)>;

/* Install d_r on a page by pushing the E2-level formula through generator
 * representatives and re-expressing in page coordinates. */
inline void install_differential(Page& p, int r, const Page& e2, const GenFormula& formula) {
    assert(r >= p.r);
    p.dr = r;
    p.diff.clear();
    for (auto& [bd, ps] : p.slices) {
        if (ps.slice.n() == 0) continue;
        if (bd.s - 1 < p.raw_lo()) continue; /* target outside raw range */
        Bidegree tgt = d_target(bd, r);
        const PageSlice* e2src = e2.find(bd);
        const PageSlice* e2tgt = e2.find(tgt);
        assert(e2src && "page slice without E2 ancestor");
        int tdim = e2tgt ? e2tgt->slice.n() : 0;
        Mat W = Mat::Zero(tdim, ps.slice.n());
        bool nonzero = false;
        if (tdim > 0) {
            Mat F2 = Mat::Zero(tdim, e2src->slice.n());
            for (int j = 0; j < e2src->slice.n(); ++j) {
                Vec v = formula(e2, bd, j);
                assert(v.size() == tdim);
                F2.col(j) = v;
            }
            W = F2 * ps.reps;
            for (int i = 0; i < W.rows(); ++i)
                for (int j = 0; j < W.cols(); ++j)
                    if (!W(i, j).is_zero()) nonzero = true;
        }
        if (!nonzero) continue;
        const PageSlice* tslice = p.find(tgt);
        if (!tslice || tslice->slice.n() == 0) {
            /* the target module is zero on this page, so the image is zero */
            continue;
        }
        Mat X;
        bool ok = solve_columns(tslice->reps, W, &X);
        assert(ok && "differential image is not a cycle on this page");
        p.diff[bd] = std::move(X);
    }
}

/* d_r ∘ d_r = 0, checked in page coordinates modulo target relations. */
inline void check_d_squared(const Page& p) {
    for (const auto& [bd, D1] : p.diff) {
        Bidegree mid = d_target(bd, p.dr);
        auto it = p.diff.find(mid);
        if (it == p.diff.end()) continue;
        const PageSlice* end = p.find(d_target(mid, p.dr));
        assert(end);
        Mat P = it->second * D1;
        for (int j = 0; j < P.cols(); ++j) {
            Vec col = P.col(j);
            assert(end->slice.vanishes(col) && "d∘d ≠ 0");
        }
    }
}

/* Candidate differentials d_r with nonzero source and target; an empty list
 * certifies that no d_r can occur anywhere on the stored range. */
inline std::vector<std::pair<Bidegree, Bidegree>> no_room_check(const Page& p, int r) {
    std::vector<std::pair<Bidegree, Bidegree>> out;
    for (const auto& [bd, ps] : p.slices) {
        if (ps.slice.n() == 0 || ps.slice.is_zero()) continue;
        Bidegree tgt = d_target(bd, r);
        const PageSlice* t = p.find(tgt);
        if (t && t->slice.n() > 0 && !t->slice.is_zero()) out.emplace_back(bd, tgt);
    }
    return out;
}

/* Homology with respect to the installed differential; the next page keeps
 * E2 representatives via the cycle matrices and sheds one stem of margin. */
inline Page turn_page(const Page& p) {
    check_d_squared(p);
    Page next;
    next.r = p.dr + 1;
    next.dr = next.r;
    next.lo = p.lo;
    next.hi = p.hi;
    next.margin = p.margin - 1;
    assert(next.margin >= 0 && "page margin exhausted");
    next.window = p.window;
    for (const auto& [bd, ps] : p.slices) {
        if (bd.s < next.raw_lo() || bd.s > next.raw_hi()) continue;
        Bidegree tgt_bd = d_target(bd, p.dr);
        Bidegree src_bd = d_source(bd, p.dr);
        const PageSlice* tgt = p.find(tgt_bd);
        Mat d_out = p.diff_at(bd);
        Mat d_in = p.diff_at(src_bd);
        if (d_in.rows() != ps.slice.n()) d_in = Mat::Zero(ps.slice.n(), 0);
        Slice tgt_slice = tgt ? tgt->slice : Slice{};
        Homology h = homology(ps.slice, d_in, tgt_slice, d_out);

        /* nothing maps into filtration 0 and free generators are cycles for
         * torsion-valued differentials, so free rank is preserved */
        assert(h.H.shape().free_rank == ps.slice.shape().free_rank);

        if (h.H.n() == 0) continue;
        PageSlice nps;
        nps.slice = std::move(h.H);
        nps.reps = ps.reps * h.cycles;
        next.slices.emplace(bd, std::move(nps));
    }
    return next;
}

/* mod-3 dimension accounting for pure-F3 neighborhoods:
 * dim E_{r+1} = dim E_r − rank₃ d_out − rank₃ d_in */
inline void check_length_accounting(const Page& before, const Page& after) {
    auto pure_f3 = [](const Shape& sh) {
        if (sh.free_rank != 0) return false;
        for (int e : sh.torsion)
            if (e != 1) return false;
        return true;
    };
    auto rank3 = [](const Mat& m) {
        Smith s = smith_normal_form(m);
        int r = 0;
        for (int e : s.exponents)
            if (e == 0) ++r;
        return r;
    };
    for (const auto& [bd, ps] : before.slices) {
        if (bd.s < after.raw_lo() || bd.s > after.raw_hi()) continue;
        Shape here = ps.slice.shape();
        Shape tgt_sh = before.shape_at(d_target(bd, before.dr));
        Shape src_sh = before.shape_at(d_source(bd, before.dr));
        if (!pure_f3(here) || !pure_f3(tgt_sh) || !pure_f3(src_sh)) continue;
        int expect = static_cast<int>(here.torsion.size()) - rank3(before.diff_at(bd)) -
                     rank3(before.diff_at(d_source(bd, before.dr)));
        Shape now = after.shape_at(bd);
        assert(pure_f3(now));
        assert(static_cast<int>(now.torsion.size()) == expect && "length accounting failed");
        (void)expect;
        (void)now;
    }
}

/* A finished run: the stored milestone pages (E2, then one page per
 * installed differential) and the indices of the nontrivial turns. */
struct Run {
    std::vector<Page> pages;
    std::vector<int> nontrivial_turns;

    const Page& e2() const { return pages.front(); }
    const Page& einf() const { return pages.back(); }

    /* last stored page with r ≤ wanted (pages between milestones are equal) */
    const Page& page_at(int wanted) const {
        const Page* best = &pages.front();
        for (const Page& p : pages)
            if (p.r <= wanted) best = &p;
        return *best;
    }
};

/* Drive a run: install each differential in `turns` (a page index plus an
 * E2-level formula), asserting silence of every skipped page index via
 * no_room_check, and turn until done. */
struct Turn {
    int r;
    GenFormula formula;
};

inline Run run_pages(Page e2, const std::vector<Turn>& turns, int quiet_through = 9) {
    Run run;
    run.pages.reserve(turns.size() + 1);
    run.pages.push_back(std::move(e2));
    int cleared = run.pages.front().r;
    for (const Turn& t : turns) {
        for (int r = cleared; r < t.r; ++r) {
            bool quiet = no_room_check(run.pages.back(), r).empty();
            assert(quiet && "skipped page has room");
            (void)quiet;
        }
        Page& cur = run.pages.back();
        install_differential(cur, t.r, run.pages.front(), t.formula);
        if (!cur.diff.empty()) run.nontrivial_turns.push_back(t.r);
        Page next = turn_page(cur);
        check_length_accounting(cur, next);
        run.pages.push_back(std::move(next));
        cleared = t.r + 1;
    }
    for (int r = cleared; r <= quiet_through; ++r) {
        bool quiet = no_room_check(run.pages.back(), r).empty();
        assert(quiet && "trailing page has room");
        (void)quiet;
    }
    return run;
}

/* --- τ-torsion bookkeeping ------------------------------------------- */

struct TorsionVerdict {
    enum class Kind { TorsionFree, TauTorsion, Zero, NotACycle, Undecidable };
    Kind kind = Kind::Undecidable;
    int power = 0;        /* τ^power-torsion when kind == TauTorsion */
    int killed_on = 0;    /* page of the killing differential */
    Bidegree source{};    /* its source bidegree */
    std::string witness;  /* label of a source class mapping onto it */
    std::string certificate;

    bool operator==(const TorsionVerdict& o) const {
        return kind == o.kind && power == o.power;
    }
    std::string str() const {
        switch (kind) {
            case Kind::TorsionFree: return "τ-torsion-free";
            case Kind::TauTorsion: return "τ^" + std::to_string(power) + "-torsion";
            case Kind::Zero: return "zero";
            case Kind::NotACycle: return "not-a-cycle";
            default: return "undecidable";
        }
    }
};

/* Track an E2 class through the run's pages: the verdict is τ^{r−1}-torsion
 * when d_r first kills it, τ-torsion-free when it survives and no_room_check
 * certifies permanence up to `room_bound`. */
inline TorsionVerdict torsion_order(const Run& run, Bidegree bd, Vec e2_coords,
                                    int room_bound = 40) {
    TorsionVerdict v;
    if (bd.s < run.e2().lo || bd.s > run.e2().hi) {
        v.kind = TorsionVerdict::Kind::Undecidable;
        v.certificate = "stem outside certified range";
        return v;
    }

    /* the class died turning the page indexed `i`: record the witness */
    auto killed = [&](size_t i, const Vec& coords) {
        const Page& p = run.pages[i];
        v.kind = TorsionVerdict::Kind::TauTorsion;
        v.killed_on = p.dr;
        v.power = p.dr - 1;
        v.source = d_source(bd, p.dr);
        const PageSlice* here = p.find(bd);
        const PageSlice* src = p.find(v.source);
        Mat D = p.diff_at(v.source); /* maps source slice into bd */
        Mat sys(here->slice.n(), D.cols() + here->slice.rels.cols());
        if (D.cols() > 0) sys.leftCols(D.cols()) = D;
        sys.rightCols(here->slice.rels.cols()) = here->slice.rels;
        Vec sol;
        bool ok = solve_in_lattice(sys, coords, &sol);
        assert(ok && "killed class has no differential preimage");
        (void)ok;
        for (int j = 0; j < D.cols(); ++j)
            if (!sol(j).is_zero() && src) {
                v.witness = src->slice.labels[j].str();
                break;
            }
        v.certificate = "hit by d" + std::to_string(p.dr) + " from " + v.source.str() +
                        (v.witness.empty() ? "" : " (source " + v.witness + ")");
    };

    Vec cur = std::move(e2_coords); /* coordinates on run.pages[i] */
    Vec prev;                       /* coordinates on run.pages[i-1] */
    for (size_t i = 0; i < run.pages.size(); ++i) {
        const Page& p = run.pages[i];
        const PageSlice* ps = p.find(bd);
        if (!ps || ps->slice.n() == 0 || ps->slice.vanishes(cur)) {
            if (i == 0) {
                v.kind = TorsionVerdict::Kind::Zero;
                v.certificate = "zero on E2";
            } else {
                killed(i - 1, std::move(prev));
            }
            return v;
        }
        if (i + 1 == run.pages.size()) break;
        const Page& next = run.pages[i + 1];
        const PageSlice* nps = next.find(bd);
        if (!nps || nps->slice.n() == 0) {
            /* whole slice dies; cur is killed unless it supports a d */
            Mat D_out = p.diff_at(bd);
            Vec img = D_out * cur;
            const PageSlice* tgt = p.find(d_target(bd, p.dr));
            bool cycle = true;
            if (img.size() > 0 && tgt && !tgt->slice.vanishes(img)) cycle = false;
            if (!cycle) {
                v.kind = TorsionVerdict::Kind::NotACycle;
                v.certificate = "supports a nonzero d" + std::to_string(p.dr);
                return v;
            }
            killed(i, std::move(cur));
            return v;
        }
        /* re-express on the next page: reps_next = reps_cur · cycles */
        Vec ambient = ps->reps * cur;
        Vec x;
        if (!solve_in_lattice(nps->reps, ambient, &x)) {
            v.kind = TorsionVerdict::Kind::NotACycle;
            v.certificate = "supports a nonzero d" + std::to_string(p.dr);
            return v;
        }
        prev = std::move(cur);
        cur = std::move(x);
    }

    /* survived every stored page: certify no room above */
    const Page& last = run.pages.back();
    if (bd.s + 1 > last.raw_hi()) {
        v.kind = TorsionVerdict::Kind::Undecidable;
        v.certificate = "source stem outside computed range";
        return v;
    }
    for (int r = last.r; r <= room_bound; ++r) {
        const PageSlice* sp = last.find(d_source(bd, r));
        if (sp && !sp->slice.is_zero()) {
            v.kind = TorsionVerdict::Kind::Undecidable;
            v.certificate = "possible d" + std::to_string(r) + " from " + d_source(bd, r).str();
            return v;
        }
    }
    v.kind = TorsionVerdict::Kind::TorsionFree;
    v.certificate = "permanent cycle; no room for d_r, r ≤ " + std::to_string(room_bound);
    return v;
}

}  // namespace betafam
