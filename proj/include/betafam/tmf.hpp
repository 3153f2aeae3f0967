#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "betafam/basis.hpp"
#include "betafam/page.hpp"
#include "betafam/psi.hpp"

namespace betafam {

struct TmfConfig {
    int lo = 0, hi = 200;
    Window window{-6, 18};
    std::vector<DifferentialRule> rules;
    int margin = 4;
};

/* default generator differentials (the same data ships in configs/) */
inline std::vector<DifferentialRule> default_tmf_rules() {
    return parse_rules("d5 5 Δ -> α*β^2\n"
                       "d9 9 α*Δ^2 -> β^5\n");
}

/* E2 of the ANSS for TMF: the weight-d modular-form lattice at (2d, 0) and
 * one F3 slot per torsion monomial α^ε β^k Δ^m at positive filtration. */
inline Page build_tmf_e2(const TmfConfig& cfg) {
    Page p;
    p.r = 2;
    p.dr = 2;
    p.lo = cfg.lo;
    p.hi = cfg.hi;
    p.margin = cfg.margin;
    p.window = cfg.window;
    for (int s = p.raw_lo(); s <= p.raw_hi(); ++s) {
        for (int f = 0; f <= filtration_cap(s, cfg.window); ++f) {
            std::vector<Monomial> monos = enumerate_basis({s, f}, cfg.window);
            if (monos.empty()) continue;
            PageSlice ps;
            for (const Monomial& g : monos) ps.slice.labels.push_back(Label{g});
            int n = static_cast<int>(monos.size());
            ps.slice.rels = f == 0 ? Mat(n, 0) : Mat(LocalInt(kPrime) * Mat::Identity(n, n));
            ps.reps = Mat::Identity(n, n);
            p.slices.emplace(Bidegree{s, f}, std::move(ps));
        }
    }
    return p;
}

/* E2-coordinate vector of a ring element inside a labeled slice */
inline Vec element_to_vec(const Slice& slice, const RingElement& x) {
    Vec out = Vec::Zero(slice.n());
    for (const auto& [mono, c] : x.terms()) {
        bool found = false;
        for (int i = 0; i < slice.n(); ++i)
            if (slice.labels[i].mono == mono && slice.labels[i].pow3 == 0) {
                out(i) += c;
                found = true;
                break;
            }
        assert(found && "element has a term outside the slice basis (window too small?)");
        (void)found;
    }
    return out;
}

/* Leibniz closure of the configured rules as an E2-level formula.  Terms
 * whose Δ-exponent leaves the window truncate to zero: the window floor is
 * margin territory, certified by the window-independence check. */
inline GenFormula tmf_formula(std::vector<DifferentialRule> rules, int r) {
    return [rules = std::move(rules), r](const Page& e2, Bidegree src, int gen) -> Vec {
        const PageSlice* sps = e2.find(src);
        assert(sps);
        RingElement image = apply_rules(rules, r, sps->slice.labels[gen].mono);
        RingElement val;
        for (const auto& [mono, c] : image.terms())
            if (e2.window.contains(mono.m)) val += RingElement(mono, c);
        const PageSlice* tps = e2.find(d_target(src, r));
        if (!tps) {
            assert(val.terms().empty() && "differential image escapes the computed range");
            return Vec::Zero(0);
        }
        return element_to_vec(tps->slice, val);
    };
}

struct TmfRun {
    TmfConfig cfg;
    Run run;
};

inline TmfRun run_tmf(const TmfConfig& cfg) {
    TmfRun out;
    out.cfg = cfg;
    std::set<int> pages;
    for (const DifferentialRule& r : cfg.rules) pages.insert(r.page);
    std::vector<Turn> turns;
    for (int r : pages) turns.push_back({r, tmf_formula(cfg.rules, r)});
    out.run = run_pages(build_tmf_e2(cfg), turns);
    return out;
}

/* ψ^k commutes with every configured differential on all basis classes in
 * range: d(ψ x) = k^{w(x)} d(x) must equal ψ(d x) exactly. */
inline bool tmf_psi_compat_check(const Page& e2, const std::vector<DifferentialRule>& rules,
                                 int k) {
    PsiOperator op(k);
    for (const auto& [bd, ps] : e2.slices) {
        for (const Label& l : ps.slice.labels) {
            for (const DifferentialRule& rule : rules) {
                RingElement dx = apply_rules(rules, rule.page, l.mono);
                RingElement lhs = apply_psi(op, dx);
                RingElement rhs = op.scalar(l.mono) * dx;
                if (!(lhs == rhs)) return false;
            }
        }
    }
    return true;
}

/* --- E∞ survivor naming ------------------------------------------------ */

struct NamedClass {
    std::string name;
    Bidegree bd;
    Monomial rep_mono; /* leading monomial of the representative */
    int pow3 = 0;      /* divisibility index is 3^pow3 */
    RingElement rep;   /* exact E2 representative, used for products */

    int index() const { return static_cast<int>(LocalInt::prime_power(pow3).num().convert_to<long long>()); }
};

namespace detail {

/* decomposable span builder: all Z_(3)-combinations of products of names */
struct ProductSpan {
    const Page& e2;
    const std::vector<NamedClass>& names;
    std::map<Bidegree, Mat> memo;

    /* slice coordinates of x; terms truncated away by the Δ-window drop out,
     * matching the strip-as-quotient convention used for differential images */
    Vec windowed_vec(const Slice& slice, const RingElement& x) const {
        Vec out = Vec::Zero(slice.n());
        for (const auto& [mono, c] : x.terms()) {
            if (!e2.window.contains(mono.m)) continue;
            bool found = false;
            for (int i = 0; i < slice.n(); ++i)
                if (slice.labels[i].mono == mono && slice.labels[i].pow3 == 0) {
                    out(i) += c;
                    found = true;
                    break;
                }
            assert(found && "in-window term missing from the slice basis");
            (void)found;
        }
        return out;
    }

    Mat span(Bidegree bd) {
        if (auto it = memo.find(bd); it != memo.end()) return it->second;
        const PageSlice* ps = e2.find(bd);
        int n = ps ? ps->slice.n() : 0;
        std::vector<Vec> cols;
        if (bd.s == 0 && bd.f == 0 && n > 0) {
            cols.push_back(element_to_vec(ps->slice, RingElement(Monomial{})));
        }
        if (n > 0 && (bd.s > 0 || bd.f > 0)) {
            for (const NamedClass& nc : names) {
                Bidegree rest{bd.s - nc.bd.s, bd.f - nc.bd.f};
                if (rest.s < 0 || rest.f < 0) continue;
                /* degree-(0,0) names keep the bidegree; the closure below
                 * folds them in without recursing into span(bd) itself */
                if (rest == bd) continue;
                const PageSlice* rs = e2.find(rest);
                if (!rs && !(rest.s == 0 && rest.f == 0)) continue;
                Mat R = span(rest);
                for (int j = 0; j < R.cols(); ++j) {
                    RingElement z = slice_element(rest, R.col(j));
                    RingElement prod = nc.rep * z;
                    if (prod.terms().empty()) continue;
                    cols.push_back(windowed_vec(ps->slice, prod));
                }
            }
        }
        Mat M(n, cols.size());
        for (size_t j = 0; j < cols.size(); ++j) M.col(j) = cols[j];
        Mat H = hermite_columns(std::move(M));
        /* close under multiplication by degree-(0,0) names (window monomials
         * of weight zero); each pass grows the rank, so this terminates */
        for (bool grew = n > 0; grew;) {
            grew = false;
            for (const NamedClass& nc : names) {
                if (!(nc.bd == Bidegree{0, 0})) continue;
                for (int j = 0; j < H.cols(); ++j) {
                    RingElement prod = nc.rep * slice_element(bd, H.col(j));
                    if (prod.terms().empty()) continue;
                    Vec v = windowed_vec(ps->slice, prod);
                    bool nonzero = false;
                    for (int i = 0; i < v.size() && !nonzero; ++i) nonzero = !v(i).is_zero();
                    if (!nonzero || in_span(H, v)) continue;
                    Mat G(n, H.cols() + 1);
                    G.leftCols(H.cols()) = H;
                    G.col(H.cols()) = v;
                    H = hermite_columns(std::move(G));
                    grew = true;
                }
            }
        }
        memo[bd] = H;
        return H;
    }

    RingElement slice_element(Bidegree bd, const Vec& coords) const {
        const PageSlice* ps = e2.find(bd);
        RingElement out;
        for (int i = 0; i < coords.size(); ++i)
            if (!coords(i).is_zero()) out += RingElement(ps->slice.labels[i].mono, coords(i));
        return out;
    }
};

inline bool is_ring_generator(const Monomial& g) {
    return g == mono_c4() || g == mono_c6() || g == mono_alpha() || g == mono_beta(1);
}

}  // namespace detail

/* Scan E∞ in increasing (stem, filtration) order; a class not expressible in
 * products of earlier names becomes a new named generator. */
inline std::vector<NamedClass> extract_names(const Run& run, int stem_lo, int stem_hi) {
    const Page& e2 = run.e2();
    const Page& einf = run.einf();
    std::vector<NamedClass> names;
    detail::ProductSpan dec{e2, names, {}};
    for (int s = stem_lo; s <= stem_hi; ++s) {
        for (int f = 0; f <= filtration_cap(s, e2.window); ++f) {
            Bidegree bd{s, f};
            const PageSlice* ps = einf.find(bd);
            if (!ps || ps->slice.n() == 0) continue;
            const PageSlice* base = e2.find(bd);
            assert(base);
            Mat D = dec.span(bd);
            /* decomposables are permanent cycles: they live in the survivor
             * lattice */
            std::vector<Vec> chosen;
            for (int j = 0; j < ps->slice.n(); ++j) {
                Vec cand = ps->reps.col(j);
                Mat test(base->slice.n(),
                         D.cols() + chosen.size() + ps->slice.rels.cols());
                test.leftCols(D.cols()) = D;
                for (size_t c = 0; c < chosen.size(); ++c) test.col(D.cols() + c) = chosen[c];
                /* slice relations, pushed to E2 coordinates */
                if (ps->slice.rels.cols() > 0)
                    test.rightCols(ps->slice.rels.cols()) = ps->reps * ps->slice.rels;
                if (in_span(test, cand)) continue;
                NamedClass nc;
                nc.bd = bd;
                nc.rep_mono = ps->slice.labels[j].mono;
                nc.pow3 = ps->slice.labels[j].pow3;
                Label lab = ps->slice.labels[j];
                lab.bracket = !detail::is_ring_generator(nc.rep_mono) || lab.pow3 > 0;
                nc.name = lab.str();
                nc.rep = dec.slice_element(bd, cand);
                names.push_back(std::move(nc));
                chosen.push_back(cand);
                /* the fresh name may generate same-bidegree decomposables
                 * (powers of weight-zero window classes), so rebuild now */
                dec.memo.clear();
                D = dec.span(bd);
            }
        }
    }
    return names;
}

/* E∞ torsion is 72-periodic: multiplication by Δ^3 matches slices across the
 * certified window. */
inline bool check_torsion_periodicity(const Run& run, int stem_lo, int stem_hi) {
    const Page& einf = run.einf();
    for (int s = stem_lo; s + 72 <= stem_hi; ++s) {
        for (int f = 1; f <= filtration_cap(s, einf.window); ++f) {
            Shape a = einf.shape_at({s, f});
            Shape b = einf.shape_at({s + 72, f});
            if (!(a == b)) return false;
            const PageSlice* pa = einf.find({s, f});
            const PageSlice* pb = einf.find({s + 72, f});
            if (!pa) continue;
            for (int j = 0; j < pa->slice.n(); ++j) {
                const Monomial& x = pa->slice.labels[j].mono;
                const Monomial& y = pb->slice.labels[j].mono;
                Monomial shifted = x;
                shifted.m += 3;
                if (!(shifted == y)) return false;
            }
        }
    }
    return true;
}

}  // namespace betafam
