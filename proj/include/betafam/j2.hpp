#pragma once

#include <memory>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "betafam/tmf.hpp"

namespace betafam {

struct J2Config {
    int lo = 0, hi = 134;
    Window window{-6, 18};
    int k = 2;
    std::vector<DifferentialRule> rules;
    int margin = 3;
};

/* Blue generators lift ker(ψ^k−1) ⊂ TMF(s,f); red/yellow generators are the
 * boundary images of coker(ψ^k−1) ⊂ TMF(s+1,f−1).  This bookkeeping keeps
 * the TMF coordinates of the blue cycles so TMF-level formulas can be pushed
 * through the splitting. */
struct J2Assembly {
    std::map<Bidegree, Mat> blue_cycles; /* TMF(s,f) coords of blue gens */
    std::map<Bidegree, int> blue_count;
    int k = 2;

    int blues(Bidegree bd) const {
        auto it = blue_count.find(bd);
        return it == blue_count.end() ? 0 : it->second;
    }
};

/* order of the yellow tower at odd stem s: 3^{v₃(k^{(s+1)/2} − 1)} */
inline int yellow_valuation(int k, int stem) {
    assert(stem % 2 == 1);
    LocalInt x = LocalInt::pow(LocalInt(k), (stem + 1) / 2) - LocalInt(1);
    return x.is_zero() ? -1 : x.valuation();
}

/* ψ^k − 1 on a TMF E2 slice (diagonal: scalar per monomial weight) */
inline Mat psi_minus_one(const PsiOperator& op, const Slice& slice) {
    Mat F = Mat::Zero(slice.n(), slice.n());
    for (int i = 0; i < slice.n(); ++i) {
        LocalInt s = op.scalar(slice.labels[i].mono) - LocalInt(1);
        /* torsion slots: ψ acts trivially, k^w ≡ 1 mod 3 by compatibility */
        if (slice.labels[i].mono.is_torsion()) {
            assert(floor_mod(s.residue(1), kPrime) == 0);
            s = LocalInt(0);
        }
        F(i, i) = s;
    }
    return F;
}

/* The modified ANSS E2 for J²: per bidegree the split union of kernel and
 * shifted cokernel of ψ^k − 1 on the TMF E2. */
inline std::pair<Page, J2Assembly> build_j2_e2(const Page& tmf_e2, const J2Config& cfg) {
    if (!(tmf_e2.window == cfg.window))
        throw Error("TMF and J² pages must share a Δ-window");
    Page p;
    p.r = 2;
    p.dr = 2;
    p.lo = cfg.lo;
    p.hi = cfg.hi;
    p.margin = cfg.margin;
    p.window = cfg.window;
    if (tmf_e2.raw_lo() > p.raw_lo() || tmf_e2.raw_hi() < p.raw_hi() + 1)
        throw Error("TMF range too small to assemble J²");

    /* A torsion slot clipped by the Δ-window would silently drop a chart
     * class, so refuse any clip at the certified stems through the claim
     * filtration band (max claim filtration 2 + deepest page 9).  Free
     * slices are j-towers, window-truncated by design and certified by the
     * window-independence run instead. */
    constexpr int kGuardFiltration = 11;
    for (int s = cfg.lo; s <= cfg.hi + 1; ++s) {
        for (int f = 1; f <= kGuardFiltration; ++f) {
            int eps = f % 2, kk = f / 2;
            int rest = s - 3 * eps - 10 * kk;
            if (floor_mod(rest, 24) != 0) continue;
            int m = floor_div(rest, 24);
            if (!cfg.window.contains(m))
                throw WindowTooSmall("torsion class " + Monomial{0, 0, m, eps, kk}.str() +
                                     " at stem " + std::to_string(s) + " clipped by Δ-window " +
                                     cfg.window.str());
        }
    }

    PsiOperator op(cfg.k);
    J2Assembly asmb;
    asmb.k = cfg.k;
    for (int s = p.raw_lo(); s <= p.raw_hi(); ++s) {
        for (int f = 0; f <= filtration_cap(s + 1, cfg.window) + 1; ++f) {
            Bidegree bd{s, f};
            const PageSlice* ker_src = tmf_e2.find(bd);
            const PageSlice* cok_src = tmf_e2.find({s + 1, f - 1});

            Slice blue;
            Mat blue_cycles(ker_src ? ker_src->slice.n() : 0, 0);
            if (ker_src) {
                KernelCokernel kc = kernel_cokernel(psi_minus_one(op, ker_src->slice),
                                                    ker_src->slice, ker_src->slice);
                blue = std::move(kc.kernel);
                blue_cycles = std::move(kc.kernel_cycles);
            }
            Slice bdry;
            if (cok_src) {
                KernelCokernel kc = kernel_cokernel(psi_minus_one(op, cok_src->slice),
                                                    cok_src->slice, cok_src->slice, true);
                bdry = std::move(kc.cokernel);
            }
            int nb = blue.n(), nd = bdry.n();
            if (nb + nd == 0) continue;

            PageSlice ps;
            ps.slice.labels = blue.labels;
            for (const Label& l : bdry.labels) ps.slice.labels.push_back(l);
            ps.slice.rels = Mat::Zero(nb + nd, blue.rels.cols() + bdry.rels.cols());
            ps.slice.rels.block(0, 0, nb, blue.rels.cols()) = blue.rels;
            ps.slice.rels.block(nb, blue.rels.cols(), nd, bdry.rels.cols()) = bdry.rels;
            ps.reps = Mat::Identity(nb + nd, nb + nd);
            p.slices.emplace(bd, std::move(ps));
            asmb.blue_cycles.emplace(bd, std::move(blue_cycles));
            asmb.blue_count.emplace(bd, nb);
        }
    }
    return {std::move(p), std::move(asmb)};
}

/* d(blue x) = blue(d_TMF x); d(∂ y) = ∂(d_TMF y).  The TMF formula is pushed
 * through the kernel coordinates for blue generators and through the shifted
 * identity for boundary generators. */
inline GenFormula j2_formula(std::shared_ptr<const J2Assembly> asmb,
                             std::shared_ptr<const Page> tmf_e2,
                             std::vector<DifferentialRule> rules, int r) {
    return [asmb, tmf_e2, rules = std::move(rules), r](const Page& j2e2, Bidegree src,
                                                       int gen) -> Vec {
        Bidegree tgt = d_target(src, r);
        const PageSlice* tps = j2e2.find(tgt);
        int tdim = tps ? tps->slice.n() : 0;
        Vec out = Vec::Zero(tdim);
        int nb_src = asmb->blues(src);
        int nb_tgt = asmb->blues(tgt);

        auto tmf_image = [&](Bidegree tmf_src, const Vec& coords, Bidegree tmf_tgt) -> Vec {
            const PageSlice* sp = tmf_e2->find(tmf_src);
            RingElement val;
            for (int i = 0; i < coords.size(); ++i)
                if (!coords(i).is_zero())
                    val += coords(i) * apply_rules(rules, r, sp->slice.labels[i].mono);
            RingElement windowed;
            for (const auto& [mono, c] : val.terms())
                if (j2e2.window.contains(mono.m)) windowed += RingElement(mono, c);
            const PageSlice* tp = tmf_e2->find(tmf_tgt);
            if (!tp) {
                assert(windowed.terms().empty() && "TMF image escapes the computed range");
                return Vec::Zero(0);
            }
            return element_to_vec(tp->slice, windowed);
        };

        if (gen < nb_src) {
            /* blue: apply the TMF differential to the kernel cycle */
            Vec tmf_coords = asmb->blue_cycles.at(src).col(gen);
            Vec img = tmf_image(src, tmf_coords, tgt);
            bool zero = true;
            for (int i = 0; i < img.size(); ++i)
                if (!img(i).is_zero()) zero = false;
            if (zero || tdim == 0) return out;
            auto bc = asmb->blue_cycles.find(tgt);
            assert(bc != asmb->blue_cycles.end());
            Vec c;
            bool ok = solve_in_lattice(bc->second, img, &c);
            assert(ok && "TMF differential leaves the ψ-kernel");
            (void)ok;
            for (int i = 0; i < c.size(); ++i) out(i) = c(i);
        } else {
            /* boundary: ∂ shifts (−1,+1), so the image block is the TMF slice
             * at (tgt.s + 1, tgt.f − 1) and coordinates transport verbatim */
            Bidegree tmf_src{src.s + 1, src.f - 1};
            Bidegree tmf_tgt{tgt.s + 1, tgt.f - 1};
            const PageSlice* sp = tmf_e2->find(tmf_src);
            Vec coords = Vec::Zero(sp->slice.n());
            coords(gen - nb_src) = LocalInt(1);
            Vec img = tmf_image(tmf_src, coords, tmf_tgt);
            if (tdim == 0) {
                bool zero = true;
                for (int i = 0; i < img.size(); ++i)
                    if (!img(i).is_zero()) zero = false;
                assert(zero && "boundary image misses the J² slice");
                return out;
            }
            for (int i = 0; i < img.size(); ++i) out(nb_tgt + i) = img(i);
        }
        return out;
    };
}

struct J2Run {
    J2Config cfg;
    std::shared_ptr<const Page> tmf_e2;
    std::shared_ptr<const J2Assembly> assembly;
    Run run;
};

inline J2Run run_j2(const Page& tmf_e2, const J2Config& cfg) {
    if (!tmf_psi_compat_check(tmf_e2, cfg.rules, cfg.k))
        throw Error("ψ^k does not commute with the configured differentials");
    J2Run out;
    out.cfg = cfg;
    auto [page, asmb] = build_j2_e2(tmf_e2, cfg);
    out.tmf_e2 = std::make_shared<Page>(tmf_e2);
    out.assembly = std::make_shared<J2Assembly>(std::move(asmb));
    std::set<int> pages;
    for (const DifferentialRule& r : cfg.rules) pages.insert(r.page);
    std::vector<Turn> turns;
    for (int r : pages) turns.push_back({r, j2_formula(out.assembly, out.tmf_e2, cfg.rules, r)});
    out.run = run_pages(std::move(page), turns);
    return out;
}

/* locate a generator by its underlying monomial and boundary tag */
inline int find_gen(const Slice& slice, const Monomial& mono, bool boundary) {
    for (int i = 0; i < slice.n(); ++i)
        if (slice.labels[i].mono == mono && slice.labels[i].boundary == boundary) return i;
    return -1;
}

/* --- products ---------------------------------------------------------- */

struct J2Class {
    Bidegree bd;
    Label label;
};

struct J2Product {
    enum class Kind { Zero, Class, Unknown };
    Kind kind = Kind::Zero;
    J2Class value{};
};

/* ∂x·∂y = 0; blue·blue multiplies in TMF; blue·red lands in ∂(product);
 * products with a yellow (boundary, free-origin) factor are not specified by
 * the chart data and come back Unknown. */
inline J2Product j2_product(const J2Class& x, const J2Class& y) {
    J2Product out;
    if (x.label.boundary && y.label.boundary) {
        out.kind = J2Product::Kind::Zero;
        return out;
    }
    auto yellow = [](const J2Class& c) {
        return c.label.boundary && c.label.color() == Label::Color::Yellow;
    };
    if (yellow(x) || yellow(y)) {
        out.kind = J2Product::Kind::Unknown;
        return out;
    }
    const J2Class& blue = x.label.boundary ? y : x;
    const J2Class& other = x.label.boundary ? x : y;
    RingElement prod = RingElement(blue.label.mono, LocalInt::prime_power(blue.label.pow3)) *
                       RingElement(other.label.mono, LocalInt::prime_power(other.label.pow3));
    if (prod.terms().empty()) {
        out.kind = J2Product::Kind::Zero;
        return out;
    }
    assert(prod.terms().size() == 1);
    out.kind = J2Product::Kind::Class;
    out.value.bd = Bidegree{x.bd.s + y.bd.s, x.bd.f + y.bd.f};
    Label l;
    l.mono = prod.terms().begin()->first;
    const LocalInt& c = prod.terms().begin()->second;
    l.pow3 = c.is_zero() ? 0 : c.valuation();
    l.boundary = other.label.boundary;
    out.value.label = l;
    return out;
}

/* E∞ torsion of the claim families (blue and red classes) repeats with the
 * 144-stem period of Δ^6.  The image-of-J towers are excluded: their orders
 * follow the 3-adic valuation of 2^{(s+1)/2} − 1, which is not periodic. */
inline bool check_claim_periodicity(const Run& run, int stem_lo, int stem_hi) {
    const Page& einf = run.einf();
    auto keyset = [&](Bidegree bd, int shift) {
        std::multiset<std::string> out;
        if (const PageSlice* ps = einf.find(bd))
            for (const Label& l : ps->slice.labels) {
                if (l.color() == Label::Color::Yellow) continue;
                Label moved = l;
                moved.mono.m += shift;
                out.insert(moved.str());
            }
        return out;
    };
    for (int s = stem_lo; s + 144 <= stem_hi; ++s)
        for (int f = 1; f <= filtration_cap(s, einf.window); ++f)
            if (keyset({s, f}, 6) != keyset({s + 144, f}, 0)) return false;
    return true;
}

/* --- the documented exotic 3-extension --------------------------------- */

struct ExoticExtension {
    J2Class source; /* yellow E∞ class 3·∂(Δ^{1+3s}) at stem 23+72s */
    J2Class target; /* blue E∞ class αβ²Δ^{3s} at the same stem */
    int multiplier = kPrime;
};

inline std::vector<ExoticExtension> record_extensions(const Page& einf) {
    std::vector<ExoticExtension> out;
    for (int s = 0;; ++s) {
        int stem = 23 + 72 * s;
        if (stem > einf.hi) break;
        const PageSlice* ylw = einf.find({stem, 1});
        const PageSlice* blu = einf.find({stem, 5});
        if (!ylw || !blu) continue;
        int yi = find_gen(ylw->slice, mono_delta(1 + 3 * s), true);
        Monomial ab2 = mono_alpha();
        ab2.k = 2;
        ab2.m = 3 * s;
        int bi = find_gen(blu->slice, ab2, false);
        if (yi < 0 || bi < 0) continue;
        ExoticExtension e;
        e.source = {Bidegree{stem, 1}, ylw->slice.labels[yi]};
        e.target = {Bidegree{stem, 5}, blu->slice.labels[bi]};
        out.push_back(e);
    }
    return out;
}

}  // namespace betafam
