#pragma once

#include <cassert>
#include <string>

#include "betafam/j2.hpp"
#include "betafam/page.hpp"

namespace betafam {

/* --- chart legend ---------------------------------------------------------- *
 *
 * Blue marks classes lifted from the modular chart, red and yellow mark the
 * image of the boundary map; yellow classes follow the image-of-J pattern.
 * Dots are F3 slots, the rectangle at filtration 0 is a windowed j-tower,
 * yellow circles are cyclic of the order recorded in the slice relations.
 * Lines show α- and β-multiplications; lines with yellow source are omitted.
 * Differential arrows have slope (−1, +r).  Everything is drawn with integer
 * coordinates so output is byte-identical across platforms. */

struct ChartStyle {
    int cell = 16;  /* lattice pitch in px */
    int pad = 28;   /* outer margin */
    int max_f = 13; /* highest filtration row drawn */
    std::string blue = "#2451a6";
    std::string red = "#c0392b";
    std::string yellow = "#d4a017";
    std::string grid = "#e0e0e0";
    std::string mult = "#9b9b9b";
    std::string arrow = "#555555";
};

inline int chart_x(const ChartStyle& st, int lo, int s) {
    return st.pad + (s - lo) * st.cell + st.cell / 2;
}
inline int chart_y(const ChartStyle& st, int f) {
    return st.pad + (st.max_f - f) * st.cell + st.cell / 2;
}
inline int chart_width(const ChartStyle& st, int lo, int hi) {
    return 2 * st.pad + (hi - lo + 1) * st.cell;
}
inline int chart_height(const ChartStyle& st) { return 2 * st.pad + (st.max_f + 1) * st.cell; }

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

/* cyclic order exponent of generator i: the smallest valuation among relation
 * columns supported on row i alone (0 when none constrains it) */
inline int gen_order_exp(const Slice& slice, int i) {
    int best = 0;
    for (int c = 0; c < slice.rels.cols(); ++c) {
        bool solo = !slice.rels(i, c).is_zero();
        for (int r = 0; solo && r < slice.rels.rows(); ++r)
            if (r != i && !slice.rels(r, c).is_zero()) solo = false;
        if (!solo) continue;
        int v = slice.rels(i, c).valuation();
        if (best == 0 || v < best) best = v;
    }
    return best;
}

/* horizontal fan-out when one bidegree holds several generators */
inline int gen_dx(int i, int n) { return 6 * i - 3 * (n - 1); }

} // namespace detail

inline std::string emit_chart(const Page& page, int lo, int hi, const ChartStyle& st = {}) {
    assert(lo <= hi);
    const int W = chart_width(st, lo, hi), H = chart_height(st);
    auto num = [](int v) { return std::to_string(v); };
    auto in_view = [&](Bidegree bd) {
        return lo <= bd.s && bd.s <= hi && 0 <= bd.f && bd.f <= st.max_f;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
           num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
    svg += "<defs><marker id=\"arr\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"" +
           st.arrow + "\"/></marker></defs>\n";
    svg += "<rect width=\"" + num(W) + "\" height=\"" + num(H) + "\" fill=\"#ffffff\"/>\n";

    /* grid and axes */
    svg += "<g class=\"grid\" stroke=\"" + st.grid + "\" stroke-width=\"1\">\n";
    for (int s = lo; s <= hi; ++s)
        if (s % 8 == 0)
            svg += "<line x1=\"" + num(chart_x(st, lo, s)) + "\" y1=\"" + num(st.pad) +
                   "\" x2=\"" + num(chart_x(st, lo, s)) + "\" y2=\"" + num(H - st.pad) +
                   "\"/>\n";
    for (int f = 0; f <= st.max_f; f += 4)
        svg += "<line x1=\"" + num(st.pad) + "\" y1=\"" + num(chart_y(st, f)) + "\" x2=\"" +
               num(W - st.pad) + "\" y2=\"" + num(chart_y(st, f)) + "\"/>\n";
    svg += "</g>\n";
    svg += "<g class=\"axis\" font-family=\"monospace\" font-size=\"9\" fill=\"#333333\" "
           "text-anchor=\"middle\">\n";
    for (int s = lo; s <= hi; ++s)
        if (s % 8 == 0)
            svg += "<text x=\"" + num(chart_x(st, lo, s)) + "\" y=\"" + num(H - st.pad + 14) +
                   "\">" + num(s) + "</text>\n";
    for (int f = 0; f <= st.max_f; f += 4)
        svg += "<text x=\"" + num(st.pad - 12) + "\" y=\"" + num(chart_y(st, f) + 3) + "\">" +
               num(f) + "</text>\n";
    svg += "</g>\n";

    /* multiplication lines (drawn under the glyphs); yellow sources omitted */
    svg += "<g class=\"mult\" stroke=\"" + st.mult + "\" stroke-width=\"1\">\n";
    for (const auto& [bd, ps] : page.slices) {
        if (!in_view(bd)) continue;
        const int n = ps.slice.n();
        for (int i = 0; i < n; ++i) {
            const Label& l = ps.slice.labels[i];
            if (l.color() == Label::Color::Yellow) continue;
            /* the filtration-0 rectangle multiplies through its Δ-power slot */
            if (bd.f == 0 && !l.mono.is_pure_delta()) continue;
            for (auto [gen, cls] : {std::pair{mono_alpha(), std::string("mult-alpha")},
                                    std::pair{mono_beta(1), std::string("mult-beta")}}) {
                RingElement prod = RingElement(l.mono, LocalInt(1)) * RingElement(gen, LocalInt(1));
                if (prod.terms().size() != 1) continue;
                Bidegree tbd{bd.s + gen.bidegree().s, bd.f + gen.bidegree().f};
                if (!in_view(tbd)) continue;
                const PageSlice* tgt = page.find(tbd);
                if (!tgt) continue;
                int j = find_gen(tgt->slice, prod.terms().begin()->first, l.boundary);
                if (j < 0) continue;
                int x1 = chart_x(st, lo, bd.s) + (bd.f == 0 ? 0 : detail::gen_dx(i, n));
                int x2 = chart_x(st, lo, tbd.s) + detail::gen_dx(j, tgt->slice.n());
                svg += "<line class=\"" + cls + "\" x1=\"" + num(x1) + "\" y1=\"" +
                       num(chart_y(st, bd.f)) + "\" x2=\"" + num(x2) + "\" y2=\"" +
                       num(chart_y(st, tbd.f)) + "\"/>\n";
            }
        }
    }
    svg += "</g>\n";

    /* differential arrows of the page's installed d_r */
    svg += "<g class=\"diff\" stroke=\"" + st.arrow + "\" stroke-width=\"1\">\n";
    for (const auto& [src, D] : page.diff) {
        Bidegree tbd = d_target(src, page.dr);
        if (!in_view(src) || !in_view(tbd)) continue;
        const PageSlice* sps = page.find(src);
        const PageSlice* tps = page.find(tbd);
        if (!sps || !tps) continue;
        for (int j = 0; j < D.cols(); ++j) {
            Vec col = D.col(j);
            if (tps->slice.vanishes(col)) continue;
            int row = -1;
            for (int i = 0; i < col.size() && row < 0; ++i)
                if (!col(i).is_zero() && col(i).valuation() == 0) row = i;
            for (int i = 0; i < col.size() && row < 0; ++i)
                if (!col(i).is_zero()) row = i;
            int x1 = chart_x(st, lo, src.s) +
                     (src.f == 0 ? 0 : detail::gen_dx(j, sps->slice.n()));
            int x2 = chart_x(st, lo, tbd.s) + detail::gen_dx(row, tps->slice.n());
            svg += "<line class=\"d" + num(page.dr) + "\" x1=\"" + num(x1) + "\" y1=\"" +
                   num(chart_y(st, src.f)) + "\" x2=\"" + num(x2) + "\" y2=\"" +
                   num(chart_y(st, tbd.f)) + "\" marker-end=\"url(#arr)\"/>\n";
        }
    }
    svg += "</g>\n";

    /* class glyphs */
    svg += "<g class=\"classes\">\n";
    for (const auto& [bd, ps] : page.slices) {
        if (!in_view(bd)) continue;
        const int n = ps.slice.n();
        if (n == 0) continue;
        int cx = chart_x(st, lo, bd.s), cy = chart_y(st, bd.f);
        if (bd.f == 0) {
            svg += "<rect x=\"" + num(cx - 5) + "\" y=\"" + num(cy - 5) +
                   "\" width=\"10\" height=\"10\" fill=\"" + st.blue + "\"><title>Z[j] @" +
                   bd.str() + " rank " + num(n) + "</title></rect>\n";
            continue;
        }
        for (int i = 0; i < n; ++i) {
            const Label& l = ps.slice.labels[i];
            int x = cx + detail::gen_dx(i, n);
            std::string title = detail::xml_escape(l.str()) + " @" + bd.str();
            if (l.color() == Label::Color::Yellow) {
                int e = detail::gen_order_exp(ps.slice, i);
                title += " order 3^" + num(e);
                svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(cy) +
                       "\" r=\"4\" fill=\"none\" stroke=\"" + st.yellow +
                       "\" stroke-width=\"2\"><title>" + title + "</title></circle>\n";
            } else {
                const std::string& fill =
                    l.color() == Label::Color::Blue ? st.blue : st.red;
                svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(cy) +
                       "\" r=\"3\" fill=\"" + fill + "\"><title>" + title +
                       "</title></circle>\n";
            }
        }
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

} // namespace betafam
