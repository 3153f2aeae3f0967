#pragma once

#include <vector>

#include "betafam/monomial.hpp"
#include "betafam/util.hpp"

namespace betafam {

/* Truncation of the Δ^± direction: only exponents m ∈ [lo, hi] are
 * materialised.  Every bidegree is then finitely generated; results are
 * certified window-independent separately. */
struct Window {
    int lo = 0;
    int hi = 0;
    bool contains(int m) const { return lo <= m && m <= hi; }
    Window enlarged(int pad) const { return {lo - pad, hi + pad}; }
    friend bool operator==(const Window&, const Window&) = default;
    std::string str() const { return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"; }
};

/* All normal-form monomials of one bidegree, Δ-window restricted, in the
 * canonical order (lexicographic in (m, a, b, k, eps)).
 *
 * Positive filtration forces (eps, k) = (f mod 2, f div 2) and a = b = 0,
 * leaving at most one monomial.  Filtration zero enumerates weight-(s/2)
 * monomials c4^a c6^b Δ^m: for each m, 8a + 12b = s − 24m has at most one
 * solution with b ≤ 1 (the two residues 0, 4 mod 8 split by b). */
inline std::vector<Monomial> enumerate_basis(Bidegree bd, Window w) {
    std::vector<Monomial> out;
    if (w.lo > w.hi) throw Error("empty Δ-window");
    if (bd.f < 0) return out;
    if (bd.f == 0) {
        for (int m = w.lo; m <= w.hi; ++m) {
            int rest = bd.s - 24 * m;
            if (rest < 0) break; /* m ascending: rest only shrinks */
            int r8 = floor_mod(rest, 8);
            if (r8 == 0)
                out.push_back(Monomial{rest / 8, 0, m, 0, 0});
            else if (r8 == 4 && rest >= 12)
                out.push_back(Monomial{(rest - 12) / 8, 1, m, 0, 0});
        }
        return out;
    }
    int eps = bd.f % 2, k = bd.f / 2;
    int rest = bd.s - 3 * eps - 10 * k;
    if (floor_mod(rest, 24) != 0) return out;
    int m = floor_div(rest, 24);
    if (w.contains(m)) out.push_back(Monomial{0, 0, m, eps, k});
    return out;
}

/* Smallest upper bound on filtrations that can be nonzero at this stem:
 * torsion monomials need 3·eps + 10k + 24·w.lo ≤ s. */
inline int filtration_cap(int stem, Window w) {
    int budget = stem - 24 * w.lo;
    if (budget < 3) return 0;
    return (budget - 3) / 10 * 2 + 1 + 2; /* slack; emptiness re-checked per slice */
}

}  // namespace betafam
