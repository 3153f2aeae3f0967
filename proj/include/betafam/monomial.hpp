#pragma once

#include <compare>
#include <string>
#include <tuple>

#include "betafam/util.hpp"

namespace betafam {

/* Chart coordinates (stem, filtration).  A d_r differential moves
 * (s, f) -> (s - 1, f + r). */
struct Bidegree {
    int s = 0;
    int f = 0;
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
    std::string str() const { return "(" + std::to_string(s) + "," + std::to_string(f) + ")"; }
};

inline Bidegree d_target(Bidegree src, int r) { return {src.s - 1, src.f + r}; }
inline Bidegree d_source(Bidegree tgt, int r) { return {tgt.s + 1, tgt.f - r}; }

/* Normal-form monomial c4^a c6^b Δ^m α^eps β^k.
 *   - b ≤ 1 (c6² rewrites to c4³ − 24³Δ),
 *   - eps ≤ 1 (α² = 0),
 *   - torsion monomials (eps or k positive) have a = b = 0
 *     (relations αc4 = αc6 = βc4 = βc6 = 0).
 * Generator bidegrees: |c4|=(8,0), |c6|=(12,0), |Δ|=(24,0), |α|=(3,1),
 * |β|=(10,2). */
struct Monomial {
    int a = 0;
    int b = 0;
    int m = 0;
    int eps = 0;
    int k = 0;

    bool valid() const {
        if (a < 0 || b < 0 || b > 1 || eps < 0 || eps > 1 || k < 0) return false;
        if ((eps == 1 || k >= 1) && (a != 0 || b != 0)) return false;
        return true;
    }
    bool is_torsion() const { return eps == 1 || k >= 1; }
    bool is_one() const { return a == 0 && b == 0 && m == 0 && eps == 0 && k == 0; }
    /* pure power of Δ (the only free monomials supporting d5) */
    bool is_pure_delta() const { return !is_torsion() && a == 0 && b == 0; }

    Bidegree bidegree() const { return {8 * a + 12 * b + 24 * m + 3 * eps + 10 * k, eps + 2 * k}; }
    /* modular-forms weight of the c4/c6/Δ part; the Adams operation ψ^k
     * scales by k^weight and fixes α, β */
    int weight() const { return 4 * a + 6 * b + 12 * m; }

    /* canonical basis order: lexicographic in (m, a, b, k, eps) */
    auto lex_key() const { return std::tie(m, a, b, k, eps); }
    friend bool operator<(const Monomial& x, const Monomial& y) { return x.lex_key() < y.lex_key(); }
    friend bool operator==(const Monomial&, const Monomial&) = default;

    std::string str(bool compact = false) const {
        if (is_one()) return "1";
        std::string out;
        const char* sep = compact ? "" : " ";
        auto put = [&](const std::string& g, int e) {
            if (e == 0) return;
            if (!out.empty()) out += sep;
            out += g;
            if (e != 1) out += "^" + std::to_string(e);
        };
        put("c4", a);
        put("c6", b);
        put("α", eps);
        put("β", k);
        put("Δ", m);
        return out;
    }
};

inline Monomial mono_c4() { return {1, 0, 0, 0, 0}; }
inline Monomial mono_c6() { return {0, 1, 0, 0, 0}; }
inline Monomial mono_delta(int m = 1) { return {0, 0, m, 0, 0}; }
inline Monomial mono_alpha() { return {0, 0, 0, 1, 0}; }
inline Monomial mono_beta(int k = 1) { return {0, 0, 0, 0, k}; }

}  // namespace betafam
