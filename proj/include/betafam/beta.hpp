#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "betafam/j2.hpp"

namespace betafam {

/* --- divided beta indices ----------------------------------------------- *
 *
 * β_{i/j} lives in stem 16i − 4j − 2 with Adams-Novikov filtration 2; the
 * plain β_i is β_{i/1}.  Index arithmetic runs in 64 bits because the
 * admissibility scans below reach i = s·3^n with n around 30. */

struct BetaIndex {
    long long i = 1;
    long long j = 1;

    long long stem() const { return 16 * i - 4 * j - 2; }
    std::string str() const {
        std::string core = std::to_string(i);
        if (j != 1) core += "/" + std::to_string(j);
        return core.size() == 1 ? "β_" + core : "β_{" + core + "}";
    }
    friend auto operator<=>(const BetaIndex&, const BetaIndex&) = default;
};

inline Bidegree stem_of(const BetaIndex& idx) {
    assert(idx.i >= 1 && idx.j >= 1);
    long long s = idx.stem();
    assert(s <= std::numeric_limits<int>::max() && s >= std::numeric_limits<int>::min());
    return {static_cast<int>(s), 2};
}

/* --- the seven catalogued families --------------------------------------- *
 *
 * Base stems 10, 26, 37, 74, 81, 82, 109; each family repeats every 144
 * stems (one Δ^6 period) as its parameter t grows.  Filtration is the formal
 * one: each β contributes 2, each α_1 contributes 1, and the triple bracket
 * ⟨α_1,α_1,β⟩ contributes 1 + 1 + 2 − 1. */

enum class Family {
    Beta1,         /* β_{1+9t} */
    Beta2,         /* β_{2+9t} */
    AlphaBeta3,    /* [α_1 β_{(3+9t)/3}] */
    Beta5,         /* β_{5+9t} */
    BracketBeta5,  /* ⟨α_1, α_1, β_{5+9t}⟩ */
    Beta6,         /* β_{(6+9t)/3} */
    AlphaBeta7,    /* [α_1 β_{7+9t}] */
};

constexpr std::array<Family, 7> kAllFamilies = {
    Family::Beta1,  Family::Beta2,        Family::AlphaBeta3, Family::Beta5,
    Family::BracketBeta5, Family::Beta6,  Family::AlphaBeta7,
};

struct FamilyElement {
    Family family = Family::Beta1;
    int t = 0;

    /* the underlying divided beta index (the bracketed β for decorated
     * families) */
    BetaIndex index() const {
        switch (family) {
            case Family::Beta1: return {1 + 9ll * t, 1};
            case Family::Beta2: return {2 + 9ll * t, 1};
            case Family::AlphaBeta3: return {3 + 9ll * t, 3};
            case Family::Beta5: return {5 + 9ll * t, 1};
            case Family::BracketBeta5: return {5 + 9ll * t, 1};
            case Family::Beta6: return {6 + 9ll * t, 3};
            case Family::AlphaBeta7: return {7 + 9ll * t, 1};
        }
        throw UnknownFamily("family enum out of range");
    }

    int stem() const {
        static constexpr std::array<int, 7> base = {10, 26, 37, 74, 81, 82, 109};
        assert(t >= 0);
        return base[static_cast<int>(family)] + 144 * t;
    }

    int filtration() const {
        switch (family) {
            case Family::Beta1:
            case Family::Beta2:
            case Family::Beta5:
            case Family::Beta6: return 2;
            case Family::AlphaBeta3:
            case Family::BracketBeta5:
            case Family::AlphaBeta7: return 3;
        }
        throw UnknownFamily("family enum out of range");
    }

    bool plain() const {
        return family == Family::Beta1 || family == Family::Beta2 || family == Family::Beta5;
    }

    std::string str() const {
        std::string b = index().str();
        switch (family) {
            case Family::AlphaBeta3:
            case Family::AlphaBeta7: return "[α_1" + b + "]";
            case Family::BracketBeta5: return "⟨α_1,α_1," + b + "⟩";
            default: return b;
        }
    }

    friend auto operator<=>(const FamilyElement&, const FamilyElement&) = default;
};

/* stem → catalogued family element, the inverse of FamilyElement::stem */
inline FamilyElement family_at_stem(int stem) {
    for (Family fam : kAllFamilies) {
        FamilyElement e{fam, 0};
        int rem = stem - e.stem();
        if (rem >= 0 && rem % 144 == 0) return {fam, rem / 144};
    }
    throw UnknownFamily("no catalogued family in stem " + std::to_string(stem));
}

/* --- formal products and Toda normalization ------------------------------ */

struct FormalProduct {
    std::vector<FamilyElement> factors;
    int unit = 1; /* mod-3 unit coefficient: 1 or 2 */

    int stem() const {
        int s = 0;
        for (const FamilyElement& e : factors) s += e.stem();
        return s;
    }
    int filtration() const {
        int f = 0;
        for (const FamilyElement& e : factors) f += e.filtration();
        return f;
    }
    std::string str() const {
        if (factors.empty()) return std::to_string(unit);
        std::string out = unit == 1 ? "" : std::to_string(unit) + "·";
        for (std::size_t k = 0; k < factors.size();) {
            std::size_t run = k;
            while (run < factors.size() && factors[run] == factors[k]) ++run;
            if (k > 0) out += " ";
            out += factors[k].str();
            if (run - k > 1) out += "^" + std::to_string(run - k);
            k = run;
        }
        return out;
    }
    friend bool operator==(const FormalProduct&, const FormalProduct&) = default;
};

namespace detail {

/* β_i with i ≡ 1, 2, 5 mod 9 are the plain catalogued indices */
inline FamilyElement plain_element(long long index) {
    long long r = floor_mod(index, 9);
    Family fam = r == 1 ? Family::Beta1 : r == 2 ? Family::Beta2 : Family::Beta5;
    assert((r == 1 || r == 2 || r == 5) && "index outside the plain families");
    return {fam, static_cast<int>((index - r) / 9)};
}

} // namespace detail

/* Rewrite a product of plain β_s toward the canonical form β_1^{n−1}·β_big.
 * One pass walks a factor pair (s,t) down the ladder (s,t) → (s−1, t+1);
 * chaining the relations uv·β_s β_t = st·β_u β_v along the ladder cancels
 * every interior index, leaving β_s β_t = [st / (s+t−1)]·β_1 β_{s+t−1}.
 * The swap is legal only when numerator and denominator are prime to 3;
 * otherwise the required Toda coefficient vanishes mod 3. */
inline FormalProduct toda_normalize(const FormalProduct& p) {
    std::vector<long long> idx;
    for (const FamilyElement& e : p.factors) {
        assert(e.plain() && "Toda normalization is defined on plain β factors");
        idx.push_back(e.index().i);
    }
    int unit = p.unit;
    auto unit_mod3 = [](long long v) { return static_cast<int>(floor_mod(v, 3)); };
    std::sort(idx.begin(), idx.end(), std::greater<>());
    /* after each swap idx stays sorted: the merged index grows, the freed β_1
     * sinks to the back */
    while (idx.size() >= 2 && idx[1] > 1) {
        long long t = idx[0], s = idx[1];
        long long num = unit_mod3(s) * unit_mod3(t), den = unit_mod3(s + t - 1);
        if (num % 3 == 0 || den == 0)
            throw NonUnitSwap("β_" + std::to_string(s) + "·β_" + std::to_string(t) +
                              " → β_1·β_" + std::to_string(s + t - 1) +
                              " carries Toda coefficient " + std::to_string(s * t) + "/" +
                              std::to_string(s + t - 1) + " ≡ 0 mod 3");
        /* every unit mod 3 is its own inverse, so dividing by den multiplies by it */
        unit = static_cast<int>(unit * num % 3 * den % 3);
        idx.erase(idx.begin() + 1);
        idx[0] = s + t - 1;
        idx.push_back(1);
    }
    FormalProduct out;
    out.unit = unit;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it)
        out.factors.push_back(detail::plain_element(*it));
    return out;
}

/* the rewriting path above, declared verbatim in reports */
inline const char* toda_path_note() {
    return "canonical form via repeated swaps (s,t) → (s−1,t+1) driving every index but the "
           "largest to 1; accumulated coefficient st/(s+t−1) per merged pair";
}

/* --- admissibility of divided beta indices ------------------------------- *
 *
 * Which β_{s·3^n/j} exist is governed by an external existence theorem; the
 * engine only carries the clauses actually cited, read from a config file.
 * Each clause pins one stem class mod 144 to a congruence on j mod 36 and a
 * lower bound on n. */

struct AdmissibilityClause {
    int stem_mod_144 = 0;
    int j_mod_36 = 0;
    int min_n = 0;
    std::string citation;
};

/* line format: STEM_MOD_144  J_MOD_36  MIN_N  CITATION…; '#' comments */
inline std::vector<AdmissibilityClause> parse_admissibility(const std::string& text) {
    std::vector<AdmissibilityClause> out;
    std::istringstream all(text);
    std::string line;
    while (std::getline(all, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        AdmissibilityClause c;
        if (!(ls >> c.stem_mod_144)) continue; /* blank or comment-only */
        if (!(ls >> c.j_mod_36 >> c.min_n))
            throw ConfigError("admissibility clause needs three integers: " + line);
        std::getline(ls, c.citation);
        c.citation.erase(0, c.citation.find_first_not_of(" \t"));
        if (c.stem_mod_144 < 0 || c.stem_mod_144 >= 144 || c.j_mod_36 < 0 || c.j_mod_36 >= 36 ||
            c.min_n < 0)
            throw ConfigError("admissibility clause out of range: " + line);
        out.push_back(std::move(c));
    }
    return out;
}

inline std::vector<AdmissibilityClause> default_admissibility() {
    return parse_admissibility("50  23 24 Miller-Ravenel-Wilson, Ann. of Math. 106 (1977), Th. 2.6\n"
                               "130  3  4 Miller-Ravenel-Wilson, Ann. of Math. 106 (1977), Th. 2.6\n");
}

struct MrwBounds {
    long long s_max = 50;
    int n_max = 30;
    long long j_max = 10000;
};

struct MrwSolution {
    long long s = 1; /* i = s·3^n with 3 ∤ s */
    int n = 0;
    long long j = 1;
    long long i = 1;
    long long stem = 0;   /* 16i − 4j − 2 */
    int j_mod_36 = 1;
    bool admissible = true; /* no configured clause contradicts this index */
    int min_n = 0;          /* lower bound on n forced by the matching clause */
    int clause = -1;        /* index into the clause list, −1 when none applies */

    BetaIndex index() const { return {i, j}; }
    friend auto operator<=>(const MrwSolution&, const MrwSolution&) = default;
};

/* Every (s, n, j) in bounds whose β_{s·3^n/j} sits in the target stem class
 * mod 144, annotated against the clause table.  For fixed i the stem
 * condition pins j mod 36, so candidates march in steps of 36. */
inline std::vector<MrwSolution> mrw_solutions(Bidegree target, const MrwBounds& bounds,
                                              const std::vector<AdmissibilityClause>& clauses) {
    assert(target.f == 2 && "divided beta indices live in filtration 2");
    int stem_class = static_cast<int>(floor_mod(target.s, 144));
    const AdmissibilityClause* rule = nullptr;
    int rule_at = -1;
    for (std::size_t c = 0; c < clauses.size(); ++c)
        if (clauses[c].stem_mod_144 == stem_class) {
            rule = &clauses[c];
            rule_at = static_cast<int>(c);
            break;
        }
    std::vector<MrwSolution> out;
    for (long long s = 1; s <= bounds.s_max; ++s) {
        if (s % 3 == 0) continue;
        long long i = s;
        for (int n = 0; n <= bounds.n_max; ++n, i *= 3) {
            long long rem = floor_mod(16 * i - 2 - target.s, 144);
            if (rem % 4 != 0) continue;
            long long j0 = rem / 4;
            if (j0 == 0) j0 = 36;
            for (long long j = j0; j <= bounds.j_max; j += 36) {
                MrwSolution sol;
                sol.s = s;
                sol.n = n;
                sol.j = j;
                sol.i = i;
                sol.stem = 16 * i - 4 * j - 2;
                sol.j_mod_36 = static_cast<int>(j % 36);
                if (rule) {
                    sol.admissible = sol.j_mod_36 == rule->j_mod_36 && n >= rule->min_n;
                    sol.min_n = rule->min_n;
                    sol.clause = rule_at;
                }
                out.push_back(sol);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const MrwSolution& x, const MrwSolution& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    return out;
}

/* --- the Hurewicz dictionary into J² ------------------------------------- *
 *
 * Each catalogued family is detected by a fixed chart class: the plain and
 * decorated β's land on blue (ψ-invariant) monomials, the remaining families
 * on red boundary classes.  Degrees: blue keeps the TMF bidegree, ∂ shifts
 * by (−1,+1). */
inline J2Class hurewicz_image(const FamilyElement& e) {
    assert(e.t >= 0);
    const int t = e.t;
    Monomial mono;
    bool boundary = false;
    switch (e.family) {
        case Family::Beta1: mono = {0, 0, 6 * t, 0, 1}; break;
        case Family::Beta2: mono = {0, 0, 1 + 6 * t, 1, 0}, boundary = true; break;
        case Family::AlphaBeta3: mono = {0, 0, 1 + 6 * t, 1, 1}; break;
        case Family::Beta5: mono = {0, 0, 3 + 6 * t, 1, 0}, boundary = true; break;
        case Family::BracketBeta5: mono = {0, 0, 3 + 6 * t, 0, 1}, boundary = true; break;
        case Family::Beta6: mono = {0, 0, 3 + 6 * t, 0, 1}; break;
        case Family::AlphaBeta7: mono = {0, 0, 4 + 6 * t, 1, 1}; break;
    }
    J2Class out;
    out.label.mono = mono;
    out.label.boundary = boundary;
    Bidegree bd = mono.bidegree();
    out.bd = boundary ? Bidegree{bd.s - 1, bd.f + 1} : bd;
    return out;
}

/* --- the lone denominator-9 index ---------------------------------------- *
 *
 * Statement eq:line3 reads β_{(6+9w)/9} where the family catalog lists
 * denominator 3.  The index is exposed exactly as the statement writes it,
 * with the discrepancy flagged; it is never silently corrected. */
struct DenominatorAnomaly {
    BetaIndex as_written;
    BetaIndex catalog_form;
    std::string statement = "eq:line3";
    std::string note;
};

inline DenominatorAnomaly line3_beta6_anomaly(int w) {
    assert(w >= 0);
    return {{6 + 9ll * w, 9},
            {6 + 9ll * w, 3},
            "eq:line3",
            "denominator 9 appears only in eq:line3; the catalog form of this family is " +
                BetaIndex{6 + 9ll * w, 3}.str() + "; kept as written and flagged"};
}

} // namespace betafam
