#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "betafam/ring.hpp"
#include "betafam/util.hpp"

namespace betafam {

/* A generator differential d_page(source) = value, extended to the whole
 * page by the Leibniz rule / module linearity. */
struct DifferentialRule {
    enum class Provenance { PaperConfig, LeibnizDerived, LiftedFromMap, BoundaryInduced };

    std::string name;
    int page = 0;
    Monomial source;
    RingElement value;
    Provenance provenance = Provenance::PaperConfig;

    /* the bidegree shift must be (−1, +page) and both ends sparse */
    void validate() const {
        if (page < 2) throw DegreeMismatch("rule " + name + ": page index must be ≥ 2");
        Bidegree want = d_target(source.bidegree(), page);
        for (const auto& [mono, c] : value.terms()) {
            (void)c;
            if (!(mono.bidegree() == want))
                throw DegreeMismatch("rule " + name + ": target " + mono.str() + " sits at " +
                                     mono.bidegree().str() + ", shift (−1,+" + std::to_string(page) +
                                     ") from " + source.str() + " needs " + want.str());
        }
        if (floor_mod(source.bidegree().s + source.bidegree().f, 4) != 0 ||
            floor_mod(want.s + want.f, 4) != 0)
            throw DegreeMismatch("rule " + name + ": bidegree violates 4 | s+f sparsity");
    }
};

/* --- parsing: factors joined by '*', terms by '+', e.g. "2*Δ*α*β^2" --- */

namespace detail {

inline bool parse_int(const std::string& tok, long long* out) {
    if (tok.empty()) return false;
    size_t i = tok[0] == '-' ? 1 : 0;
    if (i == tok.size()) return false;
    for (size_t j = i; j < tok.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(tok[j]))) return false;
    *out = std::stoll(tok);
    return true;
}

inline RingElement parse_factor(const std::string& tok) {
    std::string base = tok;
    long long exp = 1;
    if (size_t caret = tok.find('^'); caret != std::string::npos) {
        base = tok.substr(0, caret);
        if (!parse_int(tok.substr(caret + 1), &exp))
            throw ConfigError("bad exponent in factor '" + tok + "'");
    }
    long long c;
    if (parse_int(base, &c)) {
        if (exp != 1) throw ConfigError("integer factor with exponent: '" + tok + "'");
        return RingElement(Monomial{}, LocalInt(c));
    }
    Monomial g;
    if (base == "c4")
        g = mono_c4();
    else if (base == "c6")
        g = mono_c6();
    else if (base == "Δ" || base == "D")
        g = mono_delta(1);
    else if (base == "α" || base == "a")
        g = mono_alpha();
    else if (base == "β" || base == "b")
        g = mono_beta(1);
    else
        throw ConfigError("unknown generator '" + base + "'");
    if (exp < 0 && !(g == mono_delta(1))) throw ConfigError("negative power of '" + base + "'");
    if (g == mono_delta(1)) return RingElement(mono_delta(static_cast<int>(exp)));
    RingElement out(Monomial{});
    for (long long i = 0; i < exp; ++i) out = out * RingElement(g);
    return out;
}

}  // namespace detail

inline RingElement parse_element(const std::string& text) {
    RingElement out;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty() || s == "0") return out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t plus = s.find('+', pos);
        std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        if (term.empty()) throw ConfigError("empty term in '" + text + "'");
        RingElement t(Monomial{});
        size_t fpos = 0;
        while (fpos <= term.size()) {
            size_t star = term.find('*', fpos);
            std::string fac =
                term.substr(fpos, star == std::string::npos ? std::string::npos : star - fpos);
            t = t * detail::parse_factor(fac);
            if (star == std::string::npos) break;
            fpos = star + 1;
        }
        out += t;
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    return out;
}

inline Monomial parse_monomial(const std::string& text) {
    RingElement e = parse_element(text);
    if (e.terms().size() != 1 || !(e.terms().begin()->second == LocalInt(1)))
        throw ConfigError("'" + text + "' is not a plain monomial");
    return e.terms().begin()->first;
}

/* One rule per line: NAME PAGE SOURCE -> TARGET.  '#' starts a comment. */
inline std::vector<DifferentialRule> parse_rules(const std::string& text) {
    std::vector<DifferentialRule> rules;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (size_t hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string name, page_tok, src_tok, arrow, tgt_tok;
        if (!(ls >> name)) continue;
        if (!(ls >> page_tok >> src_tok >> arrow >> tgt_tok) || arrow != "->")
            throw ConfigError("malformed rule line: '" + line + "'");
        DifferentialRule r;
        r.name = name;
        long long page;
        if (!detail::parse_int(page_tok, &page)) throw ConfigError("bad page in '" + line + "'");
        r.page = static_cast<int>(page);
        r.source = parse_monomial(src_tok);
        r.value = parse_element(tgt_tok);
        r.validate();
        rules.push_back(std::move(r));
    }
    return rules;
}

inline std::vector<DifferentialRule> load_rules(const std::string& path) {
    return parse_rules(read_file(path));
}

/* Leibniz/linearity closure of the page-r generator rules on one monomial.
 * Single-generator sources differentiate by the power rule; composite
 * sources (αΔ^2) extend by linearity over β and Δ^{±3}.  All signs are +. */
inline RingElement apply_rules(const std::vector<DifferentialRule>& rules, int r,
                               const Monomial& g) {
    RingElement out;
    for (const DifferentialRule& rule : rules) {
        if (rule.page != r) continue;
        const Monomial& s = rule.source;
        int weight_one = (s.a == 1) + (s.b == 1) + (s.m == 1) + (s.eps == 1) + (s.k == 1);
        int support = (s.a != 0) + (s.b != 0) + (s.m != 0) + (s.eps != 0) + (s.k != 0);
        if (weight_one == 1 && support == 1) {
            /* d(x^n · rest) = n x^{n−1} d(x) · rest */
            long long n = s.a ? g.a : s.b ? g.b : s.m ? g.m : s.eps ? g.eps : g.k;
            if (n == 0) continue;
            Monomial rest = g;
            if (s.a)
                rest.a -= 1;
            else if (s.b)
                rest.b -= 1;
            else if (s.m)
                rest.m -= 1;
            else if (s.eps)
                rest.eps -= 1;
            else
                rest.k -= 1;
            out += LocalInt(n) * (RingElement(rest) * rule.value);
        } else {
            /* composite source: g must factor as s · β^j Δ^{3n} */
            Monomial rest{g.a - s.a, g.b - s.b, g.m - s.m, g.eps - s.eps, g.k - s.k};
            if (rest.a == 0 && rest.b == 0 && rest.eps == 0 && rest.k >= 0 &&
                floor_mod(rest.m, 3) == 0)
                out += RingElement(rest) * rule.value;
        }
    }
    return out;
}

}  // namespace betafam
