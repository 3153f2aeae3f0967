#pragma once

#include <map>
#include <string>

#include "betafam/localint.hpp"
#include "betafam/monomial.hpp"

namespace betafam {

/* 24³, the coefficient in the c6-square rewrite c6² = c4³ − 24³Δ. */
inline const LocalInt kC6SquareDelta = LocalInt(24 * 24 * 24);

/* Exact element of the bigraded E2 ring: a finite sum of normal-form
 * monomials with LocalInt coefficients.  Torsion monomials carry F3
 * coefficients, normalised to residues {1, 2}; free monomials keep full
 * 3-local coefficients. */
class RingElement {
  public:
    using Terms = std::map<Monomial, LocalInt>;

    RingElement() = default;
    RingElement(const Monomial& mono, const LocalInt& c = LocalInt(1)) { add(mono, c); }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    /* add c·mono, rewriting b ≥ 2 and killing relation-annihilated terms */
    void add(Monomial mono, LocalInt c) {
        if (c.is_zero()) return;
        if (mono.eps > 1) return;                                        /* α² = 0 */
        if (mono.is_torsion() && (mono.a != 0 || mono.b != 0)) return;   /* αc4 = ... = 0 */
        if (mono.b >= 2) { /* c6² = c4³ − 24³Δ */
            Monomial cube = mono, delta = mono;
            cube.b -= 2, cube.a += 3;
            delta.b -= 2, delta.m += 1;
            add(cube, c);
            add(delta, -(kC6SquareDelta * c));
            return;
        }
        if (mono.is_torsion()) { /* 3α = 3β = 0: coefficient lives in F3 */
            long long r = c.residue();
            if (r == 0) return;
            c = LocalInt(r);
        }
        assert(mono.valid());
        auto [it, fresh] = t_.try_emplace(mono, c);
        if (!fresh) {
            it->second += c;
            bool dead = it->second.is_zero() ||
                        (mono.is_torsion() && it->second.residue() == 0);
            if (dead)
                t_.erase(it);
            else if (mono.is_torsion())
                it->second = LocalInt(it->second.residue());
        }
    }

    RingElement& operator+=(const RingElement& o) {
        for (const auto& [mono, c] : o.t_) add(mono, c);
        return *this;
    }
    friend RingElement operator+(RingElement x, const RingElement& y) { return x += y; }
    friend RingElement operator*(const LocalInt& c, const RingElement& x) {
        RingElement out;
        for (const auto& [mono, coeff] : x.t_) out.add(mono, c * coeff);
        return out;
    }
    friend RingElement operator*(const RingElement& x, const RingElement& y) {
        RingElement out;
        for (const auto& [mx, cx] : x.t_)
            for (const auto& [my, cy] : y.t_) {
                Monomial prod{mx.a + my.a, mx.b + my.b, mx.m + my.m, mx.eps + my.eps, mx.k + my.k};
                out.add(prod, cx * cy);
            }
        return out;
    }
    RingElement operator-() const { return LocalInt(-1) * *this; }
    friend RingElement operator-(RingElement x, const RingElement& y) { return x += -y; }
    friend bool operator==(const RingElement& x, const RingElement& y) { return x.t_ == y.t_; }

    /* all terms share one bidegree (a ring element used as a class) */
    bool homogeneous() const {
        if (t_.empty()) return true;
        Bidegree bd = t_.begin()->first.bidegree();
        for (const auto& [mono, c] : t_)
            if (mono.bidegree() != bd) return false;
        return true;
    }
    Bidegree bidegree() const {
        assert(!t_.empty() && homogeneous());
        return t_.begin()->first.bidegree();
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        for (const auto& [mono, c] : t_) {
            if (!out.empty()) out += " + ";
            if (c == LocalInt(1))
                out += mono.str();
            else
                out += c.str() + "·" + mono.str();
        }
        return out;
    }

  private:
    Terms t_;
};

}  // namespace betafam
