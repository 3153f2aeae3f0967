#pragma once

#include "betafam/ring.hpp"
#include "betafam/util.hpp"

namespace betafam {

/* The stable Adams operation ψ^k on the E2 of TMF: scalar k^d on the
 * weight-d modular-form part, identity on α and β. */
struct PsiOperator {
    int k = 2;

    explicit PsiOperator(int k_) : k(k_) {
        if (floor_mod(k, kPrime) == 0)
            throw ConfigError("ψ^k needs k coprime to " + std::to_string(kPrime) +
                              ", got k = " + std::to_string(k));
    }

    LocalInt scalar(const Monomial& g) const { return LocalInt::pow(LocalInt(k), g.weight()); }
};

inline RingElement apply_psi(const PsiOperator& op, const RingElement& x) {
    RingElement out;
    for (const auto& [mono, c] : x.terms()) out += RingElement(mono, op.scalar(mono) * c);
    return out;
}

}  // namespace betafam
