#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>
#include <compare>
#include <limits>
#include <ostream>
#include <string>

#include "betafam/util.hpp"

namespace betafam {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/* The working prime.  Everything 3-local in the engine routes through this
 * single constant; nothing else hard-codes 3 as the prime. */
inline constexpr int kPrime = 3;

/* Element of Z localised at kPrime: a rational whose denominator is a unit
 * (coprime to the prime).  Exact arithmetic throughout — no floats anywhere
 * in the engine.  cpp_rational keeps fractions canonical, so equality and
 * hashing are structural. */
class LocalInt {
  public:
    LocalInt() : v_(0) {}
    LocalInt(long long n) : v_(n) {}
    LocalInt(const BigInt& n) : v_(n) {}
    /* boost::rational rejects negative denominators outright for unbounded
     * integers, so canonicalise the sign before handing the pair over */
    LocalInt(BigInt num, BigInt den) {
        if (den < 0) num = -num, den = -den;
        v_ = BigRat(std::move(num), std::move(den));
        check();
    }
    explicit LocalInt(BigRat r) : v_(std::move(r)) { check(); }

    static LocalInt from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return LocalInt(BigInt(s));
        return LocalInt(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }

    const BigRat& value() const { return v_; }
    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }

    /* p-adic valuation; numeric_limits<int>::max() encodes v(0) = infinity. */
    int valuation() const {
        if (is_zero()) return std::numeric_limits<int>::max();
        BigInt n = num();
        int v = 0;
        while (n % kPrime == 0) {
            n /= kPrime;
            ++v;
        }
        return v;
    }
    bool is_unit() const { return !is_zero() && num() % kPrime != 0; }

    /* x = p^valuation * unit_part */
    LocalInt unit_part() const {
        if (is_zero()) throw Error("unit_part of zero");
        BigInt n = num();
        while (n % kPrime == 0) n /= kPrime;
        return LocalInt(n, den());
    }

    LocalInt inverse() const {
        if (!is_unit()) throw NonLocalDenominator("inverse of a non-unit in the local ring");
        return LocalInt(den(), num());
    }

    /* Exact division, defined whenever valuation(*this) >= valuation(rhs). */
    LocalInt div_exact(const LocalInt& rhs) const {
        if (rhs.is_zero()) throw Error("division by zero");
        LocalInt q(BigRat(v_ / rhs.v_));
        return q;  // constructor re-checks the denominator is a unit
    }

    friend LocalInt operator+(const LocalInt& a, const LocalInt& b) { return LocalInt(BigRat(a.v_ + b.v_)); }
    friend LocalInt operator-(const LocalInt& a, const LocalInt& b) { return LocalInt(BigRat(a.v_ - b.v_)); }
    friend LocalInt operator*(const LocalInt& a, const LocalInt& b) { return LocalInt(BigRat(a.v_ * b.v_)); }
    LocalInt operator-() const { return LocalInt(BigRat(-v_)); }
    LocalInt& operator+=(const LocalInt& b) { v_ += b.v_; return *this; }
    LocalInt& operator-=(const LocalInt& b) { v_ -= b.v_; return *this; }
    LocalInt& operator*=(const LocalInt& b) { v_ *= b.v_; return *this; }

    friend bool operator==(const LocalInt& a, const LocalInt& b) { return a.v_ == b.v_; }
    friend bool operator!=(const LocalInt& a, const LocalInt& b) { return a.v_ != b.v_; }
    friend bool operator<(const LocalInt& a, const LocalInt& b) { return a.v_ < b.v_; }

    /* residue mod p^e, as an integer in [0, p^e); defined for valuation >= 0
     * (always true here) since the denominator is invertible mod p^e. */
    long long residue(int e = 1) const {
        BigInt mod = 1;
        for (int i = 0; i < e; ++i) mod *= kPrime;
        BigInt n = num() % mod, d = den() % mod;
        if (n < 0) n += mod;
        /* invert d mod p^e by exhaustion: e is tiny in practice */
        for (BigInt x = 1; x < mod; ++x)
            if ((d * x) % mod == 1) return static_cast<long long>(BigInt((n * x) % mod));
        throw Error("residue: denominator not invertible");
    }

    std::string str() const {
        std::string s = num().str();
        if (den() != 1) s += "/" + den().str();
        return s;
    }
    friend std::ostream& operator<<(std::ostream& os, const LocalInt& x) { return os << x.str(); }

    static LocalInt pow(const LocalInt& base, long long e) {
        if (e < 0) return pow(base, -e).inverse_any();
        LocalInt acc(1), b = base;
        while (e) {
            if (e & 1) acc *= b;
            b *= b;
            e >>= 1;
        }
        return acc;
    }
    static LocalInt prime_power(int e) {
        if (e < 0) throw Error("negative prime power is not local");
        return pow(LocalInt(kPrime), e);
    }

  private:
    /* 1/x for any nonzero x whose numerator is a unit times p^0 ... used only
     * via pow with unit bases (Adams scalars k^d with k a unit). */
    LocalInt inverse_any() const {
        if (is_zero()) throw Error("division by zero");
        LocalInt q(den(), num());
        return q;
    }
    void check() const {
        if (boost::multiprecision::denominator(v_) % kPrime == 0)
            throw NonLocalDenominator("denominator divisible by the prime: " +
                                      boost::multiprecision::denominator(v_).str());
    }
    BigRat v_;
};

using Mat = Eigen::Matrix<LocalInt, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<LocalInt, Eigen::Dynamic, 1>;

}  // namespace betafam

namespace Eigen {
template <>
struct NumTraits<betafam::LocalInt> {
    using Real = betafam::LocalInt;
    using NonInteger = betafam::LocalInt;
    using Nested = betafam::LocalInt;
    using Literal = long long;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 16,
    };
    static inline Real epsilon() { return betafam::LocalInt(0); }
    static inline Real dummy_precision() { return betafam::LocalInt(0); }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen
