#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "betafam/localint.hpp"

using namespace betafam;

TEST_CASE("construction and printing") {
    CHECK(LocalInt(7).str() == "7");
    CHECK(LocalInt(-12).str() == "-12");
    CHECK(LocalInt(1, 2).str() == "1/2");
    CHECK(LocalInt(4, 2).str() == "2");
    CHECK(LocalInt::from_string("10/4").str() == "5/2");
    CHECK(LocalInt::from_string("-81").str() == "-81");
    CHECK_THROWS_AS(LocalInt(1, 3), NonLocalDenominator);
    CHECK_THROWS_AS(LocalInt(5, 6), NonLocalDenominator);
    CHECK(LocalInt(3, 6) == LocalInt(1, 2)); /* cancels before the check */
}

TEST_CASE("arithmetic is exact") {
    LocalInt a(1, 2), b(1, 4);
    CHECK(a + b == LocalInt(3, 4));
    CHECK(a - b == LocalInt(1, 4));
    CHECK(a * b == LocalInt(1, 8));
    CHECK(-a == LocalInt(-1, 2));
    LocalInt c(5);
    c += LocalInt(1, 5);
    CHECK(c == LocalInt(26, 5));
}

TEST_CASE("valuation and unit structure") {
    CHECK(LocalInt(1).valuation() == 0);
    CHECK(LocalInt(9).valuation() == 2);
    CHECK(LocalInt(6, 5).valuation() == 1);
    CHECK(LocalInt(-27).valuation() == 3);
    CHECK(LocalInt(0).valuation() == std::numeric_limits<int>::max());
    CHECK(LocalInt(7).is_unit());
    CHECK_FALSE(LocalInt(12).is_unit());
    CHECK_FALSE(LocalInt(0).is_unit());
    CHECK(LocalInt(18).unit_part() == LocalInt(2));
    CHECK(LocalInt(-45, 7).unit_part() == LocalInt(-5, 7));
    CHECK(LocalInt(2).inverse() == LocalInt(1, 2));
    CHECK_THROWS_AS(LocalInt(3).inverse(), NonLocalDenominator);
}

TEST_CASE("exact division stays in the ring") {
    CHECK(LocalInt(18).div_exact(LocalInt(6)) == LocalInt(3));
    CHECK(LocalInt(9).div_exact(LocalInt(6)) == LocalInt(3, 2));
    CHECK_THROWS_AS(LocalInt(6).div_exact(LocalInt(9)), NonLocalDenominator);
    CHECK_THROWS_AS(LocalInt(1).div_exact(LocalInt(0)), Error);
}

TEST_CASE("powers, including the large Adams scalars") {
    CHECK(LocalInt::pow(LocalInt(2), 10) == LocalInt(1024));
    CHECK(LocalInt::pow(LocalInt(2), -2) == LocalInt(1, 4));
    CHECK(LocalInt::prime_power(0) == LocalInt(1));
    CHECK(LocalInt::prime_power(4) == LocalInt(81));
    CHECK_THROWS_AS(LocalInt::prime_power(-1), Error);

    /* v(2^12 - 1) = v(4095) = 2, and the exponent-lifting pattern
     * v(2^(12m) - 1) = 2 + v(m); probe it far beyond 64-bit range. */
    CHECK((LocalInt::pow(LocalInt(2), 12) - LocalInt(1)).valuation() == 2);
    CHECK((LocalInt::pow(LocalInt(2), 36) - LocalInt(1)).valuation() == 3);
    CHECK((LocalInt::pow(LocalInt(2), 12 * 81) - LocalInt(1)).valuation() == 6);
    CHECK((LocalInt::pow(LocalInt(2), 200) - LocalInt(1)).valuation() == 1);
    CHECK((LocalInt::pow(LocalInt(2), 199) - LocalInt(1)).valuation() == 0);
}

TEST_CASE("residues mod prime powers") {
    CHECK(LocalInt(7).residue() == 1);
    CHECK(LocalInt(-1).residue() == 2);
    CHECK(LocalInt(1, 2).residue(1) == 2);
    CHECK(LocalInt(1, 2).residue(2) == 5);
    CHECK(LocalInt(10, 7).residue(2) == 4); /* 10 * 7^{-1} = 10 * 4 = 40 = 4 mod 9 */
}
