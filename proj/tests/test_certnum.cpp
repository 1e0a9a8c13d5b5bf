#include <doctest.h>

#include <cmath>
#include <random>

#include "ndf/certnum.hpp"
#include "oracles.hpp"

using namespace ndf;

namespace {

PseudoPolynomial mono(const char* alpha, const char* theta) {
    return PseudoPolynomial::monomial(parse_exact(alpha), parse_exact(theta));
}

mpz_class Z(unsigned long v) { return mpz_class(v); }

}  // namespace

TEST_CASE("parse_exact reads decimal literals exactly") {
    CHECK(parse_exact("1.5") == ExactReal(3, 2));
    CHECK(parse_exact("0.75") == ExactReal(3, 4));
    CHECK(parse_exact("1e-3") == ExactReal(1, 1000));
    CHECK(parse_exact("-2.50") == ExactReal(-5, 2));
    CHECK(parse_exact(".5") == ExactReal(1, 2));
    CHECK(parse_exact("12E2") == ExactReal(1200));
    CHECK(parse_exact("19/7") == ExactReal(19, 7));
    CHECK(parse_exact("6/4").str() == "3/2");
}

TEST_CASE("parse_exact rejects malformed input") {
    for (const char* bad : {"", ".", "1.2.3", "abc", "1e", "e5", "1/0", "--1", "1 2", "0x10", "1e99999"})
        CHECK_THROWS_AS(parse_exact(bad), MalformedNumber);
}

TEST_CASE("pseudo-polynomial validation and parsing") {
    CHECK_THROWS_AS(PseudoPolynomial({}), BadParameters);
    CHECK_THROWS_AS(PseudoPolynomial({{ExactReal(-1), ExactReal(2)}}), BadParameters);
    CHECK_THROWS_AS(PseudoPolynomial({{ExactReal(1), ExactReal(1)}, {ExactReal(1), ExactReal(2)}}), BadParameters);
    CHECK_THROWS_AS(PseudoPolynomial({{ExactReal(1), ExactReal(0)}}), BadParameters);

    auto f = PseudoPolynomial::parse("1^3/2+-2^1/2");
    REQUIRE(f.terms().size() == 2);
    CHECK(f.terms()[1].coefficient == ExactReal(-2));
    CHECK(f.str() == "1^3/2+-2^1/2");
    auto g = PseudoPolynomial::parse("2.5^2.5-1e-1^1");
    CHECK(g.terms()[1].coefficient == ExactReal(-1, 10));
    CHECK(g.leading_exponent() == ExactReal(5, 2));
}

TEST_CASE("floor of integer exponent is exact at the first precision") {
    auto r = eval_floor_power(mono("1", "2"), Z(3));
    CHECK(r.value == 9);
    CHECK(r.cert.certified);
    CHECK(r.cert.escalations == 0);
    CHECK(r.cert.working_bits == kInitialBits);
    CHECK(r.cert.interval_width == 0.0);
}

TEST_CASE("floor of 2^(3/2) matches a 4x precision MPFR evaluation") {
    auto f = mono("1", "1.5");
    auto r = eval_floor_power(f, Z(2));
    CHECK(r.value == 2);
    auto o = oracle::floor_mpfr(f, 2, 4 * r.cert.working_bits);
    REQUIRE(o);
    CHECK(*o == r.value);
}

TEST_CASE("perfect powers are resolved exactly") {
    auto r = eval_floor_power(mono("1", "3/2"), Z(4));
    CHECK(r.value == 8);
    CHECK(r.cert.interval_width == 0.0);
    CHECK(r.cert.escalations == 0);
    // 3/4 * 4^(5/2) = 24 exactly.
    CHECK(eval_floor_power(mono("3/4", "5/2"), Z(4)).value == 24);
}

TEST_CASE("negative values are rejected") {
    auto f = PseudoPolynomial::parse("1^1-10^1/2");
    CHECK_THROWS_AS(eval_floor_power(f, Z(4)), NegativeValue);
}

TEST_CASE("cancelling irrational terms exhaust the precision ladder") {
    // 2^(3/2) - 2 * 2^(1/2) = 0 exactly, which no enclosure certifies.
    auto f = PseudoPolynomial::parse("1^3/2-2^1/2");
    try {
        eval_floor_power(f, Z(2), 512);
        FAIL("expected AmbiguousFloor");
    } catch (const AmbiguousFloor& e) {
        CHECK_FALSE(e.certificate().certified);
        CHECK(e.certificate().working_bits == 512);
        CHECK(e.certificate().escalations == 3);
    }
}

TEST_CASE("floor agrees with the MPFR oracle on random arguments") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<unsigned long> arg(2, 10'000'000);
    const char* alphas[] = {"1", "3/4", "19/7", "0.001"};
    const char* thetas[] = {"3/2", "5/2", "7/3", "1.01"};
    for (int i = 0; i < 2000; ++i) {
        auto f = mono(alphas[i % 4], thetas[(i / 4) % 4]);
        const unsigned long n = arg(rng);
        auto r = eval_floor_power(f, Z(n));
        auto o = oracle::floor_mpfr(f, n, 4 * r.cert.working_bits);
        REQUIRE(o);
        CHECK(*o == r.value);
    }
}

TEST_CASE("certificate honesty and monotonicity") {
    auto f = PseudoPolynomial::parse("1^7/3+1/3^1");
    mpz_class prev = -1;
    for (unsigned long n = 2; n < 3000; ++n) {
        auto r = eval_floor_power(f, Z(n));
        REQUIRE(r.cert.certified);
        if (r.cert.interval_width > 0) {
            // The width must be below the distance from the midpoint to the nearest integer;
            // recompute the midpoint independently.
            const long double v = oracle::approx(f, static_cast<long double>(n));
            const long double frac = v - std::floor(v);
            const long double dist = std::min(frac, 1 - frac);
            CHECK(r.cert.interval_width < dist + 1e-12L);
        }
        CHECK(r.value >= prev);
        prev = r.value;
    }
}

TEST_CASE("fractional parts of scaled values") {
    SUBCASE("5/10") {
        auto r = eval_frac_scaled(mono("1", "1"), Z(5), 1, 10, 1, 1e-12);
        CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r.cert.certified);
    }
    SUBCASE("2^(3/2) mod 1") {
        const double tol = 1e-12;
        auto f = mono("1", "3/2");
        auto r = eval_frac_scaled(f, Z(2), 1, 2, 0, tol);
        const double o = oracle::frac_mpfr(f, 2, 1, 2, 0, 256);
        CHECK(std::fabs(r.value - o) <= tol);
        CHECK(std::fabs(r.value - 0.8284271247461903) <= tol);
    }
    SUBCASE("3 * 49 / 100") {
        auto r = eval_frac_scaled(mono("1", "2"), Z(7), 3, 10, 2, 1e-12);
        CHECK(r.value == doctest::Approx(0.47).epsilon(1e-14));
    }
    SUBCASE("negative frequency wraps into [0,1)") {
        auto r = eval_frac_scaled(mono("1", "2"), Z(7), -3, 10, 2, 1e-12);
        CHECK(r.value == doctest::Approx(0.53).epsilon(1e-14));
    }
    SUBCASE("exact integer has zero fraction") {
        auto r = eval_frac_scaled(mono("1", "2"), Z(10), 1, 10, 2, 1e-12);
        CHECK(r.value == 0.0);
    }
}

TEST_CASE("fractional parts agree with MPFR on random inputs") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<unsigned long> arg(2, 1'000'000);
    auto f = mono("19/7", "7/3");
    for (int i = 0; i < 500; ++i) {
        const unsigned long n = arg(rng);
        const long nu = static_cast<long>(i % 21) - 10;
        if (nu == 0) continue;
        const unsigned j = static_cast<unsigned>(i % 9);
        const double tol = 1e-13;
        auto r = eval_frac_scaled(f, Z(n), nu, 10, j, tol);
        const double o = oracle::frac_mpfr(f, n, nu, 10, j, 512);
        double d = std::fabs(r.value - o);
        d = std::min(d, 1.0 - d);
        CHECK(d <= tol);
    }
}

TEST_CASE("fractional-part preconditions") {
    auto f = mono("1", "2");
    CHECK_THROWS_AS(eval_frac_scaled(f, Z(3), 0, 10, 1, 1e-9), BadParameters);
    CHECK_THROWS_AS(eval_frac_scaled(f, Z(3), 1, 1, 1, 1e-9), BadParameters);
    CHECK_THROWS_AS(eval_frac_scaled(f, Z(3), 1, 10, 1, 0.3), BadParameters);
}

TEST_CASE("ambiguous fraction reports the straddle") {
    // 2^(3/2) - 2*2^(1/2) = 0: every enclosure straddles the wrap point.
    auto f = PseudoPolynomial::parse("1^3/2-2^1/2");
    try {
        eval_frac_scaled(f, Z(2), 1, 10, 0, 1e-9, 256);
        FAIL("expected AmbiguousFrac");
    } catch (const AmbiguousFrac& e) {
        CHECK(e.certificate().straddles_wrap);
        CHECK_FALSE(e.certificate().certified);
    }
}
