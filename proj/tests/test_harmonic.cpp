#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndf/checks.hpp"
#include "ndf/harmonic.hpp"
#include "ndf/primes.hpp"
#include "oracles.hpp"

using namespace ndf;

namespace {

PseudoPolynomial x32() { return PseudoPolynomial::monomial(ExactReal(1), ExactReal(3, 2)); }

}  // namespace

TEST_CASE("smoothed indicator shape") {
    SmoothedIndicator psi(0.1, 0.3, 0.05);
    CHECK(psi(0.2) == 1.0);
    CHECK(psi(0.3 + 0.05) == 0.0);
    CHECK(psi(0.7) == 0.0);
    CHECK(psi.mean() == doctest::Approx(0.2));
    CHECK(std::abs(psi.coefficient(0) - Complex(0.2, 0)) < 1e-15);
    // Ramps are symmetric about the window edges.
    CHECK(psi(0.1) == doctest::Approx(0.5));
    CHECK(psi(0.3) == doctest::Approx(0.5));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        CHECK(psi(t) == doctest::Approx(psi(t + 1.0)).epsilon(1e-9));
        CHECK(psi(t) >= 0.0);
        CHECK(psi(t) <= 1.0);
    }
}

TEST_CASE("smoothed indicator hypotheses") {
    CHECK_THROWS_AS(SmoothedIndicator(0.1, 0.3, 0.0), BadWindow);
    CHECK_THROWS_AS(SmoothedIndicator(0.1, 0.3, 0.5), BadWindow);
    CHECK_THROWS_AS(SmoothedIndicator(0.1, 0.12, 0.05), BadWindow);  // beta - alpha < delta
    CHECK_THROWS_AS(SmoothedIndicator(0.0, 0.99, 0.05), BadWindow);  // beta - alpha > 1 - delta
    CHECK_NOTHROW(SmoothedIndicator(0.25, 0.5, 0.25));
}

TEST_CASE("Fourier coefficients match numerical integration and obey the bound") {
    SmoothedIndicator psi(0.23, 0.61, 0.07);
    const int M = 200000;
    for (std::int64_t nu : {1, 2, 3, 7, 25}) {
        // Midpoint rule on a periodic integrand converges geometrically fast for
        // smooth functions; psi is only C^1, so allow 1e-8.
        Complex s = 0;
        for (int i = 0; i < M; ++i) {
            const double t = (i + 0.5) / M;
            s += psi(t) * unit_phase(-static_cast<double>(nu) * t);
        }
        s /= static_cast<double>(M);
        CHECK(std::abs(s - psi.coefficient(nu)) < 1e-8);
        CHECK(std::abs(psi.coefficient(-nu) - std::conj(psi.coefficient(nu))) < 1e-15);
    }
    for (std::int64_t nu = 1; nu <= 10000; ++nu) {
        const double b = std::min({psi.mean(), 1.0 / nu, 1.0 / (static_cast<double>(nu) * nu * psi.delta())});
        REQUIRE(std::abs(psi.coefficient(nu)) <= b * (1 + 1e-12));
        REQUIRE(psi.coefficient_bound(nu) == doctest::Approx(b));
    }
}

TEST_CASE("Fourier truncation stays within the tail bound") {
    SmoothedIndicator psi(0.4, 0.45, 0.01);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const double t = i / 10000.0;
        auto fv = psi.fourier(t, 1000);
        REQUIRE(std::fabs(fv.value - psi(t)) <= fv.truncation_bound);
        worst = std::max(worst, std::fabs(fv.value - psi(t)));
    }
    CHECK(worst > 0);
    // Tail bound is a decreasing function of K and dominated by 2/(delta K).
    CHECK(psi.tail_bound(100) > psi.tail_bound(1000));
    CHECK(psi.tail_bound(1000) <= 2.0 / (psi.delta() * 1000) + 1e-15);
}

TEST_CASE("block windows sandwich the indicator") {
    for (auto [q, ell, H] : {std::tuple{10u, 1u, 100.0}, std::tuple{10u, 1u, 1000.0}, std::tuple{10u, 2u, 1000.0},
                             std::tuple{2u, 3u, 100.0}}) {
        for (std::uint64_t idx : {0ull, 1ull, 5ull}) {
            auto pat = BlockPattern::from_index(idx % (1ull << ell), q, ell);
            auto lo = indicator_for_block(pat, H, BoundSide::minus);
            auto hi = indicator_for_block(pat, H, BoundSide::plus);
            CHECK(hi.mean() - lo.mean() == doctest::Approx(2.0 / H).epsilon(1e-12));
            for (int i = 0; i < 100000; ++i) {
                const double t = i / 100000.0;
                const double I = block_indicator(pat, t);
                REQUIRE(lo(t) <= I);
                REQUIRE(I <= hi(t));
            }
        }
    }
    CHECK_THROWS_AS(indicator_for_block(BlockPattern::parse("12", 10), 400.0, BoundSide::plus), BadWindow);
    CHECK(default_smoothing_H(1e12) == doctest::Approx(10.0));
}

TEST_CASE("block indicator reads digits of floor(f(n))") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<unsigned long> arg(2, 10'000'000);
    for (int i = 0; i < 1000; ++i) {
        const unsigned long n = arg(rng);
        auto v = oracle::floor_mpfr(x32(), n, 256);
        REQUIRE(v);
        const auto d = oracle::digits_by_division(v->get_ui(), 10);
        const unsigned ell = 1 + i % 3;
        const unsigned j = ell + static_cast<unsigned>(rng() % (d.size() - ell + 1));
        // digits j-1 .. j-ell, counted from the least significant position 0
        std::vector<std::uint8_t> want;
        for (unsigned k = 0; k < ell; ++k) want.push_back(d[d.size() - j + k]);
        auto pat = BlockPattern(10, (i % 2) ? want : std::vector<std::uint8_t>(ell, 3));
        const double t = eval_frac_scaled(x32(), mpz_class(n), 1, 10, j, 1e-13).value;
        CHECK(block_indicator(pat, t) == (pat.digits == want ? 1.0 : 0.0));
    }
}

TEST_CASE("smoothed bracketing of the padded block count") {
    for (unsigned ell = 1; ell <= 3; ++ell) {
        const double H = 8 * std::pow(10.0, ell);
        for (const char* text : {"1", "0", "7", "12", "00", "305", "999"}) {
            auto pat = BlockPattern::parse(text, 10);
            if (pat.length() != ell) continue;
            const std::uint64_t N = 1000;
            const auto J = max_length(x32(), 10, N);
            auto lo = indicator_for_block(pat, H, BoundSide::minus);
            auto hi = indicator_for_block(pat, H, BoundSide::plus);
            double slo = 0, shi = 0;
            for (auto p : primes_between(2, N))
                for (unsigned j = ell; j <= J; ++j) {
                    const double t = eval_frac_scaled(x32(), mpz_class(static_cast<unsigned long>(p)), 1, 10, j, 1e-12).value;
                    slo += lo(t);
                    shi += hi(t);
                }
            const double nstar = static_cast<double>(padded_count_Nstar(x32(), 10, N, pat));
            CHECK(slo <= nstar + 1e-9);
            CHECK(nstar <= shi + 1e-9);
        }
    }
}

TEST_CASE("exponential sums over primes") {
    auto one = exp_sum_primes(x32(), 10, 2, 1, 1);
    CHECK(std::abs(one.value) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.prime_count == 1);
    CHECK(one.value.real() == doctest::Approx(std::cos(2 * std::numbers::pi * 0.1 * std::sqrt(8.0))));

    auto s = exp_sum_primes(x32(), 10, 100000, 3, 1);
    CHECK(s.normalized_magnitude <= 0.2);
    CHECK(s.prime_count == 9592);

    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t N = 2 + rng() % 20000;
        const unsigned j = rng() % 8;
        const std::int64_t nu = static_cast<std::int64_t>(rng() % 21) - 10;
        if (nu == 0) continue;
        const double tol = 1e-9;
        auto a = exp_sum_primes(x32(), 10, N, j, nu, tol);
        auto b = exp_sum_primes(x32(), 10, N, j, nu, tol / 10);
        CHECK(std::abs(a.value) <= a.prime_count + N * tol);
        CHECK(a.normalized_magnitude <= 1.0 + 1e-12);
        CHECK(std::abs(a.value - b.value) <= 1.1 * N * tol);
        CHECK(a.phase_error >= 0.0);
    }
    CHECK_THROWS_AS(exp_sum_primes(x32(), 10, 100, 1, 0), BadParameters);
}

TEST_CASE("exponential sums do not depend on thread count") {
    std::vector<ExpSumQuery> grid{{1, 1}, {3, -2}, {5, 7}};
    auto a = exp_sum_grid(x32(), 10, 50000, grid, kDefaultExpSumTol, 1);
    auto b = exp_sum_grid(x32(), 10, 50000, grid, kDefaultExpSumTol, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].value == b[i].value);
        auto single = exp_sum_primes(x32(), 10, 50000, grid[i].j, grid[i].nu);
        CHECK(single.value == a[i].value);
    }
}

TEST_CASE("regime classification") {
    // N = 10^4, theta = 3/2: N^theta = 10^6.
    CHECK(classify_regime(10, 6, 1e4, 1.5, 0.5) == DigitRegime::most_significant);
    CHECK(classify_regime(10, 7, 1e4, 1.5, 0.5) == DigitRegime::most_significant);
    CHECK_THROWS_AS(classify_regime(10, 8, 1e4, 1.5, 0.5), OutOfRange);
    CHECK(classify_regime(10, 1, 1e12, 1.5, 0.5) == DigitRegime::least_significant);
    // Boundary q^j = N^(theta - 1 + rho) = 10^4 is least significant.
    CHECK(classify_regime(10, 4, 1e4, 1.5, 0.5) == DigitRegime::least_significant);
    CHECK(classify_regime(10, 5, 1e4, 1.5, 0.5) == DigitRegime::most_significant);
    CHECK(classify_regime(2, 10, 1024.0, 1.0, 1.0) == DigitRegime::least_significant);
}

TEST_CASE("Vaughan decomposition is exact") {
    for (std::uint64_t P : {1000ull, 10000ull}) {
        const std::uint64_t P1 = 2 * P;
        const auto U = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(P)));
        const auto V = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(P)));
        auto r = vaughan_decompose(P, P1, U, V, [](std::uint64_t n) {
            const double x = static_cast<double>(n);
            return std::fmod(0.37 * x * std::sqrt(x), 1.0);
        });
        CHECK(std::abs(r.direct - r.reconstructed) <= 1e-6 * (P1 - P));
        CHECK_FALSE(r.constraints_feasible);
        CHECK_FALSE(r.fallback_note.empty());
        CHECK(r.components.size() <= 5 * std::pow(std::log(static_cast<double>(P)), 6));
        for (const auto& c : r.components) {
            CHECK(c.X1 <= 2 * c.X);
            CHECK(c.Y1 <= 2 * c.Y);
            CHECK(std::isfinite(c.max_abs_a));
            CHECK(std::isfinite(c.max_abs_b));
        }

        auto z = vaughan_decompose(P, P1, U, V, [](std::uint64_t) { return 0.0; });
        double chebyshev = 0;
        for (std::uint64_t n = P + 1; n <= P1; ++n) chebyshev += oracle::mangoldt_trial(n);
        CHECK(std::abs(z.reconstructed - Complex(chebyshev, 0)) <= 1e-6 * (P1 - P));
        CHECK(std::abs(z.direct - Complex(chebyshev, 0)) <= 1e-9 * (P1 - P));
    }
    CHECK_THROWS_AS(vaughan_decompose(1000, 2000, 10, 31, [](std::uint64_t) { return 0.0; }, true),
                    InfeasibleParameters);
    CHECK_FALSE(vaughan_constraints_feasible(1e6, 2e6, 10, 1000));
    // Feasible only at astronomically large P.
    CHECK(vaughan_constraints_feasible(1e30, 2e30, 4, 1e12));
}

TEST_CASE("Vinogradov exponents") {
    auto e = vinogradov_exponents(1.0, 2);
    CHECK(e.R == 5);
    CHECK(e.L == 12);
    CHECK(e.eta == 1.0 / 576.0);
    double prev = 1.0;
    for (unsigned k = 2; k <= 10; ++k) {
        auto x = vinogradov_exponents(0.5, k);
        CHECK(x.eta > 0);
        CHECK(x.eta < prev);
        prev = x.eta;
    }
    for (unsigned k = 2; k <= 20; ++k)
        for (double rho : {1e-6, 0.01, 0.5, 1.0, static_cast<double>(k)}) CHECK(vinogradov_exponents(rho, k).eta > 0);
    CHECK_THROWS_AS(vinogradov_exponents(1.0, 1), BadParameters);
    CHECK_THROWS_AS(vinogradov_exponents(0.0, 3), BadParameters);
    CHECK_THROWS_AS(vinogradov_exponents(3.5, 3), BadParameters);
    CHECK(default_k_type_ii(1.5) == 4);
    CHECK(default_k_type_i(1.5) == 7);
}

TEST_CASE("van der Corput integrals") {
    auto a = vdc_integral_check([](double x) { return x * x / 2; }, 2, 1.0, 0.0, 1.0);
    CHECK(std::abs(a.integral) <= 1.0);
    for (double T : {0.5, 3.3, 10.0, 41.7}) {
        auto b = vdc_integral_check([T](double x) { return T * x; }, 1, T, 0.0, 1.0);
        // |integral| = |sin(pi T)| / (pi T), so the ratio is |sin(pi T)| / pi.
        CHECK(b.bound_ratio == doctest::Approx(std::fabs(std::sin(std::numbers::pi * T)) / std::numbers::pi).epsilon(1e-9));
        CHECK(b.bound_ratio <= 1.0);
    }
    double worst = 0;
    for (double T : {10.0, 100.0, 1000.0}) {
        // F'' = (3/4) T x^(-1/2) >= (3/4) T / sqrt 2 on [1, 2].
        auto c = vdc_integral_check([T](double x) { return T * x * std::sqrt(x); }, 2, 0.75 * T / std::sqrt(2.0), 1.0, 2.0);
        worst = std::max(worst, c.bound_ratio);
    }
    CHECK(worst <= 3.0);
}

TEST_CASE("dyadic splitting") {
    auto a = split_dyadic(1, 8);
    REQUIRE(a.size() == 3);
    CHECK(a[0].lo == 1);
    CHECK(a[0].hi == 2);
    CHECK(a[2].hi == 8);
    auto b = split_dyadic(1, 2);
    REQUIRE(b.size() == 1);
    for (auto [lo, hi] : {std::pair{3.0, 7.0}, std::pair{0.5, 1000.0}, std::pair{10.0, 10.5}}) {
        auto s = split_dyadic(lo, hi);
        CHECK(s.front().lo == lo);
        CHECK(s.back().hi == hi);
        CHECK(s.size() <= std::ceil(std::log2(hi / lo)) + 1);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i].hi <= 2 * s[i].lo);
            if (i) CHECK(s[i].lo == s[i - 1].hi);
        }
    }
}

TEST_CASE("machinery checks pass, and fail under fault injection") {
    CheckOptions fast;
    fast.grid_points = 20000;
    fast.fourier_grid_points = 2000;
    auto res = run_machinery_checks(fast);
    CHECK(res.size() == 7);
    for (const auto& r : res) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
    fast.coefficient_scale = 2.0;
    for (const auto& r : run_machinery_checks(fast))
        if (r.name == "fourier_coefficient_bound") CHECK_FALSE(r.passed);
}
