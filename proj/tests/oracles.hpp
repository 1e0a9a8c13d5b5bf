#pragma once

// Reference computations used only by tests. None of these share code paths
// with the library routines they check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ndf/certnum.hpp"

namespace oracle {

/// floor(f(n)) from an MPFR enclosure at `bits` of precision with directed
/// rounding; nullopt when the enclosure straddles an integer.
std::optional<mpz_class> floor_mpfr(const ndf::PseudoPolynomial& f, unsigned long n, unsigned bits);

/// f(n) in long double, for loose sanity checks.
long double approx(const ndf::PseudoPolynomial& f, long double n);

/// {x} of f(n) * nu / q^j via MPFR at `bits` precision (midpoint).
double frac_mpfr(const ndf::PseudoPolynomial& f, unsigned long n, long nu, unsigned q, unsigned j, unsigned bits);

bool is_prime_trial(std::uint64_t n);
std::vector<std::uint64_t> primes_trial(std::uint64_t n);

/// Number of positions i with digits[i..i+ell) == pattern.
std::uint64_t brute_count(const std::vector<std::uint8_t>& digits, const std::vector<std::uint8_t>& pattern);

/// Base-q digits of m, most significant first, by repeated division.
std::vector<std::uint8_t> digits_by_division(std::uint64_t m, unsigned q);

/// Li(x) = Ei(log x) - Ei(log 2) via the exponential integral.
double li_via_expint(double x);

/// Lambda(n) by trial division.
double mangoldt_trial(std::uint64_t n);

}  // namespace oracle
