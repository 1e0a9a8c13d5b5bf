#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "ndf/certnum.hpp"
#include "ndf/digitstream.hpp"

namespace ndf {

/// Completely q-additive function: g(n) = sum of weights[d] over the base-q digits d of n.
struct QAdditiveFunction {
    unsigned base = 10;
    std::vector<double> weights;  // size base, weights[0] == 0

    QAdditiveFunction(unsigned q, std::vector<double> w);
    /// s_q, the digit sum.
    static QAdditiveFunction digit_sum(unsigned q);

    double operator()(const mpz_class& n) const;
    double operator()(std::uint64_t n) const;
};

std::uint64_t digit_sum(std::uint64_t n, unsigned q);
std::uint64_t digit_sum(const mpz_class& n, unsigned q);

/// (1/q) * sum of the weights.
double mean_digit_value(const QAdditiveFunction& g);

struct DiscrepancyReport {
    std::uint64_t L = 0;
    unsigned ell = 1;
    double sup_deviation = 0.0;
    BlockPattern argmax_pattern;
    std::vector<double> per_pattern_freqs;  // count / L, indexed by pattern index
};

/// sup over all q^ell blocks of |count/L - q^-ell|, counting across item boundaries.
DiscrepancyReport discrepancy(std::span<const std::uint8_t> digits, unsigned q, unsigned ell);
/// Same, from a counter that has already seen the L digits.
DiscrepancyReport discrepancy(const BlockCounter& counter);

struct SummatoryResult {
    std::uint64_t N = 0;
    std::uint64_t prime_count = 0;
    double empirical = 0.0;
    double main_term = 0.0;
    double residual_per_prime = 0.0;
    /// Occurrences of each digit across all ⌊f(p)⌋ expansions, p <= N.
    std::vector<std::uint64_t> digit_counts;
};

/// sum_{p<=N} g(⌊f(p)⌋) against mu_g * pi(N) * log_q(N^theta), theta the leading exponent.
SummatoryResult summatory_over_primes(const QAdditiveFunction& g, const PseudoPolynomial& f, std::uint64_t N,
                                      const StreamOptions& opts = {});

/// Main terms at several N from one pass over the primes; Ns ascending.
std::vector<SummatoryResult> summatory_over_primes(const QAdditiveFunction& g, const PseudoPolynomial& f,
                                                   std::span<const std::uint64_t> Ns,
                                                   const StreamOptions& opts = {});

/// q^-ell * pi(N) * log_q(N^theta).
double block_main_term(std::uint64_t N, double theta, unsigned q, unsigned ell);
/// Same with pi(N) supplied.
double block_main_term_with_count(std::uint64_t prime_count, std::uint64_t N, double theta, unsigned q,
                                  unsigned ell);

struct DecaySample {
    double L = 0.0;
    double R = 0.0;
};

struct DecayFit {
    double C = 0.0;           // median of R * log L
    double band_ratio = 0.0;  // max / min of R * log L
};

DecayFit fit_log_decay(std::span<const DecaySample> samples);

}  // namespace ndf
