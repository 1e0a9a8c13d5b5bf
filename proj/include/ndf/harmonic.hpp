#pragma once

// Harmonic-analysis machinery behind the block-frequency estimates: smoothed
// interval indicators with explicit Fourier coefficients, exponential sums
// over primes, the Vaughan decomposition of von Mangoldt-weighted sums, and
// a few exponent and integral calculators.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ndf/certnum.hpp"
#include "ndf/digitstream.hpp"

namespace ndf {

using Complex = std::complex<double>;

/// e(x) = exp(2 pi i x).
Complex unit_phase(double x);

/// 1-periodic smoothing of the indicator of [alpha, beta]: the convolution
/// with a triangular kernel supported on [-delta/2, delta/2]. It equals 1 on
/// [alpha + delta/2, beta - delta/2], vanishes on [beta + delta/2,
/// 1 + alpha - delta/2], and has Fourier coefficients
///   A(nu) = (e(-nu alpha) - e(-nu beta)) / (2 pi i nu) * sinc^2(pi nu delta / 2).
class SmoothedIndicator {
public:
    SmoothedIndicator(double alpha, double beta, double delta, std::uint64_t cutoff = 1000);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double delta() const { return delta_; }
    std::uint64_t fourier_cutoff() const { return cutoff_; }
    double mean() const { return beta_ - alpha_; }

    /// Closed form, t taken mod 1.
    double operator()(double t) const;

    /// A(nu); A(0) is the mean.
    Complex coefficient(std::int64_t nu) const;

    /// min(beta - alpha, 1/|nu|, 1/(nu^2 delta)), the bound |A(nu)| obeys.
    double coefficient_bound(std::int64_t nu) const;

    struct FourierValue {
        double value;
        double truncation_bound;  // sum over |nu| > K of coefficient_bound(nu)
    };
    FourierValue fourier(double t, std::uint64_t K) const;
    FourierValue fourier(double t) const { return fourier(t, cutoff_); }

    /// Tail sum over |nu| > K of coefficient_bound(nu).
    double tail_bound(std::uint64_t K) const;

private:
    double alpha_, beta_, delta_;
    std::uint64_t cutoff_;
};

SmoothedIndicator build_smoothed_indicator(double alpha, double beta, double delta, std::uint64_t cutoff = 1000);

/// Exact block indicator: 1 iff offset <= {t} < offset + q^-ell.
double block_indicator(const BlockPattern& pattern, double t);

enum class BoundSide { minus, plus };

/// Minorant (minus) or majorant (plus) of the block indicator with ramps of
/// width 1/H. Requires H > 4 q^ell.
SmoothedIndicator indicator_for_block(const BlockPattern& pattern, double H, BoundSide side,
                                      std::uint64_t cutoff = 1000);

/// Default smoothing parameter at stream length L: L^(1/12).
double default_smoothing_H(double L);

// ---------------------------------------------------------------------------

struct ExpSumSample {
    std::uint64_t N = 0;
    unsigned j = 0;
    std::int64_t nu = 0;
    Complex value;
    double phase_error = 0.0;  // bound on |value - exact sum|
    std::uint64_t prime_count = 0;
    double normalized_magnitude = 0.0;  // |value| / pi(N)
    std::uint64_t escalations = 0;
};

inline constexpr double kDefaultExpSumTol = 1e-9;

/// S(N, j, nu) = sum_{p <= N} e(nu q^-j f(p)). Each phase is certified to
/// tol / pi(N). Primes are summed in fixed slices reduced in order, so the
/// result does not depend on `threads`.
ExpSumSample exp_sum_primes(const PseudoPolynomial& f, unsigned q, std::uint64_t N, unsigned j, std::int64_t nu,
                            double tol = kDefaultExpSumTol, unsigned threads = 1,
                            unsigned max_bits = kDefaultMaxBits);

/// Same sum for several (j, nu) pairs over one prime list.
struct ExpSumQuery {
    unsigned j;
    std::int64_t nu;
};
std::vector<ExpSumSample> exp_sum_grid(const PseudoPolynomial& f, unsigned q, std::uint64_t N,
                                       const std::vector<ExpSumQuery>& grid, double tol = kDefaultExpSumTol,
                                       unsigned threads = 1, unsigned max_bits = kDefaultMaxBits);

enum class DigitRegime { most_significant, least_significant };
std::string_view to_string(DigitRegime r);

/// Most significant iff N^(theta-1+rho) < q^j; q^j beyond q N^theta is OutOfRange.
DigitRegime classify_regime(unsigned q, unsigned j, double N, double theta, double rho);

// ---------------------------------------------------------------------------

enum class TypeSumKind { type_i, type_i_log, type_ii };
std::string_view to_string(TypeSumKind k);

/// One bilinear block sum_{X<x<=X1} a_x sum_{Y<y<=Y1, P<xy<=P1} w_y e(phase(xy))
/// with w_y = 1, log y, or b_y by kind.
struct TypeSum {
    TypeSumKind kind = TypeSumKind::type_i;
    double X = 0, X1 = 0, Y = 0, Y1 = 0;
    double max_abs_a = 0.0;
    double max_abs_b = 0.0;
    std::uint64_t terms = 0;
    Complex value;
};

struct VaughanResult {
    std::uint64_t P = 0, P1 = 0, U = 0, V = 0;
    std::vector<TypeSum> components;
    Complex reconstructed;
    Complex direct;  // sum_{P<n<=P1} Lambda(n) e(phase(n))
    bool constraints_feasible = false;
    std::string fallback_note;  // set when the (U, V, Z) constraint set is empty
    double log_power_ratio = 0.0;  // components / (log P)^6
};

using PhaseFunction = std::function<double(std::uint64_t)>;

/// Whether some Z satisfies 2 <= U < V <= Z <= P, U^2 <= Z, 128 U Z^2 <= P1, 2^18 P1 <= V^3.
bool vaughan_constraints_feasible(double P, double P1, double U, double V);

/// Expands sum_{P<n<=P1} Lambda(n) e(phase(n)) through Vaughan's identity
/// with cuts (U, V) into Type I, I-log and II blocks, and evaluates both sides.
/// With strict = true an infeasible constraint set throws InfeasibleParameters;
/// otherwise the identity is still checked and the fallback is recorded.
VaughanResult vaughan_decompose(std::uint64_t P, std::uint64_t P1, std::uint64_t U, std::uint64_t V,
                                const PhaseFunction& phase, bool strict = false);

// ---------------------------------------------------------------------------

struct VinogradovExponents {
    double rho = 0.0;
    unsigned k = 0;
    std::uint64_t R = 0;
    std::uint64_t L = 0;
    double eta = 0.0;
};

VinogradovExponents vinogradov_exponents(double rho, unsigned k);

/// Default k for Type II (ceil(2 theta) + 1) and Type I (ceil(3 theta) + 2) estimates.
unsigned default_k_type_ii(double theta);
unsigned default_k_type_i(double theta);

struct IntegralCheck {
    Complex integral;
    double bound_ratio = 0.0;  // |integral| * lambda^(1/k)
    double error_estimate = 0.0;
};

/// Adaptive quadrature of the integral of e(F) over [a, b], with the ratio to
/// lambda^(-1/k). |F^(k)| >= lambda is the caller's promise.
IntegralCheck vdc_integral_check(const std::function<double(double)>& F, unsigned k, double lambda, double a,
                                 double b);

struct HalfOpenInterval {
    double lo;  // exclusive
    double hi;  // inclusive
};

/// Cover of (a, b] by pieces (c, d] with d <= 2c.
std::vector<HalfOpenInterval> split_dyadic(double a, double b);

}  // namespace ndf
