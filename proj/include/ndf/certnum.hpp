#pragma once

// Certified evaluation of pseudo-polynomials f(x) = sum c_i x^{e_i} with
// exact rational coefficients and exponents.
//
// Every term c * n^{p/r} is enclosed at w fractional bits by an integer
// r-th root: floor(2^w * |c| * n^{p/r}) = floor((|a|^r n^p 2^{wr} / b^r)^{1/r})
// for c = a/b. The root is exact when the radicand is a perfect r-th power,
// which makes integral values (4^{3/2} = 8) certifiable at the first step.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ndf/errors.hpp"

namespace ndf {

/// Exact rational number, always in lowest terms with positive denominator.
class ExactReal {
public:
    ExactReal() = default;
    ExactReal(long num, unsigned long den = 1);
    explicit ExactReal(mpq_class value);

    const mpq_class& value() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    double to_double() const { return value_.get_d(); }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    // Canonical "num/den" (or "num" when den == 1).
    std::string str() const;

    friend bool operator==(const ExactReal& a, const ExactReal& b) { return a.value_ == b.value_; }
    friend bool operator<(const ExactReal& a, const ExactReal& b) { return a.value_ < b.value_; }

private:
    mpq_class value_{0};
};

/// Parses a decimal literal ("1.5", "-2e-3", ".75") or a rational "p/q".
/// Throws MalformedNumber on anything else.
ExactReal parse_exact(std::string_view text);

struct Term {
    ExactReal coefficient;
    ExactReal exponent;
};

/// f(x) = sum of coefficient * x^exponent, exponents strictly decreasing and
/// positive, leading coefficient positive. Immutable once built; the
/// constructor precomputes the integer powers the evaluator needs.
class PseudoPolynomial {
public:
    explicit PseudoPolynomial(std::vector<Term> terms);

    /// alpha * x^theta.
    static PseudoPolynomial monomial(const ExactReal& alpha, const ExactReal& theta);

    /// Parses "<coeff>^<exp>[+<coeff>^<exp>...]"; a '-' between terms negates
    /// the following coefficient. Example: "1^3/2+-2^1/2" or "2^2.5-1^1".
    static PseudoPolynomial parse(std::string_view text);

    const std::vector<Term>& terms() const { return terms_; }
    const ExactReal& leading_exponent() const { return terms_.front().exponent; }
    const ExactReal& leading_coefficient() const { return terms_.front().coefficient; }
    bool all_integer_exponents() const;

    /// Approximate f(x) in double precision, for diagnostics and plotting.
    double approx(double x) const;

    std::string str() const;

    // Precomputed per-term data used by the certified evaluator.
    struct Compiled {
        mpz_class abs_num_pow;   // |a|^r
        mpz_class den_pow;       // b^r
        unsigned long exp_num;   // p
        unsigned long root;      // r
        bool negative;
    };
    const std::vector<Compiled>& compiled() const { return compiled_; }

private:
    std::vector<Term> terms_;
    std::vector<Compiled> compiled_;
};

/// Outcome of one certified evaluation. working_bits counts fractional bits
/// of the final enclosure; interval_width is its width in value units.
struct PrecisionCertificate {
    unsigned working_bits = 0;
    double interval_width = 0.0;
    bool certified = false;
    unsigned escalations = 0;
    bool straddles_wrap = false;  // only set by fractional-part queries
};

class AmbiguousFloor : public Error {
public:
    AmbiguousFloor(const std::string& what, PrecisionCertificate cert)
        : Error(what), cert_(cert) {}
    const PrecisionCertificate& certificate() const { return cert_; }

private:
    PrecisionCertificate cert_;
};

class AmbiguousFrac : public Error {
public:
    AmbiguousFrac(const std::string& what, PrecisionCertificate cert)
        : Error(what), cert_(cert) {}
    const PrecisionCertificate& certificate() const { return cert_; }

private:
    PrecisionCertificate cert_;
};

inline constexpr unsigned kInitialBits = 64;
inline constexpr unsigned kDefaultMaxBits = 16384;

/// Integer enclosure of 2^bits * f(n): the true value lies in [lower, upper],
/// equal to lower when exact, strictly inside (lower, upper) otherwise.
struct ScaledEnclosure {
    mpz_class lower;
    mpz_class upper;
    bool exact = false;
    unsigned bits = 0;
};

ScaledEnclosure enclose_scaled(const PseudoPolynomial& f, const mpz_class& n, unsigned bits);

struct FloorResult {
    mpz_class value;
    PrecisionCertificate cert;
};

/// floor(f(n)), certified. Throws AmbiguousFloor or NegativeValue.
FloorResult eval_floor_power(const PseudoPolynomial& f, const mpz_class& n,
                             unsigned max_bits = kDefaultMaxBits);

struct FracResult {
    double value = 0.0;  // in [0, 1)
    PrecisionCertificate cert;
};

/// {nu * q^-j * f(n)} within tol. Throws AmbiguousFrac.
FracResult eval_frac_scaled(const PseudoPolynomial& f, const mpz_class& n, long nu, unsigned q,
                            unsigned j, double tol, unsigned max_bits = kDefaultMaxBits);

}  // namespace ndf
