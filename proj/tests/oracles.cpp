#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <mpfr.h>

namespace oracle {

namespace {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(unsigned bits) { mpfr_init2(v, bits); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

// Encloses c * n^(p/r) in [lo, hi].
void term_bounds(const ndf::Term& t, unsigned long n, unsigned bits, mpfr_t lo, mpfr_t hi) {
    const mpz_class& p = t.exponent.value().get_num();
    const mpz_class& r = t.exponent.value().get_den();
    mpz_class np;
    mpz_ui_pow_ui(np.get_mpz_t(), n, p.get_ui());
    Mpfr base(bits), root_lo(bits), root_hi(bits), c_lo(bits), c_hi(bits);
    // n^p may exceed the precision; round it in the needed direction.
    Mpfr np_lo(bits), np_hi(bits);
    mpfr_set_z(np_lo.v, np.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(np_hi.v, np.get_mpz_t(), MPFR_RNDU);
    mpfr_rootn_ui(root_lo.v, np_lo.v, r.get_ui(), MPFR_RNDD);
    mpfr_rootn_ui(root_hi.v, np_hi.v, r.get_ui(), MPFR_RNDU);
    mpfr_set_q(c_lo.v, t.coefficient.value().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(c_hi.v, t.coefficient.value().get_mpq_t(), MPFR_RNDU);
    if (t.coefficient.sign() > 0) {
        mpfr_mul(lo, c_lo.v, root_lo.v, MPFR_RNDD);
        mpfr_mul(hi, c_hi.v, root_hi.v, MPFR_RNDU);
    } else {
        mpfr_mul(lo, c_lo.v, root_hi.v, MPFR_RNDD);
        mpfr_mul(hi, c_hi.v, root_lo.v, MPFR_RNDU);
    }
}

}  // namespace

std::optional<mpz_class> floor_mpfr(const ndf::PseudoPolynomial& f, unsigned long n, unsigned bits) {
    Mpfr lo(bits), hi(bits), tlo(bits), thi(bits);
    mpfr_set_zero(lo.v, 1);
    mpfr_set_zero(hi.v, 1);
    for (const auto& t : f.terms()) {
        term_bounds(t, n, bits, tlo.v, thi.v);
        mpfr_add(lo.v, lo.v, tlo.v, MPFR_RNDD);
        mpfr_add(hi.v, hi.v, thi.v, MPFR_RNDU);
    }
    mpz_class a, b;
    mpfr_get_z(a.get_mpz_t(), lo.v, MPFR_RNDD);
    mpfr_get_z(b.get_mpz_t(), hi.v, MPFR_RNDD);
    if (a != b) {
        // The enclosure may have collapsed onto an exact integer.
        if (mpfr_equal_p(lo.v, hi.v)) return a;
        return std::nullopt;
    }
    return a;
}

double frac_mpfr(const ndf::PseudoPolynomial& f, unsigned long n, long nu, unsigned q, unsigned j, unsigned bits) {
    Mpfr lo(bits), hi(bits), tlo(bits), thi(bits), mid(bits), scale(bits);
    mpfr_set_zero(lo.v, 1);
    mpfr_set_zero(hi.v, 1);
    for (const auto& t : f.terms()) {
        term_bounds(t, n, bits, tlo.v, thi.v);
        mpfr_add(lo.v, lo.v, tlo.v, MPFR_RNDD);
        mpfr_add(hi.v, hi.v, thi.v, MPFR_RNDU);
    }
    mpfr_add(mid.v, lo.v, hi.v, MPFR_RNDN);
    mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
    mpz_class qj;
    mpz_ui_pow_ui(qj.get_mpz_t(), q, j);
    mpfr_set_z(scale.v, qj.get_mpz_t(), MPFR_RNDN);
    mpfr_mul_si(mid.v, mid.v, nu, MPFR_RNDN);
    mpfr_div(mid.v, mid.v, scale.v, MPFR_RNDN);
    mpfr_frac(mid.v, mid.v, MPFR_RNDN);
    double d = mpfr_get_d(mid.v, MPFR_RNDN);
    if (d < 0) d += 1.0;
    if (d >= 1.0) d -= 1.0;
    return d;
}

long double approx(const ndf::PseudoPolynomial& f, long double n) {
    long double s = 0;
    for (const auto& t : f.terms())
        s += static_cast<long double>(t.coefficient.to_double()) * std::pow(n, static_cast<long double>(t.exponent.to_double()));
    return s;
}

bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> primes_trial(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 2; k <= n; ++k)
        if (is_prime_trial(k)) out.push_back(k);
    return out;
}

std::uint64_t brute_count(const std::vector<std::uint8_t>& digits, const std::vector<std::uint8_t>& pattern) {
    std::uint64_t c = 0;
    if (pattern.size() > digits.size()) return 0;
    for (std::size_t i = 0; i + pattern.size() <= digits.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < pattern.size(); ++k) match = match && digits[i + k] == pattern[k];
        c += match;
    }
    return c;
}

std::vector<std::uint8_t> digits_by_division(std::uint64_t m, unsigned q) {
    std::vector<std::uint8_t> d;
    do {
        d.push_back(static_cast<std::uint8_t>(m % q));
        m /= q;
    } while (m);
    std::reverse(d.begin(), d.end());
    return d;
}

double li_via_expint(double x) {
    return boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
}

double mangoldt_trial(std::uint64_t n) {
    if (n < 2) return 0.0;
    std::uint64_t p = 2;
    while (n % p) ++p;
    std::uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

}  // namespace oracle
