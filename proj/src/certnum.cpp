#include "ndf/certnum.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace ndf {

ExactReal::ExactReal(long num, unsigned long den) : value_(num, den) {
    if (den == 0) throw MalformedNumber("zero denominator");
    value_.canonicalize();
}

ExactReal::ExactReal(mpq_class value) : value_(std::move(value)) {
    if (value_.get_den() == 0) throw MalformedNumber("zero denominator");
    value_.canonicalize();
}

std::string ExactReal::str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

namespace {

// Decimal exponents beyond this would produce absurd integer sizes.
constexpr long kMaxDecimalExponent = 4000;

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

mpz_class parse_integer(const std::string& digits) {
    mpz_class r;
    if (r.set_str(digits, 10) != 0) throw MalformedNumber("bad integer: " + digits);
    return r;
}

}  // namespace

ExactReal parse_exact(std::string_view text) {
    static const std::regex decimal(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
    static const std::regex rational(R"(^([+-]?\d+)/(\d+)$)");
    const std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, rational)) {
        mpz_class den = parse_integer(m[2]);
        if (den == 0) throw MalformedNumber("zero denominator in '" + s + "'");
        std::string num = m[1];
        if (!num.empty() && num[0] == '+') num.erase(0, 1);
        return ExactReal(mpq_class(parse_integer(num), den));
    }
    if (!std::regex_match(s, m, decimal)) throw MalformedNumber("not a number: '" + s + "'");
    const std::string int_part = m[2];
    const std::string frac_part = m[3];
    if (int_part.empty() && frac_part.empty()) throw MalformedNumber("not a number: '" + s + "'");

    long exp10 = 0;
    if (m[4].matched) {
        const std::string e = m[4];
        if (e.size() > 6) throw MalformedNumber("exponent too large: '" + s + "'");
        exp10 = std::stol(e);
        if (std::labs(exp10) > kMaxDecimalExponent)
            throw MalformedNumber("exponent too large: '" + s + "'");
    }
    mpz_class mantissa = parse_integer((int_part + frac_part).empty() ? "0" : int_part + frac_part);
    if (m[1] == "-") mantissa = -mantissa;
    exp10 -= static_cast<long>(frac_part.size());

    mpq_class v;
    if (exp10 >= 0) {
        v = mpq_class(mantissa * pow10(static_cast<unsigned long>(exp10)));
    } else {
        v = mpq_class(mantissa, pow10(static_cast<unsigned long>(-exp10)));
    }
    return ExactReal(v);
}

// ---------------------------------------------------------------------------

PseudoPolynomial::PseudoPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw BadParameters("pseudo-polynomial needs at least one term");
    if (terms_.front().coefficient.sign() <= 0)
        throw BadParameters("leading coefficient must be positive");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (t.exponent.sign() <= 0) throw BadParameters("exponents must be positive");
        if (t.coefficient.sign() == 0) throw BadParameters("zero coefficient");
        if (i > 0 && !(t.exponent < terms_[i - 1].exponent))
            throw BadParameters("exponents must be strictly decreasing");
    }
    compiled_.reserve(terms_.size());
    for (const auto& t : terms_) {
        const mpz_class& p = t.exponent.value().get_num();
        const mpz_class& r = t.exponent.value().get_den();
        if (!p.fits_ulong_p() || !r.fits_ulong_p() || r > 100000)
            throw BadParameters("exponent " + t.exponent.str() + " is too large to evaluate");
        Compiled c;
        c.exp_num = p.get_ui();
        c.root = r.get_ui();
        c.negative = t.coefficient.sign() < 0;
        mpz_class a = abs(t.coefficient.value().get_num());
        mpz_pow_ui(c.abs_num_pow.get_mpz_t(), a.get_mpz_t(), c.root);
        mpz_pow_ui(c.den_pow.get_mpz_t(), t.coefficient.value().get_den().get_mpz_t(), c.root);
        compiled_.push_back(std::move(c));
    }
}

PseudoPolynomial PseudoPolynomial::monomial(const ExactReal& alpha, const ExactReal& theta) {
    return PseudoPolynomial({Term{alpha, theta}});
}

PseudoPolynomial PseudoPolynomial::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw MalformedNumber("empty function");

    // Split at '+'/'-' separators that are not part of a decimal exponent.
    std::vector<std::string> pieces;
    std::size_t start = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const char prev = s[i - 1];
        if ((s[i] == '+' || s[i] == '-') && prev != 'e' && prev != 'E' && prev != '^' &&
            prev != '+' && prev != '-') {
            pieces.push_back(s.substr(start, i - start));
            start = i;
        }
    }
    pieces.push_back(s.substr(start));

    std::vector<Term> terms;
    for (auto piece : pieces) {
        bool negate = false;
        if (piece.size() >= 2 && (piece[0] == '+' || piece[0] == '-') &&
            (piece[1] == '+' || piece[1] == '-')) {
            negate = piece[0] == '-';
            piece.erase(0, 1);
        } else if (!piece.empty() && piece[0] == '+') {
            piece.erase(0, 1);
        }
        const auto caret = piece.find('^');
        if (caret == std::string::npos) throw MalformedNumber("term '" + piece + "' lacks '^'");
        ExactReal coeff = parse_exact(piece.substr(0, caret));
        ExactReal expo = parse_exact(piece.substr(caret + 1));
        if (negate) coeff = ExactReal(mpq_class(-coeff.value()));
        terms.push_back({coeff, expo});
    }
    return PseudoPolynomial(std::move(terms));
}

bool PseudoPolynomial::all_integer_exponents() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.exponent.is_integer(); });
}

double PseudoPolynomial::approx(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient.to_double() * std::pow(x, t.exponent.to_double());
    return s;
}

std::string PseudoPolynomial::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0) os << '+';
        os << terms_[i].coefficient.str() << '^' << terms_[i].exponent.str();
    }
    return os.str();
}

// ---------------------------------------------------------------------------

ScaledEnclosure enclose_scaled(const PseudoPolynomial& f, const mpz_class& n, unsigned bits) {
    if (n < 0) throw BadParameters("negative argument");
    ScaledEnclosure out;
    out.bits = bits;
    out.exact = true;
    mpz_class npow, radicand, rem, root;
    for (const auto& c : f.compiled()) {
        mpz_pow_ui(npow.get_mpz_t(), n.get_mpz_t(), c.exp_num);
        radicand = c.abs_num_pow * npow;
        mpz_mul_2exp(radicand.get_mpz_t(), radicand.get_mpz_t(),
                     static_cast<mp_bitcnt_t>(bits) * c.root);
        mpz_fdiv_qr(radicand.get_mpz_t(), rem.get_mpz_t(), radicand.get_mpz_t(),
                    c.den_pow.get_mpz_t());
        const bool exact_root = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), c.root) != 0;
        const bool exact = exact_root && rem == 0;
        if (c.negative) {
            out.lower -= exact ? root : mpz_class(root + 1);
            out.upper -= root;
        } else {
            out.lower += root;
            out.upper += exact ? root : mpz_class(root + 1);
        }
        out.exact = out.exact && exact;
    }
    return out;
}

namespace {

double scaled_to_double(const mpz_class& v, unsigned bits) {
    long exp = 0;
    const double m = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::ldexp(m, static_cast<int>(exp - static_cast<long>(bits)));
}

// Distance from x to the nearest multiple of m, for m > 0.
mpz_class distance_to_multiple(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    mpz_class other = m - r;
    return r < other ? r : other;
}

}  // namespace

FloorResult eval_floor_power(const PseudoPolynomial& f, const mpz_class& n, unsigned max_bits) {
    max_bits = std::max(max_bits, kInitialBits);
    PrecisionCertificate cert;
    for (unsigned bits = kInitialBits;; bits *= 2) {
        const ScaledEnclosure e = enclose_scaled(f, n, bits);
        cert.working_bits = bits;
        cert.interval_width = e.exact ? 0.0 : scaled_to_double(mpz_class(e.upper - e.lower), bits);
        if (e.upper < 0) throw NegativeValue("f(" + n.get_str() + ") < 0");

        bool ok = e.exact;
        if (!ok) {
            // Accept when the width is below the distance from the midpoint to
            // the nearest integer; all in units of 2^-(bits+1).
            mpz_class width2 = mpz_class(e.upper - e.lower) * 2;
            mpz_class unit2;
            mpz_ui_pow_ui(unit2.get_mpz_t(), 2, bits + 1);
            ok = width2 < distance_to_multiple(mpz_class(e.lower + e.upper), unit2);
        }
        if (ok) {
            if (e.lower < 0) throw NegativeValue("f(" + n.get_str() + ") < 0");
            cert.certified = true;
            FloorResult r;
            mpz_fdiv_q_2exp(r.value.get_mpz_t(), e.lower.get_mpz_t(), bits);
            r.cert = cert;
            return r;
        }
        if (bits * 2 > max_bits) {
            throw AmbiguousFloor("floor of f(" + n.get_str() + ") not certified within " +
                                     std::to_string(max_bits) + " bits",
                                 cert);
        }
        ++cert.escalations;
    }
}

FracResult eval_frac_scaled(const PseudoPolynomial& f, const mpz_class& n, long nu, unsigned q,
                            unsigned j, double tol, unsigned max_bits) {
    if (q < 2) throw BadParameters("base must be at least 2");
    if (nu == 0) throw BadParameters("nu must be nonzero");
    if (!(tol > 0.0) || !(tol < 0.25)) throw BadParameters("tol must lie in (0, 1/4)");
    max_bits = std::max(max_bits, kInitialBits);

    mpz_class qj;
    mpz_ui_pow_ui(qj.get_mpz_t(), q, j);

    PrecisionCertificate cert;
    for (unsigned bits = kInitialBits;; bits *= 2) {
        const ScaledEnclosure e = enclose_scaled(f, n, bits);
        mpz_class lo = e.lower * nu;
        mpz_class hi = e.upper * nu;
        if (nu < 0) std::swap(lo, hi);
        mpz_class den = qj;
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);

        // Width in value units: (hi - lo) / den.
        mpz_class width_num = hi - lo;
        long wexp = 0;
        const double wm = mpz_get_d_2exp(&wexp, width_num.get_mpz_t());
        long dexp = 0;
        const double dm = mpz_get_d_2exp(&dexp, den.get_mpz_t());
        const double width = width_num == 0 ? 0.0 : std::ldexp(wm / dm, static_cast<int>(wexp - dexp));

        mpz_class flo, fhi;
        mpz_fdiv_q(flo.get_mpz_t(), lo.get_mpz_t(), den.get_mpz_t());
        mpz_fdiv_q(fhi.get_mpz_t(), hi.get_mpz_t(), den.get_mpz_t());
        // A closed enclosure touching a multiple of den from inside counts as a straddle
        // unless the value is exact.
        const bool straddle = !e.exact && (flo != fhi || mpz_divisible_p(lo.get_mpz_t(), den.get_mpz_t()));

        cert.working_bits = bits;
        cert.interval_width = width;
        cert.straddles_wrap = straddle;
        if (width <= tol && !straddle) {
            cert.certified = true;
            // Midpoint fraction: ((lo + hi) mod 2 den) / (2 den), to 53 bits.
            mpz_class twice_den = den * 2;
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), mpz_class(lo + hi).get_mpz_t(), twice_den.get_mpz_t());
            mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 53);
            mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), twice_den.get_mpz_t());
            FracResult out;
            out.value = std::ldexp(r.get_d(), -53);
            out.cert = cert;
            return out;
        }
        if (bits * 2 > max_bits) {
            throw AmbiguousFrac("fractional part of " + std::to_string(nu) + "*q^-" +
                                    std::to_string(j) + "*f(" + n.get_str() +
                                    ") not certified within " + std::to_string(max_bits) + " bits",
                                cert);
        }
        ++cert.escalations;
    }
}

}  // namespace ndf
