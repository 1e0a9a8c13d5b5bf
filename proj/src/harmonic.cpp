#include "ndf/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ndf/parallel.hpp"
#include "ndf/primes.hpp"

namespace ndf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double t) { return t - std::floor(t); }

// CDF of the unit-mass triangular density on [-h, h].
double triangle_cdf(double x, double h) {
    if (x <= -h) return 0.0;
    if (x >= h) return 1.0;
    if (x <= 0.0) return (x + h) * (x + h) / (2.0 * h * h);
    return 1.0 - (h - x) * (h - x) / (2.0 * h * h);
}

}  // namespace

Complex unit_phase(double x) {
    const double r = frac(x);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

// ---------------------------------------------------------------------------

SmoothedIndicator::SmoothedIndicator(double alpha, double beta, double delta, std::uint64_t cutoff)
    : alpha_(alpha), beta_(beta), delta_(delta), cutoff_(cutoff) {
    const double width = beta - alpha;
    if (!(delta > 0.0 && delta < 0.5))
        throw BadWindow("smoothing width must satisfy 0 < delta < 1/2");
    if (!(width >= delta && width <= 1.0 - delta))
        throw BadWindow("window must satisfy delta <= beta - alpha <= 1 - delta");
}

SmoothedIndicator build_smoothed_indicator(double alpha, double beta, double delta, std::uint64_t cutoff) {
    return SmoothedIndicator(alpha, beta, delta, cutoff);
}

double SmoothedIndicator::operator()(double t) const {
    const double h = 0.5 * delta_;
    // u = t - alpha reduced into [-h, 1 - h); the window plus ramps fits in one period.
    double u = frac(t - alpha_ + h) - h;
    const double v = triangle_cdf(u, h) - triangle_cdf(u - (beta_ - alpha_), h);
    return std::clamp(v, 0.0, 1.0);
}

Complex SmoothedIndicator::coefficient(std::int64_t nu) const {
    if (nu == 0) return {mean(), 0.0};
    const double n = static_cast<double>(nu);
    const Complex numer = unit_phase(-n * alpha_) - unit_phase(-n * beta_);
    const Complex denom(0.0, kTwoPi * n);
    const double x = kPi * n * delta_ / 2.0;
    const double sinc = std::sin(x) / x;
    return numer / denom * (sinc * sinc);
}

double SmoothedIndicator::coefficient_bound(std::int64_t nu) const {
    if (nu == 0) return mean();
    const double n = std::fabs(static_cast<double>(nu));
    return std::min({mean(), 1.0 / n, 1.0 / (n * n * delta_)});
}

double SmoothedIndicator::tail_bound(std::uint64_t K) const {
    // Explicit sum until 1/(nu^2 delta) is the active term, then the integral tail.
    const double w = mean();
    const std::uint64_t switch_at = static_cast<std::uint64_t>(
        std::ceil(std::max(1.0 / delta_, 1.0 / std::sqrt(w * delta_))));
    const std::uint64_t M = std::max<std::uint64_t>(K, switch_at);
    double s = 0.0;
    for (std::uint64_t nu = K + 1; nu <= M; ++nu) s += coefficient_bound(static_cast<std::int64_t>(nu));
    s += 1.0 / (delta_ * static_cast<double>(M));  // sum_{nu > M} 1/nu^2 <= 1/M
    return 2.0 * s;
}

SmoothedIndicator::FourierValue SmoothedIndicator::fourier(double t, std::uint64_t K) const {
    // psi_K(t) = mean + sum_{nu=1}^K (sin 2pi nu (t-alpha) - sin 2pi nu (t-beta)) / (pi nu) * sinc^2.
    const Complex ra = unit_phase(t - alpha_);
    const Complex rb = unit_phase(t - beta_);
    const double half = kPi * delta_ / 2.0;
    const Complex rs(std::cos(half), std::sin(half));
    Complex za = ra, zb = rb, zs = rs;
    double acc = 0.0;
    for (std::uint64_t nu = 1; nu <= K; ++nu) {
        const double n = static_cast<double>(nu);
        const double sinc = zs.imag() / (half * n);
        acc += (za.imag() - zb.imag()) / (kPi * n) * sinc * sinc;
        za *= ra;
        zb *= rb;
        zs *= rs;
        if (nu % 64 == 0) {
            za /= std::abs(za);
            zb /= std::abs(zb);
            zs /= std::abs(zs);
        }
    }
    return {mean() + acc, tail_bound(K)};
}

double block_indicator(const BlockPattern& pattern, double t) {
    const double s = pattern.offset();
    const double width = std::pow(static_cast<double>(pattern.base), -static_cast<double>(pattern.length()));
    const double r = frac(t);
    return (s <= r && r < s + width) ? 1.0 : 0.0;
}

SmoothedIndicator indicator_for_block(const BlockPattern& pattern, double H, BoundSide side, std::uint64_t cutoff) {
    const double width = std::pow(static_cast<double>(pattern.base), -static_cast<double>(pattern.length()));
    if (!(H > 4.0 / width)) throw BadWindow("smoothing parameter H must exceed 4 q^ell");
    const double s = pattern.offset();
    const double e = 1.0 / (2.0 * H);
    if (side == BoundSide::minus) return SmoothedIndicator(s + e, s + width - e, 1.0 / H, cutoff);
    return SmoothedIndicator(s - e, s + width + e, 1.0 / H, cutoff);
}

double default_smoothing_H(double L) { return std::pow(L, 1.0 / 12.0); }

// ---------------------------------------------------------------------------

std::vector<ExpSumSample> exp_sum_grid(const PseudoPolynomial& f, unsigned q, std::uint64_t N,
                                       const std::vector<ExpSumQuery>& grid, double tol, unsigned threads,
                                       unsigned max_bits) {
    if (N < 2) throw BadParameters("N must be at least 2");
    if (!(tol > 0.0)) throw BadParameters("tol must be positive");
    for (const auto& g : grid)
        if (g.nu == 0) throw BadParameters("nu must be nonzero");
    const auto primes = primes_between(2, N, threads);
    const double term_tol = std::min(tol / static_cast<double>(primes.size()), 0.125);

    constexpr std::size_t kSlice = 1024;
    const std::size_t slices = (primes.size() + kSlice - 1) / kSlice;
    const std::size_t G = grid.size();
    std::vector<Complex> partial(slices * G);
    std::vector<std::uint64_t> esc(slices * G, 0);
    parallel_tasks(slices, threads, [&](std::size_t s) {
        const std::size_t end = std::min(primes.size(), (s + 1) * kSlice);
        for (std::size_t i = s * kSlice; i < end; ++i) {
            const mpz_class p(static_cast<unsigned long>(primes[i]));
            for (std::size_t g = 0; g < G; ++g) {
                const auto r = eval_frac_scaled(f, p, grid[g].nu, q, grid[g].j, term_tol, max_bits);
                partial[s * G + g] += unit_phase(r.value);
                esc[s * G + g] += r.cert.escalations;
            }
        }
    });

    std::vector<ExpSumSample> out(G);
    for (std::size_t g = 0; g < G; ++g) {
        ExpSumSample& e = out[g];
        e.N = N;
        e.j = grid[g].j;
        e.nu = grid[g].nu;
        e.prime_count = primes.size();
        for (std::size_t s = 0; s < slices; ++s) {
            e.value += partial[s * G + g];
            e.escalations += esc[s * G + g];
        }
        const double count = static_cast<double>(primes.size());
        // |e(x) - e(x')| <= 2 pi |x - x'|, plus summation rounding.
        e.phase_error = kTwoPi * term_tol * count + 8.0 * count * 1e-16;
        e.normalized_magnitude = std::abs(e.value) / count;
    }
    return out;
}

ExpSumSample exp_sum_primes(const PseudoPolynomial& f, unsigned q, std::uint64_t N, unsigned j, std::int64_t nu,
                            double tol, unsigned threads, unsigned max_bits) {
    return exp_sum_grid(f, q, N, {{j, nu}}, tol, threads, max_bits).front();
}

std::string_view to_string(DigitRegime r) {
    return r == DigitRegime::most_significant ? "most_significant" : "least_significant";
}

DigitRegime classify_regime(unsigned q, unsigned j, double N, double theta, double rho) {
    if (q < 2 || !(N > 1.0)) throw BadParameters("need q >= 2 and N > 1");
    const double lq = j * std::log(static_cast<double>(q));
    const double lN = std::log(N);
    const double eps = 1e-12 * std::max(1.0, std::fabs(theta * lN));
    if (lq > theta * lN + std::log(static_cast<double>(q)) + eps)
        throw OutOfRange("q^j exceeds q N^theta");
    const double threshold = (theta - 1.0 + rho) * lN;
    return lq > threshold + eps ? DigitRegime::most_significant : DigitRegime::least_significant;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TypeSumKind k) {
    switch (k) {
        case TypeSumKind::type_i: return "I";
        case TypeSumKind::type_i_log: return "I-log";
        case TypeSumKind::type_ii: return "II";
    }
    return "?";
}

bool vaughan_constraints_feasible(double P, double P1, double U, double V) {
    if (!(2.0 <= U && U < V && V <= P)) return false;
    if (!(std::pow(2.0, 18) * P1 <= V * V * V)) return false;
    const double z_lo = std::max(V, U * U);
    const double z_hi = std::min(P, std::sqrt(P1 / (128.0 * U)));
    return z_lo <= z_hi;
}

std::vector<HalfOpenInterval> split_dyadic(double a, double b) {
    if (!(a >= 0.5 && a < b)) throw BadParameters("split_dyadic needs 1/2 <= a < b");
    std::vector<HalfOpenInterval> out;
    for (double c = a; c < b;) {
        const double d = std::min(2.0 * c, b);
        out.push_back({c, d});
        c = d;
    }
    return out;
}

namespace {

// Integers in (lo, hi].
std::uint64_t first_above(double lo) { return static_cast<std::uint64_t>(std::floor(lo)) + 1; }
std::uint64_t last_at_most(double hi) { return static_cast<std::uint64_t>(std::floor(hi)); }

}  // namespace

VaughanResult vaughan_decompose(std::uint64_t P, std::uint64_t P1, std::uint64_t U, std::uint64_t V,
                                const PhaseFunction& phase, bool strict) {
    if (P < 2 || P1 <= P || P1 > 2 * P) throw BadParameters("need P >= 2 and P < P1 <= 2P");
    if (U < 1 || V < 1 || U > P) throw BadParameters("need 1 <= U <= P and V >= 1");

    VaughanResult res;
    res.P = P;
    res.P1 = P1;
    res.U = U;
    res.V = V;
    res.constraints_feasible = vaughan_constraints_feasible(double(P), double(P1), double(U), double(V));
    if (!res.constraints_feasible) {
        if (strict) throw InfeasibleParameters("no Z satisfies the Vaughan cut constraints at this scale");
        res.fallback_note = "cut constraints infeasible at P=" + std::to_string(P) +
                            "; identity verified with unconstrained (U, V)";
    }

    std::vector<double> lambda(P1 + 1, 0.0);
    for (std::uint64_t k = 1; k <= P1; ++k) lambda[k] = mangoldt(k);
    std::vector<int> mu(V + 1, 0);
    for (std::uint64_t d = 1; d <= V; ++d) mu[d] = moebius(d);

    std::vector<Complex> ephase(P1 + 1);
    for (std::uint64_t n = P + 1; n <= P1; ++n) ephase[n] = unit_phase(phase(n));

    for (std::uint64_t n = P + 1; n <= P1; ++n) res.direct += lambda[n] * ephase[n];

    const double dP = static_cast<double>(P), dP1 = static_cast<double>(P1);

    // Generic bilinear block: x in (X, X1], y in (Y, Y1], P < xy <= P1.
    auto emit = [&](TypeSumKind kind, const HalfOpenInterval& xb, const HalfOpenInterval& yb,
                    auto&& a_of, auto&& w_of) {
        TypeSum ts;
        ts.kind = kind;
        ts.X = xb.lo;
        ts.X1 = xb.hi;
        ts.Y = yb.lo;
        ts.Y1 = yb.hi;
        for (std::uint64_t x = first_above(xb.lo); x <= last_at_most(xb.hi); ++x) {
            const double ax = a_of(x);
            if (ax == 0.0) continue;
            ts.max_abs_a = std::max(ts.max_abs_a, std::fabs(ax));
            const std::uint64_t y0 = std::max(first_above(yb.lo), P / x + 1);
            const std::uint64_t y1 = std::min(last_at_most(yb.hi), P1 / x);
            Complex inner;
            for (std::uint64_t y = y0; y <= y1; ++y) {
                const double wy = w_of(y);
                if (wy == 0.0) continue;
                ts.max_abs_b = std::max(ts.max_abs_b, std::fabs(wy));
                inner += wy * ephase[x * y];
                ++ts.terms;
            }
            ts.value += ax * inner;
        }
        res.components.push_back(ts);
    };
    auto blocks = [&](TypeSumKind kind, double xlo, double xhi, double ylo_floor, auto&& a_of, auto&& w_of) {
        if (!(xhi > xlo)) return;
        for (const auto& xb : split_dyadic(std::max(0.5, xlo), xhi)) {
            const double ylo = std::max(ylo_floor, dP / xb.hi);
            const double yhi = dP1 / xb.lo;
            if (!(yhi > ylo)) continue;
            for (const auto& yb : split_dyadic(std::max(0.5, ylo), yhi)) emit(kind, xb, yb, a_of, w_of);
        }
    };

    // sum_{d<=V} mu(d) sum_b log b e(phase(db))
    blocks(TypeSumKind::type_i_log, 0.5, double(std::min(V, P1)), 0.5,
           [&](std::uint64_t d) { return double(mu[d]); },
           [](std::uint64_t b) { return std::log(double(b)); });

    // -sum_{x<=UV} (sum_{cd=x, c<=U, d<=V} Lambda(c) mu(d)) sum_b e(phase(xb))
    const std::uint64_t xmax = std::min<std::uint64_t>(U * V, P1);
    std::vector<double> a_typei(xmax + 1, 0.0);
    for (std::uint64_t c = 1; c <= U; ++c) {
        if (lambda[c] == 0.0) continue;
        for (std::uint64_t d = 1; d <= V && c * d <= xmax; ++d) a_typei[c * d] -= lambda[c] * mu[d];
    }
    blocks(TypeSumKind::type_i, 0.5, double(xmax), 0.5, [&](std::uint64_t x) { return a_typei[x]; },
           [](std::uint64_t) { return 1.0; });

    // -sum_{m>V, k>U} (sum_{d|m, d<=V} mu(d)) Lambda(k) e(phase(mk))
    const std::uint64_t mmax = P1 / (U + 1);
    if (mmax > V) {
        std::vector<double> a_typeii(mmax + 1, 0.0);
        for (std::uint64_t d = 1; d <= V; ++d) {
            if (mu[d] == 0) continue;
            for (std::uint64_t m = d; m <= mmax; m += d) a_typeii[m] -= mu[d];
        }
        blocks(TypeSumKind::type_ii, double(V), double(mmax), double(U),
               [&](std::uint64_t m) { return a_typeii[m]; }, [&](std::uint64_t k) { return lambda[k]; });
    }

    for (const auto& c : res.components) res.reconstructed += c.value;
    const double lp = std::log(dP);
    res.log_power_ratio = static_cast<double>(res.components.size()) / std::pow(lp, 6);
    return res;
}

// ---------------------------------------------------------------------------

VinogradovExponents vinogradov_exponents(double rho, unsigned k) {
    if (k < 2) throw BadParameters("k must be at least 2");
    if (!(rho > 0.0 && rho <= static_cast<double>(k))) throw BadParameters("rho must lie in (0, k]");
    VinogradovExponents e;
    e.rho = rho;
    e.k = k;
    const double kd = static_cast<double>(k);
    const double ratio = std::log(kd * (kd + 1.0) * (kd + 1.0) / rho) / (-std::log(1.0 - 1.0 / kd));
    e.R = 1 + static_cast<std::uint64_t>(std::floor(ratio));
    e.L = 1 + static_cast<std::uint64_t>(std::floor(kd * (kd + 1.0) / 4.0 + kd * static_cast<double>(e.R)));
    e.eta = rho / (16.0 * (kd + 1.0) * static_cast<double>(e.L));
    return e;
}

unsigned default_k_type_ii(double theta) { return static_cast<unsigned>(std::ceil(2.0 * theta)) + 1; }
unsigned default_k_type_i(double theta) { return static_cast<unsigned>(std::ceil(3.0 * theta)) + 2; }

IntegralCheck vdc_integral_check(const std::function<double(double)>& F, unsigned k, double lambda, double a,
                                 double b) {
    if (k < 1 || !(lambda > 0.0) || !(b > a)) throw BadParameters("need k >= 1, lambda > 0, a < b");
    using boost::math::quadrature::gauss_kronrod;
    // Size the pieces from the sampled phase variation so each holds about a
    // quarter turn; adaptive refinement then rarely has to recurse. The
    // per-piece tolerance sits above the rounding noise of 2 pi F(x) at large F.
    constexpr int kSamples = 4096;
    double variation = 0.0;
    double prev = F(a);
    for (int i = 1; i <= kSamples; ++i) {
        const double cur = F(a + (b - a) * i / kSamples);
        variation += std::fabs(cur - prev);
        prev = cur;
    }
    if (!std::isfinite(variation)) throw QuadratureFailure("phase is not finite on [a, b]");
    const long pieces = std::clamp(static_cast<long>(std::ceil(4.0 * variation)), 64L, 1L << 22);
    double re = 0.0, im = 0.0, err_total = 0.0;
    const double step = (b - a) / static_cast<double>(pieces);
    for (long i = 0; i < pieces; ++i) {
        const double lo = a + static_cast<double>(i) * step;
        const double hi = i + 1 == pieces ? b : lo + step;
        double err_re = 0.0, err_im = 0.0;
        re += gauss_kronrod<double, 61>::integrate([&](double x) { return std::cos(kTwoPi * F(x)); }, lo, hi, 6,
                                                   1e-8, &err_re);
        im += gauss_kronrod<double, 61>::integrate([&](double x) { return std::sin(kTwoPi * F(x)); }, lo, hi, 6,
                                                   1e-8, &err_im);
        err_total += std::fabs(err_re) + std::fabs(err_im);
    }
    if (!std::isfinite(re) || !std::isfinite(im) || err_total > 1e-7 * std::max(1.0, b - a))
        throw QuadratureFailure("oscillatory integral did not converge");
    IntegralCheck out;
    out.integral = {re, im};
    out.error_estimate = err_total;
    out.bound_ratio = std::abs(out.integral) * std::pow(lambda, 1.0 / static_cast<double>(k));
    return out;
}

}  // namespace ndf
