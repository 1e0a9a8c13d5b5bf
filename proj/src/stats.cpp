#include "ndf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ndf/parallel.hpp"
#include "ndf/primes.hpp"

namespace ndf {

QAdditiveFunction::QAdditiveFunction(unsigned q, std::vector<double> w) : base(q), weights(std::move(w)) {
    if (q < 2 || q > kMaxBase) throw BadParameters("base must lie in [2, 256]");
    if (weights.size() != q) throw BadParameters("need exactly q digit weights");
    if (weights[0] != 0.0) throw BadParameters("weight of digit 0 must be 0");
}

QAdditiveFunction QAdditiveFunction::digit_sum(unsigned q) {
    std::vector<double> w(q);
    for (unsigned d = 0; d < q; ++d) w[d] = d;
    return QAdditiveFunction(q, std::move(w));
}

double QAdditiveFunction::operator()(const mpz_class& n) const {
    double s = 0.0;
    for (auto d : digits_of(n, base).digits) s += weights[d];
    return s;
}

double QAdditiveFunction::operator()(std::uint64_t n) const {
    double s = 0.0;
    for (; n > 0; n /= base) s += weights[n % base];
    return s;
}

std::uint64_t digit_sum(std::uint64_t n, unsigned q) {
    if (q < 2) throw BadParameters("base must be at least 2");
    std::uint64_t s = 0;
    for (; n > 0; n /= q) s += n % q;
    return s;
}

std::uint64_t digit_sum(const mpz_class& n, unsigned q) {
    std::uint64_t s = 0;
    for (auto d : digits_of(n, q).digits) s += d;
    return s;
}

double mean_digit_value(const QAdditiveFunction& g) {
    double s = 0.0;
    for (double w : g.weights) s += w;
    return s / g.base;
}

DiscrepancyReport discrepancy(const BlockCounter& counter) {
    const std::uint64_t L = counter.digits_seen();
    if (L < counter.ell()) throw BadParameters("need at least ell digits");
    DiscrepancyReport r;
    r.L = L;
    r.ell = counter.ell();
    const double expected = std::pow(static_cast<double>(counter.base()), -static_cast<double>(counter.ell()));
    r.per_pattern_freqs.resize(counter.table_size());
    std::uint64_t best = 0;
    double best_dev = -1.0;
    for (std::uint64_t i = 0; i < counter.table_size(); ++i) {
        const double freq = static_cast<double>(counter.count(i)) / static_cast<double>(L);
        r.per_pattern_freqs[i] = freq;
        const double dev = std::fabs(freq - expected);
        if (dev > best_dev) {
            best_dev = dev;
            best = i;
        }
    }
    r.sup_deviation = best_dev;
    r.argmax_pattern = BlockPattern::from_index(best, counter.base(), counter.ell());
    return r;
}

DiscrepancyReport discrepancy(std::span<const std::uint8_t> digits, unsigned q, unsigned ell) {
    BlockCounter c(q, ell);
    c.push(digits);
    return discrepancy(c);
}

std::vector<SummatoryResult> summatory_over_primes(const QAdditiveFunction& g, const PseudoPolynomial& f,
                                                   std::span<const std::uint64_t> Ns,
                                                   const StreamOptions& opts) {
    if (Ns.empty()) return {};
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 2) throw BadParameters("N must be at least 2");
        if (i > 0 && Ns[i] <= Ns[i - 1]) throw BadParameters("N values must be increasing");
    }
    const auto primes = primes_between(2, Ns.back(), opts.threads);
    const unsigned q = g.base;

    // Slices never straddle an N boundary, and are reduced in index order,
    // so every reported sum is independent of the thread count.
    constexpr std::size_t kSlice = 1024;
    struct Slice {
        std::size_t begin, end;
        double sum = 0.0;
        std::vector<std::uint64_t> digits;
    };
    std::vector<Slice> slices;
    std::vector<std::size_t> boundary;  // prime count at each N
    {
        std::size_t i = 0;
        for (std::uint64_t N : Ns) {
            const std::size_t stop = static_cast<std::size_t>(
                std::upper_bound(primes.begin(), primes.end(), N) - primes.begin());
            for (; i < stop; i += kSlice) slices.push_back({i, std::min(stop, i + kSlice), 0.0, {}});
            i = stop;
            boundary.push_back(stop);
        }
    }
    parallel_tasks(slices.size(), opts.threads, [&](std::size_t s) {
        Slice& slice = slices[s];
        slice.digits.assign(q, 0);
        for (std::size_t i = slice.begin; i < slice.end; ++i) {
            const auto v = eval_floor_power(f, mpz_class(static_cast<unsigned long>(primes[i])), opts.max_bits).value;
            for (auto d : digits_of(v, q).digits) {
                slice.sum += g.weights[d];
                ++slice.digits[d];
            }
        }
    });

    const double mu = mean_digit_value(g);
    const double theta = f.leading_exponent().to_double();
    std::vector<SummatoryResult> out;
    double running = 0.0;
    std::vector<std::uint64_t> tally(q, 0);
    std::size_t s = 0;
    for (std::size_t k = 0; k < Ns.size(); ++k) {
        for (; s < slices.size() && slices[s].end <= boundary[k]; ++s) {
            running += slices[s].sum;
            for (unsigned d = 0; d < q; ++d) tally[d] += slices[s].digits[d];
        }
        SummatoryResult r;
        r.N = Ns[k];
        r.prime_count = boundary[k];
        r.empirical = running;
        r.main_term = mu * static_cast<double>(r.prime_count) * theta * std::log(static_cast<double>(r.N)) /
                      std::log(static_cast<double>(q));
        r.residual_per_prime =
            r.prime_count > 0 ? (r.empirical - r.main_term) / static_cast<double>(r.prime_count) : 0.0;
        r.digit_counts = tally;
        out.push_back(std::move(r));
    }
    return out;
}

SummatoryResult summatory_over_primes(const QAdditiveFunction& g, const PseudoPolynomial& f, std::uint64_t N,
                                      const StreamOptions& opts) {
    const std::uint64_t Ns[] = {N};
    return summatory_over_primes(g, f, Ns, opts).front();
}

double block_main_term_with_count(std::uint64_t prime_count, std::uint64_t N, double theta, unsigned q,
                                  unsigned ell) {
    if (N < 2) throw BadParameters("N must be at least 2");
    if (q < 2) throw BadParameters("base must be at least 2");
    return std::pow(static_cast<double>(q), -static_cast<double>(ell)) * static_cast<double>(prime_count) *
           theta * std::log(static_cast<double>(N)) / std::log(static_cast<double>(q));
}

double block_main_term(std::uint64_t N, double theta, unsigned q, unsigned ell) {
    if (N < 2) throw BadParameters("N must be at least 2");
    return block_main_term_with_count(prime_count(N), N, theta, q, ell);
}

DecayFit fit_log_decay(std::span<const DecaySample> samples) {
    if (samples.size() < 3) throw DegenerateSamples("need at least three samples");
    std::vector<double> scaled;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && !(samples[i].L > samples[i - 1].L))
            throw DegenerateSamples("sample lengths must be strictly increasing");
        if (samples[i].R == 0.0) throw DegenerateSamples("zero discrepancy sample");
        if (!(samples[i].L > 1.0)) throw DegenerateSamples("sample length must exceed 1");
        scaled.push_back(samples[i].R * std::log(samples[i].L));
    }
    std::vector<double> sorted = scaled;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    DecayFit fit;
    fit.C = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    fit.band_ratio = sorted.back() / sorted.front();
    return fit;
}

}  // namespace ndf
