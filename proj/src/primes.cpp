#include "ndf/primes.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ndf/errors.hpp"
#include "ndf/parallel.hpp"

namespace ndf {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t m = i * i; m <= limit; m += i) comp[m] = true;
    }
    return out;
}

// Primes up to 2^16 cover trial division for every n < 2^32.
const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> table = simple_sieve(1u << 16);
    return table;
}

}  // namespace

PrimeRangeIterator::PrimeRangeIterator(std::uint64_t lo, std::uint64_t hi,
                                       std::uint64_t segment_size)
    : lo_(std::max<std::uint64_t>(lo, 2)), hi_(hi), segment_size_(std::max<std::uint64_t>(segment_size, 64)) {
    if (lo_ > hi_) {
        done_ = true;
        return;
    }
    base_primes_ = simple_sieve(static_cast<std::uint32_t>(isqrt(hi_)));
    emit_two_ = lo_ <= 2;
    seg_start_ = lo_ | 1;  // first odd >= lo
    if (seg_start_ < 3) seg_start_ = 3;
    pos_ = seg_len_ = 0;
}

void PrimeRangeIterator::fill_segment() {
    if (seg_start_ > hi_) {
        done_ = true;
        return;
    }
    const std::uint64_t odd_count = segment_size_ / 2;
    const std::uint64_t last = std::min(hi_, seg_start_ + 2 * (odd_count - 1));
    seg_len_ = static_cast<std::size_t>((last - seg_start_) / 2 + 1);
    composite_.assign(seg_len_, 0);
    for (std::uint32_t p : base_primes_) {
        if (p == 2) continue;
        const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp > last) break;
        std::uint64_t m = std::max(pp, (seg_start_ + p - 1) / p * p);
        if (m % 2 == 0) m += p;
        for (; m <= last; m += 2 * p) composite_[(m - seg_start_) / 2] = 1;
    }
    if (seg_start_ == 1) composite_[0] = 1;
    pos_ = 0;
}

std::optional<std::uint64_t> PrimeRangeIterator::next() {
    if (emit_two_) {
        emit_two_ = false;
        return 2;
    }
    while (!done_) {
        if (pos_ >= seg_len_) {
            if (seg_len_ > 0) seg_start_ += 2 * seg_len_;
            seg_len_ = 0;
            fill_segment();
            if (done_) break;
        }
        while (pos_ < seg_len_) {
            const std::size_t i = pos_++;
            if (!composite_[i]) return seg_start_ + 2 * i;
        }
    }
    return std::nullopt;
}

PrimeRangeIterator primes_upto(std::uint64_t n, std::uint64_t segment_size) {
    return PrimeRangeIterator(2, n, segment_size);
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi, unsigned threads) {
    std::vector<std::uint64_t> out;
    if (lo > hi) return out;
    const std::uint64_t span = hi - lo + 1;
    const std::uint64_t chunk = std::max<std::uint64_t>(kDefaultSegmentSize, span / (4 * std::max(1u, threads)) + 1);
    const std::size_t tasks = static_cast<std::size_t>((span + chunk - 1) / chunk);
    std::vector<std::vector<std::uint64_t>> parts(tasks);
    parallel_tasks(tasks, threads, [&](std::size_t t) {
        const std::uint64_t a = lo + t * chunk;
        const std::uint64_t b = std::min(hi, a + chunk - 1);
        PrimeRangeIterator it(a, b);
        while (auto p = it.next()) parts[t].push_back(*p);
    });
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::uint64_t prime_count(std::uint64_t n) {
    std::uint64_t c = 0;
    PrimeRangeIterator it(2, n);
    while (it.next()) ++c;
    return c;
}

double li(double x) {
    if (!(x >= 2.0)) throw BadParameters("li requires x >= 2");
    if (x == 2.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [](double t) { return 1.0 / std::log(t); };
    // Integrate over geometric pieces so each stays well resolved.
    double total = 0.0;
    double a = 2.0;
    while (a < x) {
        const double b = std::min(x, a * 16.0);
        total += gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-14);
        a = b;
    }
    return total;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    if (n < 2) return out;
    auto take = [&](std::uint64_t p) {
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k) out.emplace_back(p, k);
    };
    for (std::uint32_t p : small_primes()) {
        if (static_cast<std::uint64_t>(p) * p > n) break;
        take(p);
    }
    // Beyond the table: plain odd trial division.
    for (std::uint64_t d = (small_primes().back() + 2) | 1; n > 1 && d <= n / d; d += 2) take(d);
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

double mangoldt(std::uint64_t n) {
    const auto f = factorize(n);
    if (f.size() != 1) return 0.0;
    return std::log(static_cast<double>(f.front().first));
}

int moebius(std::uint64_t n) {
    if (n == 0) throw BadParameters("moebius(0) undefined");
    const auto f = factorize(n);
    for (const auto& [p, k] : f)
        if (k > 1) return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

}  // namespace ndf
