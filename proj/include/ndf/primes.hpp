#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ndf {

inline constexpr std::uint64_t kDefaultSegmentSize = 1u << 20;

/// Ascending primes in [lo, hi] from an odd-only segmented sieve. Memory is one
/// segment plus the base primes up to sqrt(hi). Single consumer.
class PrimeRangeIterator {
public:
    PrimeRangeIterator(std::uint64_t lo, std::uint64_t hi,
                       std::uint64_t segment_size = kDefaultSegmentSize);

    std::optional<std::uint64_t> next();

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint64_t segment_size() const { return segment_size_; }

    // Input-iterator adaptor so `for (auto p : primes_upto(n))` works.
    class iterator {
    public:
        using value_type = std::uint64_t;
        using difference_type = std::ptrdiff_t;
        iterator() = default;
        explicit iterator(PrimeRangeIterator* owner) : owner_(owner) { ++*this; }
        std::uint64_t operator*() const { return current_; }
        iterator& operator++() {
            auto v = owner_->next();
            if (v) current_ = *v;
            else owner_ = nullptr;
            return *this;
        }
        void operator++(int) { ++*this; }
        bool operator==(const iterator& o) const { return owner_ == o.owner_; }

    private:
        PrimeRangeIterator* owner_ = nullptr;
        std::uint64_t current_ = 0;
    };
    iterator begin() { return iterator(this); }
    iterator end() { return iterator(); }

private:
    void fill_segment();

    std::uint64_t lo_, hi_, segment_size_;
    std::vector<std::uint32_t> base_primes_;
    std::vector<std::uint8_t> composite_;  // index i <-> odd number seg_start_ + 2i
    std::uint64_t seg_start_ = 0;          // odd
    std::size_t pos_ = 0;
    std::size_t seg_len_ = 0;
    bool emit_two_ = false;
    bool done_ = false;
};

PrimeRangeIterator primes_upto(std::uint64_t n, std::uint64_t segment_size = kDefaultSegmentSize);

/// All primes in [lo, hi]. With threads > 1 disjoint subranges are sieved
/// concurrently and concatenated in order; output is identical either way.
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1);

std::uint64_t prime_count(std::uint64_t n);

/// Logarithmic integral Li(x) = integral from 2 to x of dt / log t.
double li(double x);

/// Prime factorization as (prime, multiplicity) pairs, ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

double mangoldt(std::uint64_t n);
int moebius(std::uint64_t n);

}  // namespace ndf
