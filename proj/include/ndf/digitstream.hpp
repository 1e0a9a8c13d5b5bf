#pragma once

// Digit expansions of sigma_q(f) (arguments 1, 2, 3, ...) and tau_q(f)
// (arguments 2, 3, 5, ...), block counting over them, and the on-disk digit
// cache.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ndf/certnum.hpp"
#include "ndf/primes.hpp"

namespace ndf {

inline constexpr unsigned kMaxBase = 256;  // one digit per byte
inline constexpr unsigned kMaxBlockLength = 12;
inline constexpr std::uint64_t kMaxBlockTable = 1ull << 28;
inline constexpr std::size_t kStreamChunkDigits = 1u << 20;

enum class SequenceMode : std::uint8_t { integers = 0, primes = 1 };

std::string_view to_string(SequenceMode m);
SequenceMode parse_mode(std::string_view text);

struct DigitString {
    unsigned base = 10;
    std::vector<std::uint8_t> digits;  // most significant first

    std::size_t length() const { return digits.size(); }
    mpz_class value() const;
};

/// Positional expansion; 0 maps to the single digit "0".
DigitString digits_of(const mpz_class& m, unsigned q);
DigitString digits_of(std::uint64_t m, unsigned q);

/// Number of base-q digits of m, with length(0) = 1.
std::size_t digit_length(const mpz_class& m, unsigned q);

struct BlockPattern {
    unsigned base = 10;
    std::vector<std::uint8_t> digits;

    BlockPattern() = default;
    BlockPattern(unsigned q, std::vector<std::uint8_t> d);
    /// "0113" -> digits {0,1,1,3}; for q > 10 use comma separation "12,0,15".
    static BlockPattern parse(std::string_view text, unsigned q);

    std::size_t length() const { return digits.size(); }
    /// Table index: the pattern read as a base-q integer.
    std::uint64_t index() const;
    static BlockPattern from_index(std::uint64_t idx, unsigned q, unsigned ell);
    /// sum_{l=1}^{ell} d_l q^{-l}
    double offset() const;
    std::string str() const;
};

/// One ⌊f(n)⌋ expansion in the stream.
struct StreamItem {
    std::uint64_t argument = 0;
    mpz_class value;
    DigitString digits;
    PrecisionCertificate cert;
};

struct StreamOptions {
    unsigned max_bits = kDefaultMaxBits;
    unsigned threads = 1;
    std::size_t batch = 4096;  // arguments evaluated per parallel batch
};

/// Produces items in increasing argument order. Single consumer; with
/// threads > 1 each batch of floors is evaluated concurrently.
class DigitStream {
public:
    DigitStream(PseudoPolynomial f, unsigned q, SequenceMode mode, StreamOptions opts = {});

    const StreamItem& next_item();

    unsigned base() const { return q_; }
    SequenceMode mode() const { return mode_; }
    const PseudoPolynomial& function() const { return f_; }
    std::uint64_t items_emitted() const { return emitted_; }
    std::uint64_t escalations() const { return escalations_; }

private:
    void refill();

    PseudoPolynomial f_;
    unsigned q_;
    SequenceMode mode_;
    StreamOptions opts_;
    std::vector<StreamItem> buffer_;
    std::size_t cursor_ = 0;
    std::uint64_t next_arg_ = 1;  // integers mode
    std::uint64_t prime_hi_ = 1;  // primes mode: arguments handed out so far are <= prime_hi_
    std::vector<std::uint64_t> pending_primes_;
    std::size_t pending_pos_ = 0;
    std::uint64_t emitted_ = 0;
    std::uint64_t escalations_ = 0;
};

/// A generated prefix of exactly L digits, with item boundaries.
struct DigitPrefix {
    unsigned base = 10;
    SequenceMode mode = SequenceMode::primes;
    std::vector<std::uint8_t> digits;
    std::vector<std::size_t> item_starts;  // offset of each item's first digit
    std::vector<std::uint64_t> arguments;  // argument of each item
    std::uint64_t last_argument = 0;       // N: the argument whose expansion reaches digit L
    bool last_item_truncated = false;
    std::size_t max_item_length = 0;       // J over the items touched (full lengths)
    std::uint64_t escalations = 0;

    std::size_t items() const { return item_starts.size(); }
    std::span<const std::uint8_t> item_digits(std::size_t i) const;
};

DigitPrefix stream_digits(const PseudoPolynomial& f, unsigned q, SequenceMode mode, std::uint64_t L,
                          const StreamOptions& opts = {});

/// The N with sum_{n<N} len(f(n)) < L <= sum_{n<=N} len(f(n)), n drawn per mode.
std::uint64_t cutoff_N_for_L(const PseudoPolynomial& f, unsigned q, std::uint64_t L, SequenceMode mode,
                             const StreamOptions& opts = {});

enum class CountMode { cross_boundary, within_item };

/// Sliding-window counts of every length-ell pattern. Chunks may be pushed
/// piecewise; counters over adjacent chunks merge given their edge digits.
class BlockCounter {
public:
    BlockCounter(unsigned q, unsigned ell);

    void push(std::uint8_t digit);
    void push(std::span<const std::uint8_t> digits);
    /// Forget the window so the next occurrence must start at the next digit
    /// (used for per-item counting).
    void break_window();

    /// Append `later` (a counter over the digits that follow this one).
    void merge(const BlockCounter& later);

    unsigned base() const { return q_; }
    unsigned ell() const { return ell_; }
    std::uint64_t digits_seen() const { return digits_seen_; }
    std::uint64_t total() const;
    std::uint64_t count(std::uint64_t pattern_index) const { return counts_[pattern_index]; }
    std::uint64_t count(const BlockPattern& p) const;
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::size_t table_size() const { return counts_.size(); }

private:
    unsigned q_, ell_;
    std::uint64_t modulus_;  // q^(ell-1), to drop the oldest digit
    std::vector<std::uint64_t> counts_;
    std::uint64_t digits_seen_ = 0;
    std::uint64_t window_ = 0;       // last min(filled_, ell) digits as a base-q number
    unsigned filled_ = 0;            // digits in the current unbroken run, capped at ell
    std::vector<std::uint8_t> head_; // first ell-1 digits, for merge
    std::vector<std::uint8_t> tail_; // last ell-1 digits, for merge
    bool broken_since_head_ = false; // a window break occurred after the head
};

std::uint64_t count_blocks(const DigitPrefix& prefix, const BlockPattern& pattern, CountMode mode);
BlockCounter count_all_blocks(const DigitPrefix& prefix, unsigned ell, CountMode mode);

/// J = max over primes p <= N of len(⌊f(p)⌋).
std::size_t max_length(const PseudoPolynomial& f, unsigned q, std::uint64_t N,
                       const StreamOptions& opts = {});

/// sum over primes p <= N of occurrences of the pattern in ⌊f(p)⌋ left-padded
/// with zeros to J digits.
std::uint64_t padded_count_Nstar(const PseudoPolynomial& f, unsigned q, std::uint64_t N,
                                 const BlockPattern& pattern, const StreamOptions& opts = {});

// ---------------------------------------------------------------------------
// Digit cache file: "NDSTRM01", then little-endian u64 {base, mode, L,
// parameter hash}, then L raw digit bytes.

struct DigitCacheHeader {
    std::uint64_t base = 0;
    std::uint64_t mode = 0;
    std::uint64_t length = 0;
    std::uint64_t parameter_hash = 0;
    friend bool operator==(const DigitCacheHeader&, const DigitCacheHeader&) = default;
};

inline constexpr std::string_view kDigitCacheMagic = "NDSTRM01";
inline constexpr std::size_t kDigitCacheHeaderBytes = 8 + 4 * 8;

/// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view data);

/// Hash naming the stream (f, base, mode); the digit count is stored separately.
std::uint64_t stream_parameter_hash(const PseudoPolynomial& f, unsigned q, SequenceMode mode);

void write_digit_cache(const std::filesystem::path& path, const DigitCacheHeader& header,
                       std::span<const std::uint8_t> digits);

struct DigitCache {
    DigitCacheHeader header;
    std::vector<std::uint8_t> digits;
};

DigitCache read_digit_cache(const std::filesystem::path& path);
DigitCacheHeader read_digit_cache_header(const std::filesystem::path& path);

}  // namespace ndf
