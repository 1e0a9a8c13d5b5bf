#include "ndf/digitstream.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "ndf/parallel.hpp"

namespace ndf {

std::string_view to_string(SequenceMode m) {
    return m == SequenceMode::integers ? "integers" : "primes";
}

SequenceMode parse_mode(std::string_view text) {
    if (text == "integers") return SequenceMode::integers;
    if (text == "primes") return SequenceMode::primes;
    throw BadParameters("mode must be 'integers' or 'primes'");
}

static void check_base(unsigned q) {
    if (q < 2 || q > kMaxBase) throw BadParameters("base must lie in [2, 256]");
}

mpz_class DigitString::value() const {
    mpz_class v = 0;
    for (auto d : digits) v = v * base + d;
    return v;
}

DigitString digits_of(const mpz_class& m, unsigned q) {
    check_base(q);
    if (m < 0) throw NegativeValue("digits_of a negative number");
    DigitString out;
    out.base = q;
    if (m == 0) {
        out.digits.push_back(0);
        return out;
    }
    if (q <= 62) {
        // GMP renders 0-9, A-Z, a-z for bases up to 62.
        const std::string s = m.get_str(static_cast<int>(q > 36 ? q : -static_cast<int>(q)));
        out.digits.reserve(s.size());
        for (char c : s) {
            unsigned d;
            if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
            else if (c >= 'A' && c <= 'Z') d = static_cast<unsigned>(c - 'A') + 10;
            else d = static_cast<unsigned>(c - 'a') + 36;
            out.digits.push_back(static_cast<std::uint8_t>(d));
        }
        return out;
    }
    mpz_class v = m;
    while (v > 0) {
        out.digits.push_back(static_cast<std::uint8_t>(mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), q)));
    }
    std::reverse(out.digits.begin(), out.digits.end());
    return out;
}

DigitString digits_of(std::uint64_t m, unsigned q) {
    check_base(q);
    DigitString out;
    out.base = q;
    do {
        out.digits.push_back(static_cast<std::uint8_t>(m % q));
        m /= q;
    } while (m > 0);
    std::reverse(out.digits.begin(), out.digits.end());
    return out;
}

std::size_t digit_length(const mpz_class& m, unsigned q) {
    return digits_of(m, q).length();
}

// ---------------------------------------------------------------------------

BlockPattern::BlockPattern(unsigned q, std::vector<std::uint8_t> d) : base(q), digits(std::move(d)) {
    check_base(q);
    if (digits.empty() || digits.size() > kMaxBlockLength)
        throw BadParameters("block length must lie in [1, 12]");
    for (auto x : digits)
        if (x >= q) throw BadParameters("block digit out of range for base");
}

BlockPattern BlockPattern::parse(std::string_view text, unsigned q) {
    std::vector<std::uint8_t> d;
    const std::string s(text);
    if (s.find(',') != std::string::npos || q > 10) {
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
                throw BadParameters("bad block '" + s + "'");
            const unsigned long v = std::stoul(part);
            if (v >= q) throw BadParameters("block digit out of range for base");
            d.push_back(static_cast<std::uint8_t>(v));
        }
    } else {
        for (char c : s) {
            if (c < '0' || c > '9') throw BadParameters("bad block '" + s + "'");
            d.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    return BlockPattern(q, std::move(d));
}

std::uint64_t BlockPattern::index() const {
    std::uint64_t idx = 0;
    for (auto x : digits) idx = idx * base + x;
    return idx;
}

BlockPattern BlockPattern::from_index(std::uint64_t idx, unsigned q, unsigned ell) {
    std::vector<std::uint8_t> d(ell);
    for (unsigned i = ell; i-- > 0;) {
        d[i] = static_cast<std::uint8_t>(idx % q);
        idx /= q;
    }
    return BlockPattern(q, std::move(d));
}

double BlockPattern::offset() const {
    double s = 0.0, scale = 1.0;
    for (auto x : digits) {
        scale /= base;
        s += x * scale;
    }
    return s;
}

std::string BlockPattern::str() const {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (base > 10 && i > 0) s += ',';
        s += std::to_string(digits[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------

DigitStream::DigitStream(PseudoPolynomial f, unsigned q, SequenceMode mode, StreamOptions opts)
    : f_(std::move(f)), q_(q), mode_(mode), opts_(opts) {
    check_base(q);
    opts_.batch = std::max<std::size_t>(opts_.batch, 1);
}

void DigitStream::refill() {
    std::vector<std::uint64_t> args;
    args.reserve(opts_.batch);
    if (mode_ == SequenceMode::integers) {
        for (std::size_t i = 0; i < opts_.batch; ++i) args.push_back(next_arg_++);
    } else {
        while (pending_primes_.size() - pending_pos_ < opts_.batch) {
            std::vector<std::uint64_t> rest(pending_primes_.begin() + static_cast<std::ptrdiff_t>(pending_pos_),
                                            pending_primes_.end());
            const std::uint64_t lo = prime_hi_ + 1;
            const std::uint64_t hi = prime_hi_ + std::max<std::uint64_t>(kDefaultSegmentSize, prime_hi_ / 4);
            PrimeRangeIterator it(lo, hi);
            while (auto p = it.next()) rest.push_back(*p);
            prime_hi_ = hi;
            pending_primes_ = std::move(rest);
            pending_pos_ = 0;
        }
        for (std::size_t i = 0; i < opts_.batch; ++i) args.push_back(pending_primes_[pending_pos_++]);
    }

    buffer_.assign(args.size(), StreamItem{});
    constexpr std::size_t kSlice = 256;
    const std::size_t tasks = (args.size() + kSlice - 1) / kSlice;
    parallel_tasks(tasks, opts_.threads, [&](std::size_t t) {
        const std::size_t end = std::min(args.size(), (t + 1) * kSlice);
        for (std::size_t i = t * kSlice; i < end; ++i) {
            StreamItem& item = buffer_[i];
            item.argument = args[i];
            auto r = eval_floor_power(f_, mpz_class(static_cast<unsigned long>(args[i])), opts_.max_bits);
            item.value = std::move(r.value);
            item.cert = r.cert;
            item.digits = digits_of(item.value, q_);
        }
    });
    for (const auto& item : buffer_) escalations_ += item.cert.escalations;
    cursor_ = 0;
}

const StreamItem& DigitStream::next_item() {
    if (cursor_ >= buffer_.size()) refill();
    ++emitted_;
    return buffer_[cursor_++];
}

// ---------------------------------------------------------------------------

std::span<const std::uint8_t> DigitPrefix::item_digits(std::size_t i) const {
    const std::size_t begin = item_starts[i];
    const std::size_t end = i + 1 < item_starts.size() ? item_starts[i + 1] : digits.size();
    return {digits.data() + begin, end - begin};
}

namespace {

StreamOptions batch_for(const StreamOptions& opts, std::uint64_t L) {
    // Small requests should not evaluate thousands of unused items.
    StreamOptions o = opts;
    o.batch = static_cast<std::size_t>(std::clamp<std::uint64_t>(L / 4 + 1, 1, opts.batch));
    return o;
}

}  // namespace

DigitPrefix stream_digits(const PseudoPolynomial& f, unsigned q, SequenceMode mode, std::uint64_t L,
                          const StreamOptions& opts) {
    if (L < 1) throw BadParameters("digit budget L must be at least 1");
    DigitStream stream(f, q, mode, batch_for(opts, L));
    DigitPrefix out;
    out.base = q;
    out.mode = mode;
    out.digits.reserve(static_cast<std::size_t>(L));
    while (out.digits.size() < L) {
        const StreamItem& item = stream.next_item();
        out.item_starts.push_back(out.digits.size());
        out.arguments.push_back(item.argument);
        out.last_argument = item.argument;
        out.max_item_length = std::max(out.max_item_length, item.digits.length());
        const std::size_t room = static_cast<std::size_t>(L) - out.digits.size();
        const std::size_t take = std::min(room, item.digits.length());
        out.digits.insert(out.digits.end(), item.digits.digits.begin(),
                          item.digits.digits.begin() + static_cast<std::ptrdiff_t>(take));
        out.last_item_truncated = take < item.digits.length();
    }
    out.escalations = stream.escalations();
    return out;
}

std::uint64_t cutoff_N_for_L(const PseudoPolynomial& f, unsigned q, std::uint64_t L, SequenceMode mode,
                             const StreamOptions& opts) {
    if (L < 1) throw BadParameters("digit budget L must be at least 1");
    DigitStream stream(f, q, mode, batch_for(opts, L));
    std::uint64_t total = 0;
    for (;;) {
        const StreamItem& item = stream.next_item();
        total += item.digits.length();
        if (total >= L) return item.argument;
    }
}

// ---------------------------------------------------------------------------

BlockCounter::BlockCounter(unsigned q, unsigned ell) : q_(q), ell_(ell) {
    check_base(q);
    if (ell < 1 || ell > kMaxBlockLength) throw BadParameters("block length must lie in [1, 12]");
    std::uint64_t size = 1;
    for (unsigned i = 0; i < ell; ++i) {
        size *= q;
        if (size > kMaxBlockTable) throw BadParameters("q^ell block table too large");
    }
    modulus_ = size / q;
    counts_.assign(size, 0);
}

void BlockCounter::push(std::uint8_t digit) {
    window_ = (window_ % modulus_) * q_ + digit;
    if (filled_ < ell_) ++filled_;
    if (filled_ == ell_) ++counts_[window_];
    if (!broken_since_head_ && head_.size() + 1 < ell_) head_.push_back(digit);
    ++digits_seen_;
}

void BlockCounter::push(std::span<const std::uint8_t> digits) {
    for (auto d : digits) push(d);
}

void BlockCounter::break_window() {
    if (digits_seen_ == 0) return;
    window_ = 0;
    filled_ = 0;
    broken_since_head_ = true;
}

std::uint64_t BlockCounter::total() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::uint64_t BlockCounter::count(const BlockPattern& p) const {
    if (p.base != q_ || p.length() != ell_) throw BadParameters("pattern does not match counter");
    return counts_[p.index()];
}

void BlockCounter::merge(const BlockCounter& later) {
    if (later.q_ != q_ || later.ell_ != ell_) throw BadParameters("merging incompatible counters");
    // Trailing run of this counter: last min(filled_, ell-1) digits of window_.
    const unsigned keep = std::min(filled_, ell_ - 1);
    std::vector<std::uint8_t> tail(keep);
    {
        std::uint64_t w = window_;
        for (unsigned i = keep; i-- > 0;) {
            tail[i] = static_cast<std::uint8_t>(w % q_);
            w /= q_;
        }
    }
    // Windows crossing the junction.
    std::vector<std::uint8_t> joint = tail;
    joint.insert(joint.end(), later.head_.begin(), later.head_.end());
    for (std::size_t start = 0; start < tail.size(); ++start) {
        if (start + ell_ > joint.size()) break;
        if (start + ell_ <= tail.size()) continue;
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < ell_; ++k) idx = idx * q_ + joint[start + k];
        ++counts_[idx];
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += later.counts_[i];

    if (!broken_since_head_ && digits_seen_ < ell_ - 1) {
        for (auto d : later.head_) {
            if (head_.size() + 1 >= ell_) break;
            head_.push_back(d);
        }
    }
    // New trailing state.
    if (!later.broken_since_head_ && later.digits_seen_ < ell_ - 1) {
        // `later` is one short run continuing our tail.
        std::uint64_t w = window_ % std::max<std::uint64_t>(modulus_, 1);
        unsigned f = keep;
        std::uint64_t lw = later.window_;
        std::vector<std::uint8_t> ld(later.filled_);
        for (unsigned i = later.filled_; i-- > 0;) {
            ld[i] = static_cast<std::uint8_t>(lw % q_);
            lw /= q_;
        }
        for (auto d : ld) {
            w = (w % modulus_) * q_ + d;
            f = std::min(f + 1, ell_);
        }
        window_ = w;
        filled_ = f;
    } else {
        window_ = later.window_;
        filled_ = later.filled_;
    }
    broken_since_head_ = broken_since_head_ || later.broken_since_head_;
    digits_seen_ += later.digits_seen_;
}

BlockCounter count_all_blocks(const DigitPrefix& prefix, unsigned ell, CountMode mode) {
    BlockCounter c(prefix.base, ell);
    if (mode == CountMode::cross_boundary) {
        c.push(prefix.digits);
    } else {
        for (std::size_t i = 0; i < prefix.items(); ++i) {
            c.break_window();
            c.push(prefix.item_digits(i));
        }
    }
    return c;
}

namespace {

std::uint64_t count_in(std::span<const std::uint8_t> s, const BlockPattern& p) {
    const std::size_t ell = p.length();
    if (s.size() < ell) return 0;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i + ell <= s.size(); ++i)
        if (std::equal(p.digits.begin(), p.digits.end(), s.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
    return n;
}

}  // namespace

std::uint64_t count_blocks(const DigitPrefix& prefix, const BlockPattern& pattern, CountMode mode) {
    if (pattern.base != prefix.base) throw BadParameters("pattern base differs from stream base");
    if (mode == CountMode::cross_boundary) return count_in(prefix.digits, pattern);
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < prefix.items(); ++i) n += count_in(prefix.item_digits(i), pattern);
    return n;
}

std::size_t max_length(const PseudoPolynomial& f, unsigned q, std::uint64_t N, const StreamOptions& opts) {
    if (N < 2) throw BadParameters("N must be at least 2");
    check_base(q);
    const auto primes = primes_between(2, N, opts.threads);
    std::vector<std::size_t> lengths(primes.size());
    parallel_tasks(primes.size(), opts.threads, [&](std::size_t i) {
        lengths[i] = digit_length(eval_floor_power(f, mpz_class(static_cast<unsigned long>(primes[i])),
                                                   opts.max_bits).value,
                                  q);
    });
    return *std::max_element(lengths.begin(), lengths.end());
}

std::uint64_t padded_count_Nstar(const PseudoPolynomial& f, unsigned q, std::uint64_t N,
                                 const BlockPattern& pattern, const StreamOptions& opts) {
    if (N < 2) throw BadParameters("N must be at least 2");
    if (pattern.base != q) throw BadParameters("pattern base differs from stream base");
    const auto primes = primes_between(2, N, opts.threads);
    std::vector<DigitString> items(primes.size());
    parallel_tasks(primes.size(), opts.threads, [&](std::size_t i) {
        items[i] = digits_of(eval_floor_power(f, mpz_class(static_cast<unsigned long>(primes[i])),
                                              opts.max_bits).value,
                             q);
    });
    std::size_t J = 0;
    for (const auto& d : items) J = std::max(J, d.length());
    std::uint64_t total = 0;
    std::vector<std::uint8_t> padded;
    for (const auto& d : items) {
        padded.assign(J - d.length(), 0);
        padded.insert(padded.end(), d.digits.begin(), d.digits.end());
        total += count_in(padded, pattern);
    }
    return total;
}

// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t stream_parameter_hash(const PseudoPolynomial& f, unsigned q, SequenceMode mode) {
    std::ostringstream os;
    os << "f=" << f.str() << ";q=" << q << ";mode=" << to_string(mode);
    return fnv1a64(os.str());
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

DigitCacheHeader parse_header(std::istream& is, const std::filesystem::path& path) {
    std::array<unsigned char, kDigitCacheHeaderBytes> raw{};
    is.read(reinterpret_cast<char*>(raw.data()), raw.size());
    if (is.gcount() != static_cast<std::streamsize>(raw.size()))
        throw FormatError(path.string() + ": truncated digit cache header");
    if (std::string_view(reinterpret_cast<const char*>(raw.data()), 8) != kDigitCacheMagic)
        throw FormatError(path.string() + ": bad digit cache magic");
    DigitCacheHeader h;
    h.base = get_u64(raw.data() + 8);
    h.mode = get_u64(raw.data() + 16);
    h.length = get_u64(raw.data() + 24);
    h.parameter_hash = get_u64(raw.data() + 32);
    if (h.base < 2 || h.base > kMaxBase || h.mode > 1)
        throw FormatError(path.string() + ": invalid digit cache header");
    return h;
}

}  // namespace

void write_digit_cache(const std::filesystem::path& path, const DigitCacheHeader& header,
                       std::span<const std::uint8_t> digits) {
    if (header.length != digits.size()) throw BadParameters("header length differs from digit count");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw FormatError("cannot write " + tmp);
        os.write(kDigitCacheMagic.data(), 8);
        put_u64(os, header.base);
        put_u64(os, header.mode);
        put_u64(os, header.length);
        put_u64(os, header.parameter_hash);
        os.write(reinterpret_cast<const char*>(digits.data()), static_cast<std::streamsize>(digits.size()));
        if (!os) throw FormatError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

DigitCacheHeader read_digit_cache_header(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    return parse_header(is, path);
}

DigitCache read_digit_cache(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    DigitCache c;
    c.header = parse_header(is, path);
    c.digits.resize(static_cast<std::size_t>(c.header.length));
    is.read(reinterpret_cast<char*>(c.digits.data()), static_cast<std::streamsize>(c.digits.size()));
    if (is.gcount() != static_cast<std::streamsize>(c.digits.size()))
        throw FormatError(path.string() + ": truncated digit payload");
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError(path.string() + ": trailing bytes");
    for (auto d : c.digits)
        if (d >= c.header.base) throw FormatError(path.string() + ": digit out of range");
    return c;
}

}  // namespace ndf
