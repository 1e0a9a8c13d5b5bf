#include "ndf/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndf/certnum.hpp"
#include "ndf/checks.hpp"
#include "ndf/digitstream.hpp"
#include "ndf/harmonic.hpp"
#include "ndf/parallel.hpp"
#include "ndf/primes.hpp"
#include "ndf/stats.hpp"

namespace ndf::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string command;
    std::string f_text;
    std::string alpha = "1";
    std::string theta;
    unsigned base = 10;
    std::string mode = "primes";
    std::uint64_t digits = 0;
    std::uint64_t upto = 0;
    std::string block;
    unsigned ell = 1;
    double H = 0.0;
    std::string decades;
    std::string output;
    std::string format = "json";
    std::string cache_dir = ".ndf-cache";
    unsigned threads = default_threads();
    unsigned max_bits = kDefaultMaxBits;
    double tol = kDefaultExpSumTol;
    std::string j_grid = "1..6";
    std::string nu_grid = "1..10";
    double rho = 0.5;
    std::string weights;
    std::string input;
    std::string inject_fault;
    bool timing = false;

    // Derived during validation.
    std::optional<PseudoPolynomial> f;
    SequenceMode seq = SequenceMode::primes;
};

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

PseudoPolynomial build_function(const RunConfig& c) {
    if (!c.f_text.empty()) {
        if (!c.theta.empty()) throw ConfigError("--f and --theta are mutually exclusive");
        return PseudoPolynomial::parse(c.f_text);
    }
    const ExactReal alpha = parse_exact(c.alpha);
    const ExactReal theta = c.theta.empty() ? ExactReal(1) : parse_exact(c.theta);
    return PseudoPolynomial::monomial(alpha, theta);
}

void validate(RunConfig& c) {
    if (c.base < 2 || c.base > kMaxBase) throw ConfigError("--base must lie in [2, 256]");
    if (c.ell < 1 || c.ell > kMaxBlockLength) throw ConfigError("--ell must lie in [1, 12]");
    if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
    if (c.threads < 1) throw ConfigError("--threads must be at least 1");
    if (c.max_bits < kInitialBits) throw ConfigError("--max-bits must be at least 64");
    if (!(c.tol > 0.0 && c.tol < 0.25)) throw ConfigError("--tol must lie in (0, 1/4)");
    try {
        c.seq = parse_mode(c.mode);
        c.f = build_function(c);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (const char* env = std::getenv("NDF_CACHE_DIR"); env && *env) c.cache_dir = env;
}

json config_echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["f"] = c.f->str();
    j["base"] = c.base;
    j["mode"] = std::string(to_string(c.seq));
    if (c.digits) j["digits"] = c.digits;
    if (c.upto) j["upto"] = c.upto;
    if (!c.block.empty()) j["block"] = c.block;
    j["ell"] = c.ell;
    if (c.H > 0) j["H"] = c.H;
    if (!c.decades.empty()) j["decades"] = c.decades;
    j["max_bits"] = c.max_bits;
    if (c.command == "expsum") {
        j["tol"] = c.tol;
        j["j"] = c.j_grid;
        j["nu"] = c.nu_grid;
        j["rho"] = c.rho;
    }
    if (!c.weights.empty()) j["weights"] = c.weights;
    if (!c.input.empty()) j["input"] = c.input;
    return j;
}

std::uint64_t config_hash(const RunConfig& c) { return fnv1a64(config_echo(c).dump()); }

std::uint64_t power_of_ten(long long e) {
    if (e < 0 || e > 18) throw ConfigError("decade exponent out of range");
    std::uint64_t v = 1;
    for (long long i = 0; i < e; ++i) v *= 10;
    return v;
}

// Emits either a JSON report or a CSV table.
struct Output {
    json results;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::uint64_t escalations = 0;
};

void write_report(const RunConfig& c, const Output& o, double runtime_ms, std::ostream& out) {
    std::ostringstream text;
    if (c.format == "csv") {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) text << (i ? "," : "") << cells[i];
            text << '\n';
        };
        line(o.csv_header);
        for (const auto& r : o.csv_rows) line(r);
    } else {
        json report;
        report["config"] = config_echo(c);
        report["results"] = o.results;
        json prov;
        prov["library_version"] = kVersion;
        prov["config_hash"] = hex64(config_hash(c));
        prov["precision_escalations"] = o.escalations;
        prov["sequential"] = c.threads == 1;
        if (c.timing) prov["runtime_ms"] = runtime_ms;
        report["provenance"] = prov;
        text << report.dump(2) << '\n';
    }
    if (c.output.empty()) {
        out << text.str();
    } else {
        std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
        if (!f) throw FormatError("cannot write " + c.output);
        f << text.str();
    }
}

StreamOptions stream_opts(const RunConfig& c) {
    StreamOptions o;
    o.max_bits = c.max_bits;
    o.threads = c.threads;
    return o;
}

// ---------------------------------------------------------------------------

fs::path cache_path(const RunConfig& c, std::uint64_t stream_hash) {
    return fs::path(c.cache_dir) / (hex64(stream_hash) + ".ndstrm");
}

Output cmd_generate(const RunConfig& c, std::ostream& err) {
    if (c.digits < 1) throw ConfigError("generate needs --digits L >= 1");
    const std::uint64_t h = stream_parameter_hash(*c.f, c.base, c.seq);
    const fs::path file = cache_path(c, h);
    fs::path sidecar = file;
    sidecar += ".json";

    Output o;
    const DigitCacheHeader want{c.base, static_cast<std::uint64_t>(c.seq), c.digits, h};
    bool hit = false;
    if (fs::exists(file) && fs::exists(sidecar)) {
        try {
            if (read_digit_cache_header(file) == want) {
                std::ifstream is(sidecar);
                const json saved = json::parse(is);
                o.results = saved.at("results");
                o.escalations = saved.at("escalations").get<std::uint64_t>();
                hit = true;
            }
        } catch (const std::exception&) {
            hit = false;
        }
    }
    if (hit) {
        err << "generate: reusing cache " << file.string() << '\n';
        return o;
    }

    const DigitPrefix prefix = stream_digits(*c.f, c.base, c.seq, c.digits, stream_opts(c));
    fs::create_directories(c.cache_dir);
    write_digit_cache(file, want, prefix.digits);

    std::string head;
    for (std::size_t i = 0; i < std::min<std::size_t>(64, prefix.digits.size()); ++i) {
        if (c.base > 10 && i) head += ',';
        head += std::to_string(prefix.digits[i]);
    }
    o.results["L"] = c.digits;
    o.results["N_cutoff"] = prefix.last_argument;
    o.results["J"] = prefix.max_item_length;
    o.results["items"] = prefix.items();
    o.results["last_item_truncated"] = prefix.last_item_truncated;
    o.results["parameter_hash"] = hex64(h);
    o.results["digit_file"] = file.string();
    o.results["head"] = head;
    o.escalations = prefix.escalations;
    {
        std::ofstream os(sidecar, std::ios::trunc);
        os << json{{"results", o.results}, {"escalations", o.escalations}}.dump(2) << '\n';
    }
    err << "generate: wrote " << file.string() << '\n';
    return o;
}

std::vector<std::uint64_t> decade_lengths(const RunConfig& c, std::uint64_t fallback_max, long long first) {
    std::vector<std::uint64_t> Ls;
    if (!c.decades.empty()) {
        for (auto e : parse_int_list(c.decades)) Ls.push_back(power_of_ten(e));
    } else {
        for (long long e = first; power_of_ten(e) <= fallback_max; ++e) Ls.push_back(power_of_ten(e));
        if (Ls.empty() || Ls.back() != fallback_max) Ls.push_back(fallback_max);
    }
    std::sort(Ls.begin(), Ls.end());
    Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
    return Ls;
}

Output cmd_discrepancy(const RunConfig& c, std::ostream& err) {
    std::optional<DigitCache> cached;
    unsigned q = c.base;
    if (!c.input.empty()) {
        cached = read_digit_cache(c.input);
        q = static_cast<unsigned>(cached->header.base);
    }
    std::uint64_t available = cached ? cached->header.length : c.digits;
    if (!cached && available == 0 && !c.decades.empty()) available = decade_lengths(c, 0, 3).back();
    if (available < 1) throw ConfigError("discrepancy needs --digits L, --decades or --input FILE");
    const auto Ls = decade_lengths(c, available, 3);
    if (Ls.empty() || Ls.back() > available) throw ConfigError("decades exceed the available digits");
    if (Ls.front() < c.ell) throw ConfigError("sample length shorter than --ell");

    if (!cached) {
        // Reuse a generated cache when it covers the request.
        const std::uint64_t h = stream_parameter_hash(*c.f, c.base, c.seq);
        const fs::path file = cache_path(c, h);
        if (fs::exists(file)) {
            try {
                auto dc = read_digit_cache(file);
                if (dc.header.parameter_hash == h && dc.header.length >= Ls.back()) {
                    cached = std::move(dc);
                    err << "discrepancy: using cache " << file.string() << '\n';
                }
            } catch (const std::exception&) {
            }
        }
    }

    std::optional<BlockPattern> block;
    if (!c.block.empty()) {
        try {
            block = BlockPattern::parse(c.block, q);
        } catch (const Error& e) {
            throw ConfigError(std::string("--block: ") + e.what());
        }
        if (block->length() != c.ell) throw ConfigError("--block length must equal --ell");
    }

    BlockCounter cross(q, c.ell);
    BlockCounter within(q, c.ell);
    Output o;
    json rows = json::array();
    std::vector<DecaySample> samples;
    o.csv_header = {"L", "R", "R_log_L", "argmax_block", "R_within_item"};
    if (block) o.csv_header.insert(o.csv_header.end(), {"block", "block_count", "block_count_within_item", "block_expected"});

    auto record = [&](std::uint64_t L) {
        const auto rep = discrepancy(cross);
        // Per-item counts over the same L digits, as a diagnostic beside R.
        const double wsup = discrepancy(within).sup_deviation;
        json r;
        r["L"] = L;
        r["R"] = rep.sup_deviation;
        r["R_log_L"] = rep.sup_deviation * std::log(double(L));
        r["argmax_block"] = rep.argmax_pattern.str();
        r["R_within_item"] = wsup;
        std::vector<std::string> cells{std::to_string(L), num(rep.sup_deviation),
                                       num(rep.sup_deviation * std::log(double(L))), rep.argmax_pattern.str(),
                                       num(wsup)};
        if (block) {
            const double expected = double(L) * std::pow(double(q), -double(c.ell));
            r["block"] = block->str();
            r["block_count"] = cross.count(*block);
            r["block_count_within_item"] = within.count(*block);
            r["block_expected"] = expected;
            cells.insert(cells.end(), {block->str(), std::to_string(cross.count(*block)),
                                       std::to_string(within.count(*block)), num(expected)});
        }
        rows.push_back(r);
        o.csv_rows.push_back(std::move(cells));
        samples.push_back({double(L), rep.sup_deviation});
    };

    std::size_t next = 0;
    if (cached) {
        // Item boundaries are not stored in the cache; the per-item column equals the flat count.
        for (std::uint64_t i = 0; i < Ls.back(); ++i) {
            cross.push(cached->digits[i]);
            within.push(cached->digits[i]);
            if (i + 1 == Ls[next]) {
                record(Ls[next]);
                ++next;
            }
        }
    } else {
        DigitStream stream(*c.f, q, c.seq, stream_opts(c));
        std::uint64_t seen = 0;
        while (next < Ls.size()) {
            const StreamItem& item = stream.next_item();
            within.break_window();
            for (auto d : item.digits.digits) {
                cross.push(d);
                within.push(d);
                ++seen;
                if (seen == Ls[next]) {
                    record(Ls[next]);
                    if (++next == Ls.size()) break;
                }
            }
        }
        o.escalations = stream.escalations();
    }

    o.results["rows"] = rows;
    if (samples.size() >= 3 && std::all_of(samples.begin(), samples.end(), [](auto& s) { return s.R > 0; })) {
        const auto fit = fit_log_decay(samples);
        o.results["fit"] = {{"C", fit.C}, {"band_ratio", fit.band_ratio}};
    } else {
        o.results["fit"] = nullptr;
    }
    return o;
}

QAdditiveFunction weights_for(const RunConfig& c) {
    if (c.weights.empty()) return QAdditiveFunction::digit_sum(c.base);
    std::vector<double> w;
    std::stringstream ss(c.weights);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            w.push_back(parse_exact(part).to_double());
        } catch (const Error& e) {
            throw ConfigError(std::string("--weights: ") + e.what());
        }
    }
    try {
        return QAdditiveFunction(c.base, w);
    } catch (const Error& e) {
        throw ConfigError(std::string("--weights: ") + e.what());
    }
}

Output cmd_digitsum(const RunConfig& c, std::ostream&) {
    std::vector<std::uint64_t> Ns;
    if (!c.decades.empty()) {
        for (auto e : parse_int_list(c.decades)) Ns.push_back(power_of_ten(e));
        std::sort(Ns.begin(), Ns.end());
        Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    }
    if (c.upto) {
        if (c.upto < 2) throw ConfigError("--upto must be at least 2");
        if (Ns.empty() || Ns.back() < c.upto) Ns.push_back(c.upto);
        std::sort(Ns.begin(), Ns.end());
        Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    }
    if (Ns.empty()) throw ConfigError("digitsum needs --upto N or --decades");
    if (Ns.front() < 2) throw ConfigError("N must be at least 2");

    const auto g = weights_for(c);
    const auto res = summatory_over_primes(g, *c.f, Ns, stream_opts(c));
    Output o;
    json rows = json::array();
    o.csv_header = {"N", "pi_N", "empirical", "main_term", "residual_per_prime"};
    for (const auto& r : res) {
        json row;
        row["N"] = r.N;
        row["pi_N"] = r.prime_count;
        row["empirical"] = r.empirical;
        row["main_term"] = r.main_term;
        row["residual_per_prime"] = r.residual_per_prime;
        rows.push_back(row);
        o.csv_rows.push_back({std::to_string(r.N), std::to_string(r.prime_count), num(r.empirical),
                              num(r.main_term), num(r.residual_per_prime)});
    }
    o.results["mean_digit_value"] = mean_digit_value(g);
    o.results["rows"] = rows;
    return o;
}

Output cmd_expsum(const RunConfig& c, std::ostream&) {
    if (c.upto < 2) throw ConfigError("expsum needs --upto N >= 2");
    std::vector<ExpSumQuery> grid;
    for (auto j : parse_int_list(c.j_grid)) {
        if (j < 0) throw ConfigError("--j values must be nonnegative");
        for (auto nu : parse_int_list(c.nu_grid)) {
            if (nu == 0) throw ConfigError("--nu values must be nonzero");
            grid.push_back({static_cast<unsigned>(j), nu});
        }
    }
    if (grid.empty()) throw ConfigError("empty (j, nu) grid");
    const auto samples = exp_sum_grid(*c.f, c.base, c.upto, grid, c.tol, c.threads, c.max_bits);
    const double theta = c.f->leading_exponent().to_double();

    Output o;
    json rows = json::array();
    o.csv_header = {"j", "nu", "regime", "abs_S", "normalized", "re", "im", "phase_error"};
    for (const auto& s : samples) {
        std::string regime;
        try {
            regime = std::string(to_string(classify_regime(c.base, s.j, double(c.upto), theta, c.rho)));
        } catch (const OutOfRange&) {
            regime = "out_of_range";
        }
        json row;
        row["j"] = s.j;
        row["nu"] = s.nu;
        row["regime"] = regime;
        row["abs_S"] = std::abs(s.value);
        row["normalized"] = s.normalized_magnitude;
        row["re"] = s.value.real();
        row["im"] = s.value.imag();
        row["phase_error"] = s.phase_error;
        rows.push_back(row);
        o.csv_rows.push_back({std::to_string(s.j), std::to_string(s.nu), regime, num(std::abs(s.value)),
                              num(s.normalized_magnitude), num(s.value.real()), num(s.value.imag()),
                              num(s.phase_error)});
        o.escalations += s.escalations;
    }
    o.results["pi_N"] = samples.front().prime_count;
    o.results["rows"] = rows;
    return o;
}

Output cmd_check(const RunConfig& c, bool& failed) {
    CheckOptions opts;
    if (!c.inject_fault.empty()) {
        if (c.inject_fault != "coefficients") throw ConfigError("--inject-fault supports only 'coefficients'");
        opts.coefficient_scale = 2.0;
    }
    opts.extra_H = c.H;
    const auto results = run_machinery_checks(opts);
    Output o;
    json rows = json::array();
    o.csv_header = {"check", "passed", "margin", "detail"};
    failed = false;
    for (const auto& r : results) {
        rows.push_back({{"check", r.name}, {"passed", r.passed}, {"margin", r.margin}, {"detail", r.detail}});
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        o.csv_rows.push_back({r.name, r.passed ? "pass" : "fail", num(r.margin), detail});
        failed = failed || !r.passed;
    }
    const auto e = vinogradov_exponents(1.0, 2);
    o.results["checks"] = rows;
    o.results["exponent_row"] = {{"rho", e.rho}, {"k", e.k}, {"R", e.R}, {"L", e.L}, {"eta", e.eta}};
    o.results["all_passed"] = !failed;
    return o;
}

Output cmd_report(const RunConfig& c, std::ostream&) {
    if (c.input.empty()) throw ConfigError("report needs --input FILE");
    const auto dc = read_digit_cache(c.input);
    const unsigned q = static_cast<unsigned>(dc.header.base);
    Output o;
    o.results["header"] = {{"base", dc.header.base},
                           {"mode", std::string(to_string(static_cast<SequenceMode>(dc.header.mode)))},
                           {"length", dc.header.length},
                           {"parameter_hash", hex64(dc.header.parameter_hash)}};
    std::vector<std::uint64_t> freq(q, 0);
    for (auto d : dc.digits) ++freq[d];
    o.results["digit_counts"] = freq;
    json disc = json::array();
    o.csv_header = {"ell", "L", "R", "argmax_block"};
    for (unsigned ell = 1; ell <= std::min<unsigned>(3, c.ell < 3 ? 3 : c.ell); ++ell) {
        if (dc.digits.size() < ell) break;
        std::uint64_t table = 1;
        for (unsigned i = 0; i < ell; ++i) table *= q;
        if (table > kMaxBlockTable) break;
        const auto rep = discrepancy(dc.digits, q, ell);
        disc.push_back({{"ell", ell}, {"R", rep.sup_deviation}, {"argmax_block", rep.argmax_pattern.str()}});
        o.csv_rows.push_back({std::to_string(ell), std::to_string(dc.header.length), num(rep.sup_deviation),
                              rep.argmax_pattern.str()});
    }
    o.results["discrepancy"] = disc;
    return o;
}

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--f", c.f_text, "pseudo-polynomial \"<coeff>^<exp>[+...]\"");
    sub->add_option("--alpha", c.alpha, "coefficient of alpha*x^theta (exact decimal or p/q)");
    sub->add_option("--theta", c.theta, "exponent of alpha*x^theta (exact decimal or p/q)");
    sub->add_option("--base", c.base, "digit base q");
    sub->add_option("--mode", c.mode, "integers | primes");
    sub->add_option("--digits", c.digits, "digit budget L");
    sub->add_option("--upto", c.upto, "argument bound N");
    sub->add_option("--block", c.block, "block pattern, e.g. 02");
    sub->add_option("--ell", c.ell, "block length");
    sub->add_option("--H", c.H, "extra smoothing level for the block windows (check)");
    sub->add_option("--decades", c.decades, "decade exponents, e.g. 3..6");
    sub->add_option("--output", c.output, "report file (default stdout)");
    sub->add_option("--format", c.format, "json | csv");
    sub->add_option("--cache-dir", c.cache_dir, "digit cache directory (env NDF_CACHE_DIR overrides)");
    sub->add_option("--threads", c.threads, "worker threads; 1 is the reference sequential path");
    sub->add_option("--max-bits", c.max_bits, "precision ceiling for certified floors");
    sub->add_option("--tol", c.tol, "exponential-sum phase tolerance");
    sub->add_flag("--timing", c.timing, "include wall time in the provenance block");
}

}  // namespace

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string part;
    auto to_ll = [&](const std::string& s) {
        long long v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("bad integer list '" + text + "'");
        return v;
    };
    while (std::getline(ss, part, ',')) {
        if (part.empty()) throw ConfigError("bad integer list '" + text + "'");
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_ll(part));
            continue;
        }
        const long long a = to_ll(part.substr(0, dots));
        const long long b = to_ll(part.substr(dots + 2));
        if (b < a || b - a > 100000) throw ConfigError("bad range '" + part + "'");
        for (long long v = a; v <= b; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Normal numbers from prime values of pseudo-polynomials: construction and statistics", "ndf"};
    app.require_subcommand(1);
    RunConfig c;

    auto* gen = app.add_subcommand("generate", "write the digit expansion to the cache and summarize it");
    auto* disc = app.add_subcommand("discrepancy", "block-frequency discrepancy at decade prefixes");
    auto* dsum = app.add_subcommand("digitsum", "sum of q-additive g(floor f(p)) against its main term");
    auto* esum = app.add_subcommand("expsum", "exponential sums over primes on a (j, nu) grid");
    auto* chk = app.add_subcommand("check", "verify the smoothing, Vaughan and exponent machinery");
    auto* rep = app.add_subcommand("report", "summarize a digit cache file");
    for (auto* s : {gen, disc, dsum, esum, chk, rep}) add_common(s, c);
    disc->add_option("--input", c.input, "digit cache file to analyze");
    rep->add_option("--input", c.input, "digit cache file")->required();
    dsum->add_option("--weights", c.weights, "digit weights w(0..q-1), comma separated");
    esum->add_option("--j", c.j_grid, "digit positions, e.g. 1..6");
    esum->add_option("--nu", c.nu_grid, "frequencies, e.g. 1..10");
    esum->add_option("--rho", c.rho, "regime split exponent");
    chk->add_option("--inject-fault", c.inject_fault, "test hook: 'coefficients'");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "ndf: " << e.what() << '\n';
        return kConfigError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.command = app.get_subcommands().front()->get_name();
        validate(c);
        Output o;
        bool failed = false;
        if (c.command == "generate") o = cmd_generate(c, err);
        else if (c.command == "discrepancy") o = cmd_discrepancy(c, err);
        else if (c.command == "digitsum") o = cmd_digitsum(c, err);
        else if (c.command == "expsum") o = cmd_expsum(c, err);
        else if (c.command == "check") o = cmd_check(c, failed);
        else o = cmd_report(c, err);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        write_report(c, o, ms, out);
        return failed ? kCheckFailure : kSuccess;
    } catch (const ConfigError& e) {
        err << "ndf: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const AmbiguousFloor& e) {
        err << "ndf: " << e.what() << '\n';
        return kAmbiguity;
    } catch (const AmbiguousFrac& e) {
        err << "ndf: " << e.what() << '\n';
        return kAmbiguity;
    } catch (const BadParameters& e) {
        err << "ndf: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const MalformedNumber& e) {
        err << "ndf: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "ndf: " << e.what() << '\n';
        return kRuntimeFailure;
    }
}

}  // namespace ndf::cli
