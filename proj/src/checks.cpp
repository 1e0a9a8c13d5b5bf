#include "ndf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ndf/harmonic.hpp"
#include "ndf/primes.hpp"

namespace ndf {

namespace {

// Float slack for comparisons that hold exactly in real arithmetic.
constexpr double kSlack = 1e-12;

struct Window {
    SmoothedIndicator ind;
    std::string label;
};

std::vector<Window> random_windows(unsigned count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Window> out;
    while (out.size() < count) {
        // Log-uniform delta in [1e-3, 0.45].
        const double delta = std::exp(std::log(1e-3) + unit(rng) * (std::log(0.45) - std::log(1e-3)));
        const double width = delta + unit(rng) * (1.0 - 2.0 * delta);
        const double alpha = unit(rng);
        std::ostringstream label;
        label << "random(" << alpha << "," << alpha + width << "," << delta << ")";
        out.push_back({SmoothedIndicator(alpha, alpha + width, delta), label.str()});
    }
    return out;
}

struct BlockWindow {
    BlockPattern pattern;
    double H;
    SmoothedIndicator minus;
    SmoothedIndicator plus;
};

std::vector<BlockWindow> block_windows(double extra_H) {
    std::vector<BlockWindow> out;
    auto add = [&](unsigned q, unsigned ell, double H) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < ell; ++i) count *= q;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            auto p = BlockPattern::from_index(idx, q, ell);
            out.push_back({p, H, indicator_for_block(p, H, BoundSide::minus),
                           indicator_for_block(p, H, BoundSide::plus)});
        }
    };
    add(10, 1, 1e2);
    add(10, 1, 1e3);
    add(10, 2, 1e3);
    add(2, 3, 1e2);
    if (extra_H > 0) add(10, 1, extra_H);
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult check_psi_shape(const std::vector<Window>& windows, unsigned grid) {
    CheckResult r{"smoothed_indicator_shape", true, 1.0, ""};
    std::uint64_t violations = 0;
    double worst = 0.0;
    for (const auto& w : windows) {
        const auto& s = w.ind;
        const double h = s.delta() / 2.0;
        for (unsigned i = 0; i < grid; ++i) {
            const double t = static_cast<double>(i) / grid;
            const double v = s(t);
            if (v < 0.0 || v > 1.0) ++violations;
            if (std::fabs(s(t + 1.0) - v) > kSlack) ++violations;
            // Position relative to alpha within one period.
            const double uu = (t - s.alpha() + h) - std::floor(t - s.alpha() + h) - h;  // in [-h, 1-h)
            if (uu >= h + kSlack && uu <= s.mean() - h - kSlack) {
                worst = std::max(worst, std::fabs(1.0 - v));
                if (std::fabs(1.0 - v) > kSlack) ++violations;
            }
            if (uu >= s.mean() + h + kSlack && uu <= 1.0 - h - kSlack) {
                worst = std::max(worst, v);
                if (v > kSlack) ++violations;
            }
        }
    }
    r.passed = violations == 0;
    r.margin = kSlack - worst;
    r.detail = std::to_string(violations) + " violations over " + std::to_string(windows.size()) + " windows";
    return r;
}

CheckResult check_coefficients(const std::vector<const SmoothedIndicator*>& inds, unsigned range, double scale) {
    CheckResult r{"fourier_coefficient_bound", true, 0.0, ""};
    std::uint64_t violations = 0;
    double min_slack = 1.0;
    for (const auto* s : inds) {
        if (std::fabs(std::abs(s->coefficient(0)) - s->mean()) > kSlack) ++violations;
        for (unsigned n = 1; n <= range; ++n) {
            for (std::int64_t nu : {static_cast<std::int64_t>(n), -static_cast<std::int64_t>(n)}) {
                const double a = scale * std::abs(s->coefficient(nu));
                const double b = s->coefficient_bound(nu);
                const double slack = (b - a) / b;
                min_slack = std::min(min_slack, slack);
                if (a > b * (1.0 + kSlack)) ++violations;
            }
        }
    }
    r.passed = violations == 0;
    r.margin = min_slack;
    r.detail = std::to_string(violations) + " violations over " + std::to_string(inds.size()) +
               " indicators, |nu| <= " + std::to_string(range);
    return r;
}

CheckResult check_fourier_truncation(const std::vector<const SmoothedIndicator*>& inds, unsigned grid,
                                     unsigned K) {
    CheckResult r{"fourier_truncation", true, 0.0, ""};
    std::uint64_t violations = 0;
    double worst_ratio = 0.0;
    for (const auto* s : inds) {
        const double bound = s->tail_bound(K);
        for (unsigned i = 0; i < grid; ++i) {
            const double t = (i + 0.5) / grid;
            const auto fv = s->fourier(t, K);
            const double err = std::fabs(fv.value - (*s)(t));
            worst_ratio = std::max(worst_ratio, err / bound);
            if (err > bound + 1e-10) ++violations;
        }
    }
    r.passed = violations == 0;
    r.margin = 1.0 - worst_ratio;
    r.detail = "max error/bound " + fmt(worst_ratio) + ", K=" + std::to_string(K);
    return r;
}

CheckResult check_sandwich(const std::vector<BlockWindow>& blocks, unsigned grid) {
    CheckResult r{"block_sandwich", true, 0.0, ""};
    std::uint64_t violations = 0;
    double worst_gap_error = 0.0;
    for (const auto& b : blocks) {
        for (unsigned i = 0; i < grid; ++i) {
            const double t = static_cast<double>(i) / grid;
            const double I = block_indicator(b.pattern, t);
            if (b.minus(t) > I + kSlack || I > b.plus(t) + kSlack) ++violations;
        }
        worst_gap_error = std::max(worst_gap_error, std::fabs(b.plus.mean() - b.minus.mean() - 2.0 / b.H));
    }
    r.passed = violations == 0 && worst_gap_error < kSlack;
    r.margin = kSlack - worst_gap_error;
    r.detail = std::to_string(violations) + " violations over " + std::to_string(blocks.size()) +
               " block windows; max |mean gap - 2/H| = " + fmt(worst_gap_error);
    return r;
}

CheckResult check_vaughan() {
    CheckResult r{"vaughan_identity", true, 0.0, ""};
    std::ostringstream detail;
    double worst = 0.0;
    bool ok = true;
    for (std::uint64_t P : {1000ull, 10000ull}) {
        const std::uint64_t P1 = 2 * P;
        const auto U = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(P)));
        const auto V = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(P)));
        const double tol = 1e-6 * static_cast<double>(P1 - P);
        auto curved = vaughan_decompose(P, P1, U, V, [](std::uint64_t n) {
            return 0.37 * std::pow(static_cast<double>(n), 1.5);
        });
        const double e1 = std::abs(curved.direct - curved.reconstructed);
        auto flat = vaughan_decompose(P, P1, U, V, [](std::uint64_t) { return 0.0; });
        double chebyshev = 0.0;
        for (std::uint64_t n = P + 1; n <= P1; ++n) chebyshev += mangoldt(n);
        const double e2 = std::abs(flat.reconstructed - Complex(chebyshev, 0.0));
        worst = std::max({worst, e1 / tol, e2 / tol});
        ok = ok && e1 <= tol && e2 <= tol;
        detail << "P=" << P << ": |direct-recon|=" << fmt(e1) << " |recon-psi|=" << fmt(e2)
               << " components=" << curved.components.size() << " C=" << fmt(curved.log_power_ratio)
               << (curved.constraints_feasible ? "" : " (cut constraints relaxed)") << "; ";
    }
    r.passed = ok;
    r.margin = 1.0 - worst;
    r.detail = detail.str();
    return r;
}

CheckResult check_exponents() {
    CheckResult r{"vinogradov_exponents", true, 0.0, ""};
    const auto e = vinogradov_exponents(1.0, 2);
    bool ok = e.R == 5 && e.L == 12 && std::fabs(e.eta - 1.0 / 576.0) < 1e-15;
    double min_eta = 1.0;
    for (unsigned k = 2; k <= 20; ++k) {
        for (int i = 1; i <= 200; ++i) {
            const double rho = k * i / 200.0;
            const auto x = vinogradov_exponents(rho, k);
            min_eta = std::min(min_eta, x.eta);
            ok = ok && x.eta > 0.0;
        }
    }
    r.passed = ok;
    r.margin = min_eta;
    r.detail = "(rho=1,k=2): R=" + std::to_string(e.R) + " L=" + std::to_string(e.L) +
               " eta=" + fmt(e.eta) + " (1/576=" + fmt(1.0 / 576.0) + "); min eta over grid " + fmt(min_eta);
    return r;
}

CheckResult check_dyadic() {
    CheckResult r{"dyadic_split", true, 0.0, ""};
    bool ok = true;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = 0.5 + unit(rng) * 100.0;
        const double b = a * (1.0 + unit(rng) * 1e4);
        const auto pieces = split_dyadic(a, b);
        ok = ok && pieces.front().lo == a && pieces.back().hi == b;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            ok = ok && pieces[i].hi <= 2.0 * pieces[i].lo && pieces[i].lo < pieces[i].hi;
            if (i > 0) ok = ok && pieces[i].lo == pieces[i - 1].hi;
        }
        ok = ok && static_cast<double>(pieces.size()) <= std::ceil(std::log2(b / a)) + 1.0;
    }
    r.passed = ok;
    r.margin = ok ? 0.0 : -1.0;
    r.detail = "1000 random intervals";
    return r;
}

}  // namespace

std::vector<CheckResult> run_machinery_checks(const CheckOptions& opts) {
    const auto windows = random_windows(opts.random_windows, opts.seed);
    const auto blocks = block_windows(opts.extra_H);

    std::vector<const SmoothedIndicator*> all;
    for (const auto& w : windows) all.push_back(&w.ind);
    for (const auto& b : blocks) {
        all.push_back(&b.minus);
        all.push_back(&b.plus);
    }
    std::vector<const SmoothedIndicator*> fourier_set;
    for (const auto& w : windows) fourier_set.push_back(&w.ind);
    for (std::size_t i = 0; i < 10 && i < blocks.size(); ++i) {
        fourier_set.push_back(&blocks[i].minus);
        fourier_set.push_back(&blocks[i].plus);
    }

    std::vector<CheckResult> out;
    out.push_back(check_psi_shape(windows, std::min(opts.grid_points, 20000u)));
    out.push_back(check_coefficients(all, opts.coefficient_range, opts.coefficient_scale));
    out.push_back(check_fourier_truncation(fourier_set, opts.fourier_grid_points, opts.fourier_cutoff));
    out.push_back(check_sandwich(blocks, opts.grid_points));
    out.push_back(check_vaughan());
    out.push_back(check_exponents());
    out.push_back(check_dyadic());
    return out;
}

}  // namespace ndf
