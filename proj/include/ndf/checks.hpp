#pragma once

#include <string>
#include <vector>

namespace ndf {

struct CheckResult {
    std::string name;
    bool passed = false;
    double margin = 0.0;  // measured slack; negative when violated
    std::string detail;
};

struct CheckOptions {
    unsigned seed = 20120;
    // Multiplies every Fourier coefficient before the bound check (fault injection).
    double coefficient_scale = 1.0;
    unsigned random_windows = 20;
    unsigned grid_points = 100000;
    unsigned fourier_grid_points = 10000;
    unsigned fourier_cutoff = 1000;
    unsigned coefficient_range = 10000;
    // Extra smoothing level for the base-10 single-digit block windows; 0 adds none.
    double extra_H = 0.0;
};

/// Runs the smoothing, Vaughan, exponent and interval-splitting invariants.
std::vector<CheckResult> run_machinery_checks(const CheckOptions& opts = {});

}  // namespace ndf
