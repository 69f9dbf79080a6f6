// SPDX-License-Identifier: Apache-2.0
//
// Result records and their CSV/plot-script projections. One record per
// experiment data point; each experiment kind has a fixed column schema, so
// reruns with the same configuration and seed produce byte-identical files.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdx/cancellation.hpp"

namespace fdx {

struct ExperimentRecord {
    std::string experiment;        // "ratio", "rate" or "crlb"
    std::uint64_t config_hash = 0;
    Mode mode = Mode::kLinear;
    double snr_db = 0.0;
    int n_c = 0;
    int n = 0;
    double t_coh_s = 0.0;
    double ratio = 0.0;            // ratio: n/n_c; crlb: variance/bound
    double predicted_ratio = 0.0;
    double sinr_db = 0.0;
    double sinr_c_db = 0.0;
    double sinr_nc_db = 0.0;
    double c_cal = 0.0;            //  bits/s/Hz
    double c_nocal = 0.0;
    double variance = 0.0;         // per-tap Monte-Carlo estimator variance
    double bound = 0.0;            // per-tap lower bound
    std::string profile;           // crlb noise profile label
    int m = 0;                     // crlb taps per block
    int trials = 0;
    std::uint64_t seed = 0;
    std::string flags;             // "", "saturated", "infeasible"
};

// Number formatted with 12 significant digits, "." decimal separator.
std::string format_number(double x);

// Writes records (all of one experiment kind) to a CSV file: UTF-8, \n line
// endings, fixed per-kind header. Throws ConfigError on I/O failure and
// EstimationError on an empty or mixed-kind record set.
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

// Writes a standalone Python script that plots the CSV written next to it:
// ratio vs n_c (linear axes), rates vs coherence time (log x), or variance
// and bound vs sample count (log-log).
void emit_plot_script(const std::vector<ExperimentRecord>& records, const std::string& path);

}  // namespace fdx
