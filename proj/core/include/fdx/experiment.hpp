// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo experiment drivers: single-trial pipeline runs, the
// SINR-matching sample-size search, the coherence-time rate sweep, and
// estimator-variance validation against the closed-form bound. Trials draw
// from purpose-scoped streams keyed by (seed, experiment, trial), so results
// are independent of worker count and execution order.

#pragma once

#include <cstdint>
#include <vector>

#include "fdx/config.hpp"
#include "fdx/csv.hpp"
#include "fdx/rng.hpp"

namespace fdx::experiment {

// Stream-derivation ids; stable across releases, part of reproducibility.
inline constexpr std::uint64_t kTrialExperimentId = 1;
inline constexpr std::uint64_t kRatioExperimentId = 2;
inline constexpr std::uint64_t kRateExperimentId = 3;
inline constexpr std::uint64_t kCrlbExperimentId = 4;

struct TrialResult {
    double sinr_db = 0.0;
    // Distance between the estimate and the first-order linear response of
    // the coupling path; exact when impairments are disabled.
    double estimate_error_norm = 0.0;
};

// One full pipeline pass: frames -> transmit chains -> coupling channels
// (+ signal of interest unless calibrating) -> RF cancellation -> receive
// chain -> estimate over n estimation-domain samples -> SINR on a fresh
// full-duplex block with the trained estimate, averaged over receivers.
TrialResult run_single_trial(const SimConfig& cfg, int n, bool with_soi, Rng& rng_stream);

// For each n_c: mean SINR of calibration-trained estimates, then a bisection
// over a geometric sample-count ladder in no-calibration mode until the mean
// SINR matches within cfg.sinr_match_tol_db. Unmatchable targets are flagged
// `saturated` at the ladder top.
std::vector<ExperimentRecord> run_ratio_experiment(const SimConfig& cfg,
                                                   const std::vector<int>& nc_values,
                                                   int trials);

// For each n: mean calibrated and uncalibrated SINR at the same sample count,
// then both rate expressions across the coherence-time grid. Overhead beyond
// one coherence interval flags the row `infeasible`.
std::vector<ExperimentRecord> run_rate_experiment(const SimConfig& cfg,
                                                  const std::vector<int>& n_values,
                                                  const std::vector<double>& t_coh_grid,
                                                  int trials);

// Monte-Carlo per-tap variance of the least-squares estimator on a synthetic
// white reference versus the closed-form bound, for a noise-only profile and
// a noise-plus-interference profile.
std::vector<ExperimentRecord> run_crlb_validation(const SimConfig& cfg,
                                                  const std::vector<int>& n_grid, int trials);

// Logarithmically spaced grid, endpoints included.
std::vector<double> log_grid(double lo, double hi, int points);

// Geometric sample-count ladder from min(nc_values) to cap * max(nc_values),
// always containing every nc value; the search domain of the ratio bisection.
std::vector<int> build_search_ladder(const std::vector<int>& nc_values, double spacing,
                                     double cap);

}  // namespace fdx::experiment
