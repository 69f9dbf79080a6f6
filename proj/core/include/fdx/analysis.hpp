// SPDX-License-Identifier: Apache-2.0
//
// Closed-form accuracy bounds for the least-squares channel estimator and
// achievable-rate expressions for calibrated and uncalibrated operation.

#pragma once

#include <Eigen/Dense>

#include "fdx/cancellation.hpp"

namespace fdx::analysis {

// Per-sample variances of the disturbance seen by the estimator: thermal
// noise plus any uncancelled cross-traffic treated as white interference.
struct NoiseProfile {
    double sigma_n2 = 0.0;
    double sigma_r2 = 0.0;
};

// Exact estimator covariance (X^H X)^-1 * (sigma_n2 + sigma_r2).
Eigen::MatrixXcd crlb_exact(const cancel::ReferenceMatrix& x, const NoiseProfile& noise);

// Large-n per-tap variance (sigma_n2 + sigma_r2) / (n * p_ref).
double crlb_per_tap(double n, double p_ref, const NoiseProfile& noise);

// Sample ratio n / n_c at which estimation while serving a receive stream at
// the given SNR matches the accuracy of a dedicated calibration period.
double required_sample_ratio(double snr_linear);

struct RateScenario {
    double n_c = 0.0;          // calibration samples per coherence interval
    double t_coh_s = 0.0;      // channel coherence time, seconds
    double f_s_hz = 0.0;       // estimator sample rate, hertz
    double snr_linear = 0.0;   // signal-of-interest SNR, linear
    double sinr_c_linear = 0.0;   // post-cancellation SINR with calibration
    double sinr_nc_linear = 0.0;  // post-cancellation SINR without calibration
};

// Bidirectional rate without a calibration period: 2 log2(1 + sinr_nc).
double rate_no_calibration(double sinr_nc_linear);

// Rate with a calibration period occupying overhead = 2 n_c / (t_coh * f_s)
// of each coherence interval; throws InfeasibleError when overhead exceeds 1.
double rate_with_calibration(const RateScenario& s);

// Fraction of the coherence interval spent calibrating.
double calibration_overhead(const RateScenario& s);

}  // namespace fdx::analysis
