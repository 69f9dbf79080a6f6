// SPDX-License-Identifier: Apache-2.0
//
// Self-interference coupling channels between each TX/RX antenna pair, plus
// the fixed-suppression RF cancellation stage. Taps live on a configurable
// grid: spacing 1 models a response sampled at the full rate, spacing equal
// to the oversampling factor places taps on the symbol-rate grid so the
// decimated estimation domain sees an exact FIR of the same length.

#pragma once

#include <vector>

#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

namespace fdx::channel {

struct FirResponse {
    std::vector<cplx> taps;
};

struct MimoChannel {
    // responses[i][j] couples TX j into RX i.
    std::vector<std::vector<FirResponse>> responses;
    int n_rx = 0;
    int n_tx = 0;
    int tap_spacing = 1;  // full-rate samples between consecutive taps

    const FirResponse& link(int rx, int tx) const { return responses.at(rx).at(tx); }
};

struct SiChannelParams {
    int n_tx = 2;
    int n_rx = 2;
    int n_taps = 16;
    int tap_spacing = 1;
    double separation_db = 40.0;        // aggregate per-RX SI energy below the TX power
    double dominant_fraction = 0.9;     // energy carried by the deterministic first tap
    double decay_db_per_tap = 2.0;      // exponential profile of the scattered taps
};

// Draws every link independently: a deterministic first tap with
// dominant_fraction of the link energy and circular Gaussian scattered taps
// on an exponential profile holding the rest. Each link carries an equal
// 1/n_tx share of the aggregate per-RX energy 10^(-separation_db/10).
MimoChannel draw_si_channel(const SiChannelParams& params, Rng& rng);

// output i = sum_j conv(h_ij, x_j), causal convolution truncated to the input
// length. Taps are applied at their grid positions (spacing * index).
std::vector<ComplexBaseband> propagate(const MimoChannel& channels,
                                       const std::vector<ComplexBaseband>& tx_signals);

// Subtracts an attenuated replica of the full reconstructed SI so its power
// drops by exactly suppression_db; anything not in the replica (signal of
// interest, noise) passes through unchanged.
ComplexBaseband rf_cancel(const ComplexBaseband& rx_input,
                          const std::vector<ComplexBaseband>& tx_rf, const MimoChannel& channels,
                          int rx_index, double suppression_db);

}  // namespace fdx::channel
