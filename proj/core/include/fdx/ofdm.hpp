// SPDX-License-Identifier: Apache-2.0
//
// OFDM burst generation. Symbols are built on an oversampled FFT grid
// (n_subcarriers * oversampling points) with the data confined to the logical
// subcarrier band, which gives an exactly band-limited waveform. The cyclic
// prefix is prepended per symbol, then the whole burst is normalized to the
// requested mean power.

#pragma once

#include <cstdint>
#include <vector>

#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

namespace fdx::waveform {

enum class Constellation { kQam16 };

struct OfdmParams {
    int n_subcarriers = 64;
    int cp_len = 16;                 // in symbol-rate samples
    Constellation constellation = Constellation::kQam16;
    int oversampling = 4;
    double bandwidth_hz = 12.5e6;    // receiver noise bandwidth (system table)
    double sample_rate_hz = 64e6;    // oversampled rate

    // Samples per OFDM symbol at the oversampled rate.
    int symbol_len() const { return (n_subcarriers + cp_len) * oversampling; }
    double symbol_rate_hz() const { return sample_rate_hz / oversampling; }
};

void validate(const OfdmParams& params);

// Data-bearing logical subcarrier indices: every bin except DC and the
// band-edge (Nyquist) bin, so the waveform fills the symbol-rate band. Indices
// are in [1, n_subcarriers) excluding n_subcarriers/2.
std::vector<int> active_subcarriers(const OfdmParams& params);

// n_symbols OFDM symbols of independent uniform 16-QAM data, mean power
// normalized to exactly 1.0 (0 dBm). Consumes rng in a fixed per-symbol order
// so a longer burst extends a shorter one generated from the same stream.
ComplexBaseband generate_ofdm_frames(const OfdmParams& params, int n_symbols, Rng& rng);

// Independent OFDM stream truncated to n_samples and scaled to power_dbm.
// power_dbm of -infinity yields an all-zero signal (calibration period).
ComplexBaseband generate_soi(const OfdmParams& params, double power_dbm, std::size_t n_samples,
                             Rng& rng);

// Keep every `factor`-th sample (phase 0). Used to bring signals from the
// oversampled rate down to the symbol-rate estimation domain.
ComplexBaseband decimate(const ComplexBaseband& signal, int factor);

}  // namespace fdx::waveform
