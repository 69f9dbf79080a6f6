// SPDX-License-Identifier: Apache-2.0
//
// Flat key/value simulation configuration covering the waveform, link budget,
// channel statistics, analog impairments, and experiment controls. Unknown or
// malformed keys are rejected; serialize() and parse() round-trip exactly.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdx/cancellation.hpp"
#include "fdx/channel.hpp"
#include "fdx/ofdm.hpp"
#include "fdx/rf_chain.hpp"

namespace fdx {

enum class EstimationRate { kSymbol, kOversampled };

struct SimConfig {
    // waveform
    int n_subcarriers = 64;
    int cp_len = 16;
    std::string constellation = "qam16";
    int oversampling = 4;
    double bandwidth_hz = 12.5e6;
    double sample_rate_hz = 64e6;
    EstimationRate estimation_rate = EstimationRate::kSymbol;

    // link budget
    double tx_power_dbm = 10.0;
    double antenna_separation_db = 40.0;
    double rf_cancellation_db = 30.0;
    double soi_power_dbm = -84.9;

    // self-interference channel
    int n_tx = 2;
    int n_rx = 2;
    int channel_len_m = 16;
    double channel_dominant_fraction = 0.9;
    double channel_decay_db_per_tap = 2.0;

    // transmitter impairments
    double tx_irr_db = 25.0;
    double pa_gain_db = 27.0;
    double pa_iip3_dbm = 15.0;

    // receiver impairments
    double lna_gain_db = 25.0;
    double lna_iip3_dbm = 5.0;
    double mixer_gain_db = 6.0;
    double mixer_iip2_dbm = 50.0;
    double mixer_iip3_dbm = 15.0;
    double vga_gain_min_db = 0.0;
    double vga_gain_max_db = 69.0;
    double vga_iip2_dbm = 50.0;
    double vga_iip3_dbm = 20.0;
    double rx_irr_db = 60.0;
    double rx_nf_db = 4.1;
    int adc_bits = 12;
    double adc_headroom_db = 10.0;

    // impairment switches
    bool tx_iq_enabled = true;
    bool tx_nonlin_enabled = true;
    bool rx_iq_enabled = true;
    bool rx_nonlin_enabled = true;
    bool noise_enabled = true;
    bool adc_enabled = true;

    // harness
    Mode mode = Mode::kLinear;
    std::uint64_t seed = 1;
    int trials = 50;
    int parallel = 1;

    // experiment grids
    std::vector<int> ratio_nc_values = {500, 1000, 2000};
    double ratio_search_cap = 60.0;  // ladder top as a multiple of max(n_c)
    std::vector<int> rate_n_values = {500, 5000};
    double rate_tcoh_min_s = 1e-5;
    double rate_tcoh_max_s = 1e-1;
    int rate_tcoh_points = 25;
    int crlb_m = 8;
    int crlb_trials = 1000;
    std::vector<int> crlb_n_values = {512, 1024, 2048, 4096, 8192, 16384};
    int trial_n = 1000;
    bool trial_with_soi = true;

    // measurement controls
    int measure_symbols = 100;
    double sinr_match_tol_db = 0.1;
    double ladder_spacing = 1.015;
    bool soi_timing_random = true;

    bool operator==(const SimConfig&) const = default;

    // derived quantities
    double noise_floor_dbm() const;
    double snr_db() const;
    double snr_linear() const;
    int est_decimation() const;      // raw samples per estimation-domain sample
    double est_rate_hz() const;
    int est_samples_per_symbol() const;

    // parameter blocks for the signal-path modules
    waveform::OfdmParams ofdm_params() const;
    channel::SiChannelParams channel_params() const;
    rf::TxChainParams tx_params() const;
    rf::RxChainParams rx_params() const;

    void validate() const;           // throws ConfigError
    std::string serialize() const;
    std::uint64_t hash() const;      // FNV-1a over the serialized text
};

// Parses flat `key = value` text with `#` comments. Unknown keys, duplicate
// keys, and malformed values throw ConfigError.
SimConfig parse_config(const std::string& text);

// Reads and parses a config file; missing or unreadable files throw
// ConfigError with the path in the message.
SimConfig load_config(const std::string& path);

std::string to_string(Mode mode);
std::string to_string(EstimationRate rate);

}  // namespace fdx
