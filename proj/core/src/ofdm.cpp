// SPDX-License-Identifier: Apache-2.0

#include "fdx/ofdm.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <unsupported/Eigen/FFT>

#include "fdx/errors.hpp"

namespace fdx::waveform {

void validate(const OfdmParams& params) {
    if (params.n_subcarriers <= 0) throw ConfigError("ofdm: n_subcarriers must be positive");
    if (params.cp_len < 0) throw ConfigError("ofdm: cp_len must be non-negative");
    if (params.cp_len >= params.n_subcarriers)
        throw ConfigError("ofdm: cp_len must be smaller than n_subcarriers");
    if (params.oversampling <= 0) throw ConfigError("ofdm: oversampling must be positive");
    if (params.constellation != Constellation::kQam16)
        throw ConfigError("ofdm: unsupported constellation");
    if (params.bandwidth_hz <= 0) throw ConfigError("ofdm: bandwidth_hz must be positive");
    if (params.sample_rate_hz <= 0) throw ConfigError("ofdm: sample_rate_hz must be positive");
}

std::vector<int> active_subcarriers(const OfdmParams& params) {
    std::vector<int> bins;
    bins.reserve(params.n_subcarriers - 2);
    int nyquist = params.n_subcarriers / 2;
    for (int k = 1; k < params.n_subcarriers; ++k) {
        if (k == nyquist) continue;
        bins.push_back(k);
    }
    return bins;
}

namespace {

// 16-QAM levels, unit average symbol power.
constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)
const double kLevels[4] = {-3.0 * kQamScale, -1.0 * kQamScale, 1.0 * kQamScale,
                           3.0 * kQamScale};

cplx draw_qam16(Rng& rng) {
    return {kLevels[rng.below(4)], kLevels[rng.below(4)]};
}

}  // namespace

ComplexBaseband generate_ofdm_frames(const OfdmParams& params, int n_symbols, Rng& rng) {
    validate(params);
    if (n_symbols < 1) throw ConfigError("ofdm: n_symbols must be at least 1");

    const std::vector<int> bins = active_subcarriers(params);
    const int grid = params.n_subcarriers * params.oversampling;
    const int cp = params.cp_len * params.oversampling;
    const int sym_len = grid + cp;

    Eigen::FFT<double> fft;
    std::vector<cplx> freq(grid), time(grid);
    ComplexBaseband out;
    out.sample_rate_hz = params.sample_rate_hz;
    out.samples.resize(static_cast<std::size_t>(n_symbols) * sym_len);

    // Logical bin k maps to grid bin k for the positive half and wraps to the
    // top of the grid for the negative half, keeping the occupied band centered.
    const int half = params.n_subcarriers / 2;
    for (int s = 0; s < n_symbols; ++s) {
        std::fill(freq.begin(), freq.end(), cplx{0.0, 0.0});
        for (int k : bins) {
            int g = (k <= half) ? k : grid - (params.n_subcarriers - k);
            freq[static_cast<std::size_t>(g)] = draw_qam16(rng);
        }
        fft.inv(time, freq);
        cplx* dst = out.samples.data() + static_cast<std::size_t>(s) * sym_len;
        for (int i = 0; i < cp; ++i) dst[i] = time[static_cast<std::size_t>(grid - cp + i)];
        for (int i = 0; i < grid; ++i) dst[cp + i] = time[static_cast<std::size_t>(i)];
    }

    normalize_power_dbm(out, 0.0);
    return out;
}

ComplexBaseband generate_soi(const OfdmParams& params, double power_dbm, std::size_t n_samples,
                             Rng& rng) {
    validate(params);
    if (n_samples < 1) throw ConfigError("ofdm: n_samples must be at least 1");

    ComplexBaseband out;
    out.sample_rate_hz = params.sample_rate_hz;
    if (power_dbm == -std::numeric_limits<double>::infinity()) {
        out.samples.assign(n_samples, cplx{0.0, 0.0});
        return out;
    }
    int sym_len = params.symbol_len();
    int n_symbols = static_cast<int>((n_samples + sym_len - 1) / sym_len);
    out = generate_ofdm_frames(params, n_symbols, rng);
    out.samples.resize(n_samples);
    normalize_power_dbm(out, power_dbm);
    return out;
}

ComplexBaseband decimate(const ComplexBaseband& signal, int factor) {
    if (factor <= 0) throw ConfigError("decimate: factor must be positive");
    ComplexBaseband out;
    out.sample_rate_hz = signal.sample_rate_hz / factor;
    out.samples.reserve((signal.size() + factor - 1) / factor);
    for (std::size_t i = 0; i < signal.size(); i += static_cast<std::size_t>(factor))
        out.samples.push_back(signal.samples[i]);
    return out;
}

}  // namespace fdx::waveform
