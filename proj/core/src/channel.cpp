// SPDX-License-Identifier: Apache-2.0

#include "fdx/channel.hpp"

#include <algorithm>
#include <cmath>

#include "fdx/errors.hpp"

namespace fdx::channel {

MimoChannel draw_si_channel(const SiChannelParams& params, Rng& rng) {
    if (params.n_taps < 1) throw ConfigError("si channel: n_taps must be at least 1");
    if (params.tap_spacing < 1) throw ConfigError("si channel: tap_spacing must be at least 1");
    if (params.dominant_fraction < 0.0 || params.dominant_fraction > 1.0)
        throw ConfigError("si channel: dominant_fraction must be in [0, 1]");

    // separation_db is the aggregate TX-to-RX isolation: the summed SI power
    // from all transmitters at one receive antenna sits separation_db below
    // the per-chain transmit power, so each link carries a 1/n_tx share.
    const double energy =
        std::pow(10.0, -params.separation_db / 10.0) / static_cast<double>(params.n_tx);
    const int m = params.n_taps;

    // Exponential power profile for taps 1..m-1, normalized to the scattered
    // share of the link energy.
    std::vector<double> profile(static_cast<std::size_t>(m), 0.0);
    if (m > 1) {
        double sum = 0.0;
        for (int k = 1; k < m; ++k) {
            profile[static_cast<std::size_t>(k)] =
                std::pow(10.0, -params.decay_db_per_tap * (k - 1) / 10.0);
            sum += profile[static_cast<std::size_t>(k)];
        }
        const double scattered = (1.0 - params.dominant_fraction) * energy;
        for (int k = 1; k < m; ++k) profile[static_cast<std::size_t>(k)] *= scattered / sum;
    }
    const double dominant =
        (m > 1 ? params.dominant_fraction : 1.0) * energy;

    MimoChannel ch;
    ch.n_rx = params.n_rx;
    ch.n_tx = params.n_tx;
    ch.tap_spacing = params.tap_spacing;
    ch.responses.resize(static_cast<std::size_t>(params.n_rx));
    for (int i = 0; i < params.n_rx; ++i) {
        ch.responses[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(params.n_tx));
        for (int j = 0; j < params.n_tx; ++j) {
            FirResponse& h = ch.responses[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            h.taps.resize(static_cast<std::size_t>(m));
            h.taps[0] = std::sqrt(dominant);
            for (int k = 1; k < m; ++k)
                h.taps[static_cast<std::size_t>(k)] =
                    std::sqrt(profile[static_cast<std::size_t>(k)]) * rng.cgauss();
        }
    }
    return ch;
}

namespace {

void convolve_into(const FirResponse& h, int spacing, const ComplexBaseband& x,
                   std::vector<cplx>& acc) {
    const std::size_t n = std::min(x.size(), acc.size());
    for (std::size_t k = 0; k < h.taps.size(); ++k) {
        const cplx tap = h.taps[k];
        if (tap == cplx{0.0, 0.0}) continue;
        const std::size_t delay = k * static_cast<std::size_t>(spacing);
        if (delay >= n) break;
        for (std::size_t i = delay; i < n; ++i) acc[i] += tap * x.samples[i - delay];
    }
}

}  // namespace

std::vector<ComplexBaseband> propagate(const MimoChannel& channels,
                                       const std::vector<ComplexBaseband>& tx_signals) {
    if (static_cast<int>(tx_signals.size()) != channels.n_tx)
        throw EstimationError("propagate: tx signal count does not match channel grid");
    for (const ComplexBaseband& x : tx_signals)
        if (x.size() != tx_signals.front().size())
            throw EstimationError("propagate: tx signals must have equal length");

    std::vector<ComplexBaseband> out(static_cast<std::size_t>(channels.n_rx));
    for (int i = 0; i < channels.n_rx; ++i) {
        ComplexBaseband& y = out[static_cast<std::size_t>(i)];
        y.sample_rate_hz = tx_signals.front().sample_rate_hz;
        y.samples.assign(tx_signals.front().size(), cplx{0.0, 0.0});
        for (int j = 0; j < channels.n_tx; ++j)
            convolve_into(channels.link(i, j), channels.tap_spacing,
                          tx_signals[static_cast<std::size_t>(j)], y.samples);
    }
    return out;
}

ComplexBaseband rf_cancel(const ComplexBaseband& rx_input,
                          const std::vector<ComplexBaseband>& tx_rf, const MimoChannel& channels,
                          int rx_index, double suppression_db) {
    if (suppression_db < 0) throw ConfigError("rf_cancel: suppression_db must be non-negative");
    if (rx_index < 0 || rx_index >= channels.n_rx)
        throw EstimationError("rf_cancel: rx_index out of range");
    if (static_cast<int>(tx_rf.size()) != channels.n_tx)
        throw EstimationError("rf_cancel: tx signal count does not match channel grid");
    for (const ComplexBaseband& x : tx_rf)
        if (x.size() < rx_input.size())
            throw EstimationError("rf_cancel: tx signal shorter than the receive window");

    // Reconstructed SI at this receiver; subtracting alpha of it leaves a
    // residual of amplitude 10^(-s/20) relative to the original SI.
    std::vector<cplx> replica(rx_input.size(), cplx{0.0, 0.0});
    for (int j = 0; j < channels.n_tx; ++j)
        convolve_into(channels.link(rx_index, j), channels.tap_spacing,
                      tx_rf[static_cast<std::size_t>(j)], replica);

    const double alpha = 1.0 - std::pow(10.0, -suppression_db / 20.0);
    ComplexBaseband out = rx_input;
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] -= alpha * replica[i];
    return out;
}

}  // namespace fdx::channel
