// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fdx/channel.hpp"
#include "fdx/config.hpp"
#include "fdx/errors.hpp"
#include "fdx/ofdm.hpp"
#include "fdx/rf_chain.hpp"
#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

using namespace fdx;
using channel::MimoChannel;
using channel::SiChannelParams;

namespace {

ComplexBaseband gaussian(int n, unsigned seed) {
    Rng rng(seed);
    ComplexBaseband s;
    s.sample_rate_hz = 64e6;
    s.samples.resize(static_cast<std::size_t>(n));
    for (auto& v : s.samples) v = rng.cgauss();
    return s;
}

double link_energy(const MimoChannel& ch, int rx, int tx) {
    double e = 0.0;
    for (const auto& t : ch.link(rx, tx).taps) e += std::norm(t);
    return e;
}

ComplexBaseband naive_mimo_output(const MimoChannel& ch, int rx,
                                  const std::vector<ComplexBaseband>& tx) {
    ComplexBaseband out;
    out.sample_rate_hz = tx[0].sample_rate_hz;
    out.samples.assign(tx[0].size(), cplx{0.0, 0.0});
    for (int j = 0; j < ch.n_tx; ++j) {
        const auto& taps = ch.link(rx, j).taps;
        for (std::size_t k = 0; k < taps.size(); ++k) {
            const std::size_t delay = k * static_cast<std::size_t>(ch.tap_spacing);
            for (std::size_t t = delay; t < out.size(); ++t)
                out.samples[t] += taps[k] * tx[static_cast<std::size_t>(j)].samples[t - delay];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("aggregate coupling energy sits at the separation level") {
    SiChannelParams p;  // 2x2, 16 taps, 40 dB separation
    double acc = 0.0;
    const int draws = 400;
    for (int d = 0; d < draws; ++d) {
        Rng rng(static_cast<unsigned>(100 + d));
        auto ch = channel::draw_si_channel(p, rng);
        for (int rx = 0; rx < p.n_rx; ++rx)
            acc += link_energy(ch, rx, 0) + link_energy(ch, rx, 1);
    }
    const double mean_db = 10.0 * std::log10(acc / (2 * draws));
    CHECK(mean_db == doctest::Approx(-40.0).epsilon(0.012));
}

TEST_CASE("single deterministic tap carries the exact link energy") {
    SiChannelParams p;
    p.n_tx = 1;
    p.n_rx = 1;
    p.n_taps = 1;
    p.dominant_fraction = 1.0;
    Rng rng(1);
    auto ch = channel::draw_si_channel(p, rng);
    CHECK(ch.link(0, 0).taps.size() == 1u);
    CHECK(10.0 * std::log10(std::norm(ch.link(0, 0).taps[0])) ==
          doctest::Approx(-40.0).epsilon(1e-12));
}

TEST_CASE("different seeds draw different channels") {
    SiChannelParams p;
    Rng a(2), b(3);
    auto ca = channel::draw_si_channel(p, a);
    auto cb = channel::draw_si_channel(p, b);
    CHECK(ca.link(0, 0).taps != cb.link(0, 0).taps);
}

TEST_CASE("scattered taps follow the exponential decay profile") {
    SiChannelParams p;
    const int draws = 200;
    std::vector<double> mean_sq(static_cast<std::size_t>(p.n_taps), 0.0);
    for (int d = 0; d < draws; ++d) {
        Rng rng(static_cast<unsigned>(500 + d));
        auto ch = channel::draw_si_channel(p, rng);
        const auto& taps = ch.link(0, 0).taps;
        for (std::size_t k = 1; k < taps.size(); ++k) mean_sq[k] += std::norm(taps[k]);
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int pts = p.n_taps - 1;
    for (int k = 1; k < p.n_taps; ++k) {
        const double x = k, y = 10.0 * std::log10(mean_sq[static_cast<std::size_t>(k)] / draws);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.067));
}

TEST_CASE("single unit tap propagates the input unchanged") {
    MimoChannel ch;
    ch.n_rx = 1;
    ch.n_tx = 1;
    ch.tap_spacing = 1;
    ch.responses = {{channel::FirResponse{{cplx{1.0, 0.0}}}}};
    auto x = gaussian(128, 4);
    auto y = channel::propagate(ch, {x});
    CHECK(y.size() == 1u);
    CHECK(y[0].samples == x.samples);
}

TEST_CASE("delayed tap shifts the input") {
    MimoChannel ch;
    ch.n_rx = 1;
    ch.n_tx = 1;
    ch.tap_spacing = 1;
    ch.responses = {{channel::FirResponse{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}}}};
    auto x = gaussian(64, 5);
    auto y = channel::propagate(ch, {x})[0];
    CHECK(y.samples[0] == cplx{0.0, 0.0});
    for (std::size_t t = 1; t < y.size(); ++t) CHECK(y.samples[t] == x.samples[t - 1]);
}

TEST_CASE("propagation matches a naive convolution on the tap grid") {
    SiChannelParams p;
    p.tap_spacing = 4;
    Rng rng(6);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(500, 7), gaussian(500, 8)};
    auto got = channel::propagate(ch, tx);
    for (int rx = 0; rx < p.n_rx; ++rx) {
        auto want = naive_mimo_output(ch, rx, tx);
        double err = 0.0, ref = 0.0;
        for (std::size_t t = 0; t < want.size(); ++t) {
            err += std::norm(got[static_cast<std::size_t>(rx)].samples[t] - want.samples[t]);
            ref += std::norm(want.samples[t]);
        }
        CHECK(std::sqrt(err / ref) < 1e-12);
    }
}

TEST_CASE("propagation is linear in the input") {
    SiChannelParams p;
    Rng rng(9);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(300, 10), gaussian(300, 11)};
    auto base = channel::propagate(ch, tx);
    const cplx a{2.0, -1.0};
    for (auto& s : tx) {
        for (auto& v : s.samples) v *= a;
    }
    auto scaled = channel::propagate(ch, tx);
    for (int rx = 0; rx < p.n_rx; ++rx)
        for (std::size_t t = 0; t < base[0].size(); ++t)
            CHECK(std::abs(scaled[static_cast<std::size_t>(rx)].samples[t] -
                           a * base[static_cast<std::size_t>(rx)].samples[t]) < 1e-12);
}

TEST_CASE("zero suppression leaves the input untouched") {
    SiChannelParams p;
    Rng rng(12);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(256, 13), gaussian(256, 14)};
    auto si = channel::propagate(ch, tx);
    auto out = channel::rf_cancel(si[0], tx, ch, 0, 0.0);
    CHECK(out.samples == si[0].samples);
}

TEST_CASE("suppression drops pure coupling by the configured amount") {
    SiChannelParams p;
    Rng rng(15);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(4096, 16), gaussian(4096, 17)};
    auto si = channel::propagate(ch, tx);
    for (int rx = 0; rx < p.n_rx; ++rx) {
        auto out = channel::rf_cancel(si[static_cast<std::size_t>(rx)], tx, ch, rx, 30.0);
        const double drop = measure_power_dbm(si[static_cast<std::size_t>(rx)]) -
                            measure_power_dbm(out);
        CHECK(drop == doctest::Approx(30.0).epsilon(1e-9));
    }
}

TEST_CASE("components not in the replica pass through unchanged") {
    SiChannelParams p;
    Rng rng(18);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(512, 19), gaussian(512, 20)};
    auto si = channel::propagate(ch, tx);
    auto soi = gaussian(512, 21);
    auto mixed = si[0];
    for (std::size_t t = 0; t < mixed.size(); ++t) mixed.samples[t] += soi.samples[t];

    auto out_mixed = channel::rf_cancel(mixed, tx, ch, 0, 30.0);
    auto out_si = channel::rf_cancel(si[0], tx, ch, 0, 30.0);
    for (std::size_t t = 0; t < soi.size(); ++t)
        CHECK(std::abs(out_mixed.samples[t] - out_si.samples[t] - soi.samples[t]) < 1e-12);
}

TEST_CASE("coupled transmissions arrive at the expected level") {
    SimConfig cfg;
    auto params = cfg.ofdm_params();
    auto chp = cfg.channel_params();
    auto txp = cfg.tx_params();
    double acc = 0.0;
    int cnt = 0;
    for (int d = 0; d < 20; ++d) {
        Rng crng = make_stream(static_cast<std::uint64_t>(40 + d), 1, 0, StreamPurpose::kChannel);
        Rng drng = make_stream(static_cast<std::uint64_t>(40 + d), 1, 0, StreamPurpose::kTxData);
        auto ch = channel::draw_si_channel(chp, crng);
        std::vector<ComplexBaseband> rf_out;
        for (int tx = 0; tx < chp.n_tx; ++tx)
            rf_out.push_back(
                rf::transmit_chain(waveform::generate_ofdm_frames(params, 50, drng), txp).rf_out);
        auto si = channel::propagate(ch, rf_out);
        for (int rx = 0; rx < chp.n_rx; ++rx) {
            acc += measure_power_dbm(si[static_cast<std::size_t>(rx)]);
            ++cnt;
        }
    }
    CHECK(acc / cnt == doctest::Approx(-30.0).epsilon(0.016));
}

TEST_CASE("argument validation") {
    SiChannelParams p;
    Rng rng(22);
    auto ch = channel::draw_si_channel(p, rng);
    std::vector<ComplexBaseband> tx = {gaussian(64, 23), gaussian(64, 24)};
    auto si = channel::propagate(ch, tx);

    CHECK_THROWS_AS(channel::propagate(ch, {tx[0]}), EstimationError);
    CHECK_THROWS_AS(channel::rf_cancel(si[0], tx, ch, 5, 30.0), EstimationError);
    CHECK_THROWS_AS(channel::rf_cancel(si[0], tx, ch, 0, -1.0), ConfigError);
    CHECK_THROWS_AS(channel::rf_cancel(si[0], {tx[0]}, ch, 0, 30.0), EstimationError);

    p.n_taps = 0;
    CHECK_THROWS_AS(channel::draw_si_channel(p, rng), ConfigError);
    p.n_taps = 16;
    p.dominant_fraction = 1.5;
    CHECK_THROWS_AS(channel::draw_si_channel(p, rng), ConfigError);
}
