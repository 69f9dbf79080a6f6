// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "fdx/config.hpp"
#include "fdx/errors.hpp"
#include "fdx/ofdm.hpp"
#include "fdx/rf_chain.hpp"
#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

using namespace fdx;

namespace {

ComplexBaseband tone(int n, int bin, double amp) {
    ComplexBaseband s;
    s.sample_rate_hz = 64e6;
    s.samples.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        s.samples[static_cast<std::size_t>(t)] =
            amp * std::polar(1.0, 2.0 * M_PI * bin * t / n);
    return s;
}

ComplexBaseband gaussian(int n, unsigned seed, double amp = 1.0) {
    Rng rng(seed);
    ComplexBaseband s;
    s.sample_rate_hz = 64e6;
    s.samples.resize(static_cast<std::size_t>(n));
    for (auto& v : s.samples) v = amp * rng.cgauss();
    return s;
}

double bin_power_db(const ComplexBaseband& s, int bin) {
    const int n = static_cast<int>(s.size());
    cplx acc{0.0, 0.0};
    for (int t = 0; t < n; ++t)
        acc += s.samples[static_cast<std::size_t>(t)] *
               std::polar(1.0, -2.0 * M_PI * bin * t / n);
    return 10.0 * std::log10(std::norm(acc / static_cast<double>(n)));
}

double sqnr_db(const ComplexBaseband& x, const ComplexBaseband& y) {
    double perr = 0.0, psig = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        perr += std::norm(y.samples[i] - x.samples[i]);
        psig += std::norm(x.samples[i]);
    }
    return 10.0 * std::log10(psig / perr);
}

}  // namespace

TEST_CASE("infinite image rejection is an identity") {
    auto x = gaussian(256, 1);
    rf::IqImbalanceParams p;
    p.irr_db = std::numeric_limits<double>::infinity();
    auto y = rf::apply_iq_imbalance(x, p);
    CHECK(y.samples == x.samples);
    p.irr_db = 0.0;
    CHECK_THROWS_AS(rf::apply_iq_imbalance(x, p), ConfigError);
}

TEST_CASE("single tone image sits at the configured rejection") {
    auto x = tone(1024, 100, 1.0);
    rf::IqImbalanceParams p;
    p.irr_db = 25.0;
    auto y = rf::apply_iq_imbalance(x, p);
    CHECK(bin_power_db(y, 100) - bin_power_db(y, 1024 - 100) ==
          doctest::Approx(25.0).epsilon(0.004));
}

TEST_CASE("cascaded imbalances are dominated by the worst stage") {
    auto x = tone(1024, 100, 1.0);
    rf::IqImbalanceParams first{25.0}, second{60.0};
    auto y = rf::apply_iq_imbalance(rf::apply_iq_imbalance(x, first), second);
    const double image = bin_power_db(y, 100) - bin_power_db(y, 1024 - 100);
    CHECK(image == doctest::Approx(25.0).epsilon(0.02));
}

TEST_CASE("nonlinear stage without intercept points is pure gain") {
    auto x = gaussian(512, 2);
    rf::RfStageParams p;
    p.gain_db = 7.0;
    auto y = rf::apply_nonlinear_stage(x, p);
    const double g = std::pow(10.0, 7.0 / 20.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y.samples[i] - g * x.samples[i]) < 1e-12);
}

TEST_CASE("two-tone third-order product matches the intercept point") {
    SimConfig cfg;
    const int n = 4096, b1 = 101, b2 = 113;
    const double ptone_dbm = -33.0;
    const double amp = std::pow(10.0, ptone_dbm / 20.0);
    ComplexBaseband x = tone(n, b1, amp);
    const ComplexBaseband other = tone(n, b2, amp);
    for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += other.samples[i];

    auto y = rf::apply_nonlinear_stage(x, cfg.tx_params().pa);
    const double delta = bin_power_db(y, 2 * b1 - b2) - bin_power_db(y, b1);
    CHECK(delta == doctest::Approx(2.0 * (ptone_dbm - cfg.pa_iip3_dbm)).epsilon(0.006));
}

TEST_CASE("nonlinear stage is transparent at small signal levels") {
    SimConfig cfg;
    auto x = gaussian(20000, 3, std::pow(10.0, -60.0 / 20.0));
    auto y = rf::apply_nonlinear_stage(x, cfg.tx_params().pa);
    const double dev =
        measure_power_dbm(y) - measure_power_dbm(x) - cfg.pa_gain_db;
    CHECK(std::abs(dev) < 0.01);
}

TEST_CASE("thermal noise level and scaling") {
    ComplexBaseband zeros;
    zeros.sample_rate_hz = 64e6;
    zeros.samples.assign(200000, cplx{0.0, 0.0});

    Rng r1(4);
    auto floor_sig = rf::add_thermal_noise(zeros, 4.1, 12.5e6, r1);
    CHECK(measure_power_dbm(floor_sig) == doctest::Approx(-98.93).epsilon(0.002));

    Rng r2(5);
    auto unit_bw = rf::add_thermal_noise(zeros, 0.0, 1.0, r2);
    CHECK(measure_power_dbm(unit_bw) == doctest::Approx(-174.0).epsilon(0.002));

    Rng r3(6);
    auto doubled = rf::add_thermal_noise(zeros, 0.0, 2.0, r3);
    CHECK(measure_power_dbm(doubled) - measure_power_dbm(unit_bw) ==
          doctest::Approx(3.01).epsilon(0.03));

    Rng r4(7);
    auto high_nf = rf::add_thermal_noise(zeros, 10.0, 1.0, r4);
    CHECK(measure_power_dbm(high_nf) - measure_power_dbm(unit_bw) ==
          doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("quantizer accuracy per bit width") {
    auto x = gaussian(10000, 8);
    rf::AdcParams p;  // 12 bits, 10 dB headroom

    auto y12 = rf::quantize_adc(x, p);
    CHECK(sqnr_db(x, y12) == doctest::Approx(64.0).epsilon(0.016));

    p.bits = 24;
    CHECK(sqnr_db(x, rf::quantize_adc(x, p)) > 100.0);

    p.bits = 6;
    const double six = sqnr_db(x, rf::quantize_adc(x, p));
    CHECK(sqnr_db(x, y12) - six == doctest::Approx(6.02 * 6).epsilon(0.014));

    p.bits = 8;
    const double eight = sqnr_db(x, rf::quantize_adc(x, p));
    CHECK((sqnr_db(x, y12) - eight) / 4.0 == doctest::Approx(6.02).epsilon(0.083));

    p.bits = 30;
    CHECK_THROWS_AS(rf::quantize_adc(x, p), ConfigError);
}

TEST_CASE("quantizer passes silence through and honors a fullscale override") {
    ComplexBaseband zeros;
    zeros.sample_rate_hz = 1.0;
    zeros.samples.assign(64, cplx{0.0, 0.0});
    auto out = rf::quantize_adc(zeros, rf::AdcParams{});
    CHECK(out.samples == zeros.samples);

    auto x = gaussian(4096, 9);
    rf::AdcParams p;
    const double fs = 0.25;
    auto clipped = rf::quantize_adc(x, p, fs);
    for (const auto& v : clipped.samples) {
        CHECK(std::abs(v.real()) <= fs);
        CHECK(std::abs(v.imag()) <= fs);
    }
}

TEST_CASE("transmit chain powers and image level") {
    SimConfig cfg;
    Rng rng(10);
    auto burst = waveform::generate_ofdm_frames(cfg.ofdm_params(), 20, rng);
    auto out = rf::transmit_chain(burst, cfg.tx_params());
    CHECK(measure_power_dbm(out.rf_out) == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(measure_power_dbm(out.tx_ref) == doctest::Approx(0.0).epsilon(1e-9));

    auto t = tone(4096, 300, 1.0);
    auto tout = rf::transmit_chain(t, cfg.tx_params());
    const double image = bin_power_db(tout.rf_out, 300) - bin_power_db(tout.rf_out, 4096 - 300);
    CHECK(image == doctest::Approx(25.0).epsilon(0.008));
}

TEST_CASE("receive chain with impairments off is a pure gain") {
    SimConfig cfg;
    cfg.rx_iq_enabled = false;
    cfg.rx_nonlin_enabled = false;
    cfg.noise_enabled = false;
    cfg.adc_enabled = false;
    auto rxp = cfg.rx_params();

    auto x = gaussian(4096, 11, 1e-3);
    Rng noise(12);
    rf::FrontEndState fe;
    auto y = rf::receive_chain(x, rxp, noise, &fe);
    CHECK(fe.set);
    const double g = std::pow(10.0, fe.nominal_gain_db / 20.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y.samples[i] - g * x.samples[i]) < 1e-9 * g);
}

TEST_CASE("receive image rejection") {
    SimConfig cfg;
    cfg.noise_enabled = false;
    cfg.adc_enabled = false;
    auto rxp = cfg.rx_params();
    auto x = tone(4096, 300, 1e-3);
    Rng noise(13);
    rf::FrontEndState fe;
    auto y = rf::receive_chain(x, rxp, noise, &fe);
    const double image = bin_power_db(y, 300) - bin_power_db(y, 4096 - 300);
    CHECK(image == doctest::Approx(60.0).epsilon(0.008));
}

TEST_CASE("signal of interest alone reaches the detector at the design SNR") {
    SimConfig cfg;
    auto rxp = cfg.rx_params();
    Rng srng(14);
    auto soi = waveform::generate_soi(cfg.ofdm_params(), cfg.soi_power_dbm, 160000, srng);
    ComplexBaseband zeros;
    zeros.sample_rate_hz = 64e6;
    zeros.samples.assign(soi.size(), cplx{0.0, 0.0});

    rf::FrontEndState fe;
    Rng n1(15);
    auto y1 = rf::receive_chain(soi, rxp, n1, &fe);
    Rng n0(15);
    auto y0 = rf::receive_chain(zeros, rxp, n0, &fe);
    const double snr_lin =
        waveform::measure_power_linear(y1) / waveform::measure_power_linear(y0) - 1.0;
    CHECK(10.0 * std::log10(snr_lin) == doctest::Approx(cfg.snr_db()).epsilon(0.022));
}

TEST_CASE("gain control clamps on very weak input") {
    SimConfig cfg;
    cfg.noise_enabled = false;
    cfg.adc_enabled = false;
    auto rxp = cfg.rx_params();
    auto x = gaussian(2048, 16, std::pow(10.0, -150.0 / 20.0));
    Rng noise(17);
    rf::FrontEndState fe;
    rf::receive_chain(x, rxp, noise, &fe);
    CHECK(fe.vga_clamped);
    CHECK(fe.vga_gain_db == doctest::Approx(rxp.vga_max_db));
}

TEST_CASE("frozen front end state reuses gain and fullscale") {
    SimConfig cfg;
    auto rxp = cfg.rx_params();
    auto x = gaussian(8192, 18, 1e-3);
    rf::FrontEndState fe;
    Rng n1(19);
    rf::receive_chain(x, rxp, n1, &fe);
    const double gain = fe.vga_gain_db, fs = fe.adc_fullscale;

    auto weaker = x;
    for (auto& v : weaker.samples) v *= 0.1;
    Rng n2(20);
    rf::receive_chain(weaker, rxp, n2, &fe);
    CHECK(fe.vga_gain_db == gain);
    CHECK(fe.adc_fullscale == fs);
}
