// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "fdx/errors.hpp"
#include "fdx/ofdm.hpp"
#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

using namespace fdx;
using waveform::OfdmParams;

namespace {

OfdmParams defaults() { return OfdmParams{}; }

double autocorr_mag(const ComplexBaseband& s, std::size_t lag) {
    cplx acc{0.0, 0.0};
    double p = 0.0;
    for (std::size_t t = 0; t + lag < s.size(); ++t) {
        acc += s.samples[t] * std::conj(s.samples[t + lag]);
        p += std::norm(s.samples[t]);
    }
    return std::abs(acc) / p;
}

}  // namespace

TEST_CASE("symbol geometry") {
    OfdmParams p = defaults();
    CHECK(p.symbol_len() == 320);
    CHECK(p.symbol_rate_hz() == doctest::Approx(16e6));

    Rng rng(1);
    auto burst = waveform::generate_ofdm_frames(p, 7, rng);
    CHECK(burst.size() == 7u * 320u);
    CHECK(burst.sample_rate_hz == doctest::Approx(64e6));
}

TEST_CASE("active subcarriers skip DC and the band edge") {
    auto bins = waveform::active_subcarriers(defaults());
    CHECK(bins.size() == 62u);
    std::set<int> s(bins.begin(), bins.end());
    CHECK(s.count(0) == 0u);
    CHECK(s.count(32) == 0u);
    CHECK(*s.begin() >= 1);
    CHECK(*s.rbegin() <= 63);
}

TEST_CASE("burst power is exactly unit mean square") {
    Rng rng(2);
    auto burst = waveform::generate_ofdm_frames(defaults(), 50, rng);
    CHECK(waveform::measure_power_linear(burst) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(measure_power_dbm(burst) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("longer bursts extend shorter ones from the same stream") {
    Rng a(3), b(3);
    auto small = waveform::generate_ofdm_frames(defaults(), 3, a);
    auto big = waveform::generate_ofdm_frames(defaults(), 5, b);
    const cplx scale = big.samples[0] / small.samples[0];
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(std::abs(big.samples[i] - scale * small.samples[i]) < 1e-12);
    CHECK(std::abs(scale.imag()) < 1e-12);
}

TEST_CASE("fourth moment matches a circular Gaussian") {
    double acc = 0.0;
    for (unsigned seed = 0; seed < 12; ++seed) {
        Rng rng(seed);
        auto burst = waveform::generate_ofdm_frames(defaults(), 20, rng);
        acc += waveform::measure_kurtosis(burst);
    }
    CHECK(acc / 12.0 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("waveform is circular") {
    Rng rng(4);
    auto burst = waveform::generate_ofdm_frames(defaults(), 50, rng);
    CHECK(waveform::measure_circularity(burst) < 0.05);
}

TEST_CASE("circularity of constructed references") {
    Rng rng(5);
    ComplexBaseband a;
    a.sample_rate_hz = 1.0;
    a.samples.resize(10000);
    for (auto& s : a.samples) s = rng.cgauss();

    ComplexBaseband real_sig = a;
    for (auto& s : real_sig.samples) s = cplx{s.real(), 0.0};
    CHECK(waveform::measure_circularity(real_sig) == doctest::Approx(1.0).epsilon(1e-12));

    ComplexBaseband mixed = a;
    for (auto& s : mixed.samples) s += 0.5 * std::conj(s);
    CHECK(waveform::measure_circularity(mixed) == doctest::Approx(0.8).epsilon(0.03));
}

TEST_CASE("burst is white beyond one symbol of lag") {
    Rng rng(6);
    auto burst = waveform::generate_ofdm_frames(defaults(), 100, rng);
    CHECK(autocorr_mag(burst, 320) < 0.05);
    CHECK(autocorr_mag(burst, 640) < 0.05);
}

TEST_CASE("independent streams are uncorrelated") {
    Rng a = make_stream(9, 1, 0, StreamPurpose::kTxData);
    Rng b = make_stream(9, 1, 0, StreamPurpose::kSoi);
    auto x = waveform::generate_ofdm_frames(defaults(), 32, a);
    auto y = waveform::generate_ofdm_frames(defaults(), 32, b);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < 10000; ++i) acc += x.samples[i] * std::conj(y.samples[i]);
    CHECK(std::abs(acc) / 10000.0 < 0.02);
}

TEST_CASE("generation is deterministic per stream") {
    Rng a(7), b(7), c(8);
    auto x = waveform::generate_ofdm_frames(defaults(), 4, a);
    auto y = waveform::generate_ofdm_frames(defaults(), 4, b);
    auto z = waveform::generate_ofdm_frames(defaults(), 4, c);
    CHECK(x.samples == y.samples);
    CHECK(x.samples != z.samples);
}

TEST_CASE("signal of interest hits the requested power") {
    Rng rng(10);
    auto soi = waveform::generate_soi(defaults(), -84.9, 20000, rng);
    CHECK(soi.size() == 20000u);
    CHECK(measure_power_dbm(soi) == doctest::Approx(-84.9).epsilon(1e-9));
}

TEST_CASE("minus-infinity signal power yields silence") {
    Rng rng(11);
    auto soi = waveform::generate_soi(
        defaults(), -std::numeric_limits<double>::infinity(), 500, rng);
    CHECK(soi.size() == 500u);
    CHECK(std::all_of(soi.samples.begin(), soi.samples.end(),
                      [](cplx v) { return v == cplx{0.0, 0.0}; }));
}

TEST_CASE("power measurement shifts with amplitude scaling") {
    Rng rng(12);
    ComplexBaseband s;
    s.sample_rate_hz = 1.0;
    s.samples.resize(4096);
    for (auto& v : s.samples) v = rng.cgauss();
    const double base = measure_power_dbm(s);
    for (auto& v : s.samples) v *= std::sqrt(10.0);
    CHECK(measure_power_dbm(s) == doctest::Approx(base + 10.0).epsilon(1e-9));

    waveform::normalize_power_dbm(s, -84.9);
    CHECK(measure_power_dbm(s) == doctest::Approx(-84.9).epsilon(1e-12));

    ComplexBaseband empty;
    CHECK_THROWS_AS(measure_power_dbm(empty), EstimationError);
}

TEST_CASE("decimation keeps phase-zero samples") {
    ComplexBaseband s;
    s.sample_rate_hz = 64e6;
    for (int i = 0; i < 12; ++i) s.samples.push_back(cplx{static_cast<double>(i), 0.0});

    auto d = waveform::decimate(s, 4);
    CHECK(d.size() == 3u);
    CHECK(d.samples[0] == cplx{0.0, 0.0});
    CHECK(d.samples[1] == cplx{4.0, 0.0});
    CHECK(d.samples[2] == cplx{8.0, 0.0});
    CHECK(d.sample_rate_hz == doctest::Approx(16e6));

    auto same = waveform::decimate(s, 1);
    CHECK(same.samples == s.samples);
    CHECK_THROWS_AS(waveform::decimate(s, 0), ConfigError);
}

TEST_CASE("parameter validation") {
    OfdmParams p = defaults();
    p.n_subcarriers = 0;
    CHECK_THROWS_AS(waveform::validate(p), ConfigError);
    p = defaults();
    p.cp_len = 64;
    CHECK_THROWS_AS(waveform::validate(p), ConfigError);
    p = defaults();
    p.oversampling = 0;
    CHECK_THROWS_AS(waveform::validate(p), ConfigError);
    Rng rng(1);
    CHECK_THROWS_AS(waveform::generate_ofdm_frames(defaults(), 0, rng), ConfigError);
}

TEST_CASE("stream derivation separates purposes and trials") {
    const auto s1 = derive_seed(1, 2, 3, StreamPurpose::kNoise);
    CHECK(s1 == derive_seed(1, 2, 3, StreamPurpose::kNoise));
    CHECK(s1 != derive_seed(1, 2, 3, StreamPurpose::kSoi));
    CHECK(s1 != derive_seed(1, 2, 4, StreamPurpose::kNoise));
    CHECK(s1 != derive_seed(1, 3, 3, StreamPurpose::kNoise));
    CHECK(s1 != derive_seed(2, 2, 3, StreamPurpose::kNoise));
}

TEST_CASE("generator moments") {
    Rng rng(13);
    double m1 = 0.0, m2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gauss();
        m1 += g;
        m2 += g * g;
    }
    CHECK(std::abs(m1 / n) < 0.02);
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));

    cplx c1{0.0, 0.0}, c2{0.0, 0.0};
    double cp = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx z = rng.cgauss();
        c1 += z;
        c2 += z * z;
        cp += std::norm(z);
    }
    CHECK(std::abs(c1) / n < 0.02);
    CHECK(std::abs(c2) / n < 0.02);
    CHECK(cp / n == doctest::Approx(1.0).epsilon(0.02));

    for (int i = 0; i < 1000; ++i) CHECK(rng.below(8) < 8u);
}
