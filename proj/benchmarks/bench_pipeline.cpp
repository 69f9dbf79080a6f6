// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: burst generation, the analog chains,
// reference-matrix assembly, the one-shot solver and the streaming folder.

#include <benchmark/benchmark.h>

#include "fdx/cancellation.hpp"
#include "fdx/channel.hpp"
#include "fdx/config.hpp"
#include "fdx/experiment.hpp"
#include "fdx/ofdm.hpp"
#include "fdx/rf_chain.hpp"
#include "fdx/rng.hpp"

using namespace fdx;

namespace {

ComplexBaseband white_signal(int n, std::uint64_t seed) {
    Rng rng(seed);
    ComplexBaseband s;
    s.sample_rate_hz = 16e6;
    s.samples.resize(static_cast<std::size_t>(n));
    for (auto& v : s.samples) v = rng.cgauss();
    return s;
}

void bm_generate_ofdm_frames(benchmark::State& state) {
    SimConfig cfg;
    const int n_symbols = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Rng rng(7);
        auto burst = waveform::generate_ofdm_frames(cfg.ofdm_params(), n_symbols, rng);
        benchmark::DoNotOptimize(burst.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * n_symbols);
}
BENCHMARK(bm_generate_ofdm_frames)->Arg(16)->Arg(64);

void bm_transmit_chain(benchmark::State& state) {
    SimConfig cfg;
    Rng rng(7);
    auto burst = waveform::generate_ofdm_frames(cfg.ofdm_params(), 50, rng);
    for (auto _ : state) {
        auto out = rf::transmit_chain(burst, cfg.tx_params());
        benchmark::DoNotOptimize(out.rf_out.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(burst.size()));
}
BENCHMARK(bm_transmit_chain);

void bm_receive_chain(benchmark::State& state) {
    SimConfig cfg;
    auto sig = white_signal(16000, 9);
    sig.sample_rate_hz = cfg.sample_rate_hz;
    for (auto& v : sig.samples) v *= 1e-3;
    for (auto _ : state) {
        Rng noise(11);
        auto out = rf::receive_chain(sig, cfg.rx_params(), noise);
        benchmark::DoNotOptimize(out.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sig.size()));
}
BENCHMARK(bm_receive_chain);

void bm_propagate(benchmark::State& state) {
    SimConfig cfg;
    Rng rng(13);
    auto ch = channel::draw_si_channel(cfg.channel_params(), rng);
    std::vector<ComplexBaseband> tx;
    for (int j = 0; j < cfg.n_tx; ++j) tx.push_back(white_signal(16000, 20 + j));
    for (auto _ : state) {
        auto out = channel::propagate(ch, tx);
        benchmark::DoNotOptimize(out.front().samples.data());
    }
    state.SetItemsProcessed(state.iterations() * 16000);
}
BENCHMARK(bm_propagate);

void bm_build_reference_matrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<ComplexBaseband> refs = {white_signal(n, 31), white_signal(n, 32)};
    for (auto _ : state) {
        auto x = cancel::build_reference_matrix(refs, n, 16, Mode::kWidelyLinear);
        benchmark::DoNotOptimize(x.data.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_build_reference_matrix)->Arg(2000)->Arg(8000);

void bm_ls_estimate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<ComplexBaseband> refs = {white_signal(n, 41), white_signal(n, 42)};
    auto x = cancel::build_reference_matrix(refs, n, 16, Mode::kWidelyLinear);
    auto y = white_signal(x.rows(), 43);
    for (auto _ : state) {
        auto est = cancel::ls_estimate(x, y);
        benchmark::DoNotOptimize(est.taps.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_ls_estimate)->Arg(2000)->Arg(8000);

void bm_sequential_ls(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<ComplexBaseband> refs = {white_signal(n, 51), white_signal(n, 52)};
    auto y = white_signal(n, 53);
    for (auto _ : state) {
        cancel::SequentialLs seq(refs, y, 16, Mode::kWidelyLinear);
        seq.advance_to(n);
        auto est = seq.solve();
        benchmark::DoNotOptimize(est.taps.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_sequential_ls)->Arg(2000)->Arg(8000);

void bm_single_trial(benchmark::State& state) {
    SimConfig cfg;
    cfg.measure_symbols = 10;
    for (auto _ : state) {
        Rng stream = make_stream(1, experiment::kTrialExperimentId, 0, StreamPurpose::kGeneric);
        auto result = experiment::run_single_trial(cfg, 1000, true, stream);
        benchmark::DoNotOptimize(result.sinr_db);
    }
}
BENCHMARK(bm_single_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
