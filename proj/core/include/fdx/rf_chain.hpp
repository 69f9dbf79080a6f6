// SPDX-License-Identifier: Apache-2.0
//
// Analog impairment models for the transmit and receive chains: IQ imbalance,
// memoryless polynomial nonlinearity parameterized by intercept points,
// thermal noise and ADC quantization. Stage parameters come from the system
// component table; every stage is a pure transformation.

#pragma once

#include <optional>

#include "fdx/rng.hpp"
#include "fdx/signal.hpp"

namespace fdx::rf {

struct RfStageParams {
    double gain_db = 0.0;
    std::optional<double> iip2_dbm;
    std::optional<double> iip3_dbm;
    double nf_db = 0.0;  // informational; noise is injected once at RX input
};

struct IqImbalanceParams {
    double irr_db = 25.0;
};

struct AdcParams {
    int bits = 12;
    double papr_headroom_db = 10.0;
};

// y = g1*x + g2*conj(x), |g1| = 1, |g2| = 10^(-irr/20). The image phase is
// fixed at 45 degrees; only the rejection ratio is observable.
ComplexBaseband apply_iq_imbalance(const ComplexBaseband& signal, const IqImbalanceParams& p);

// y = G*(x + a2*|x|^2 + a3*x*|x|^2) with a3 = 1/P_iip3 and a2 = 1/sqrt(P_iip2)
// in linear power units, the standard intercept-point identities.
ComplexBaseband apply_nonlinear_stage(const ComplexBaseband& signal, const RfStageParams& p);

// Adds circular complex Gaussian noise of power
// -174 dBm/Hz + 10*log10(bandwidth_hz) + nf_db.
ComplexBaseband add_thermal_noise(const ComplexBaseband& signal, double nf_db,
                                  double bandwidth_hz, Rng& rng);

// Uniform mid-rise quantization of I and Q rails, full scale = complex RMS
// amplitude * 10^(headroom/20), samples beyond full scale clip. When
// `fullscale` is given it overrides the RMS-derived value (used to keep the
// operating point frozen across blocks of one trial).
ComplexBaseband quantize_adc(const ComplexBaseband& signal, const AdcParams& p,
                             std::optional<double> fullscale = std::nullopt);

struct TxChainParams {
    IqImbalanceParams iq;       // TX image rejection
    RfStageParams pa;           // power amplifier
    double tx_power_dbm = 10.0;
    bool iq_enabled = true;
    bool nonlin_enabled = true;
};

struct RxChainParams {
    RfStageParams lna;
    RfStageParams mixer;
    RfStageParams vga;          // gain_db unused; AGC picks it within the range below
    double vga_min_db = 0.0;
    double vga_max_db = 69.0;
    IqImbalanceParams iq;       // RX image rejection
    AdcParams adc;
    double nf_db = 4.1;         // composite receiver noise figure
    double bandwidth_hz = 12.5e6;
    bool iq_enabled = true;
    bool nonlin_enabled = true;
    bool noise_enabled = true;
    bool adc_enabled = true;
};

struct TxChainOutput {
    ComplexBaseband rf_out;  // at the configured transmit power
    ComplexBaseband tx_ref;  // rf_out re-normalized to unit power
};

// PA(IQ_tx(x)) driven so the PA output sits at tx_power_dbm (input backed off
// by the PA gain), then trimmed to the exact power.
TxChainOutput transmit_chain(const ComplexBaseband& x, const TxChainParams& p);

// AGC and quantizer operating point of one receiver, frozen after the first
// block of a trial so a trained estimate stays valid on later blocks.
struct FrontEndState {
    bool set = false;
    double vga_gain_db = 0.0;
    double adc_fullscale = 1.0;
    bool vga_clamped = false;
    double nominal_gain_db = 0.0;  // LNA + mixer + VGA small-signal gain
};

// ADC(VGA(IQ_rx(Mixer(LNA(y + noise))))). The VGA gain is chosen so the ADC
// input RMS lands 10^(-headroom/20) below full scale (taken as 1.0), clamped
// to the VGA range with a warning flag in `state`.
ComplexBaseband receive_chain(const ComplexBaseband& y_rf, const RxChainParams& p, Rng& noise_rng,
                              FrontEndState* state = nullptr);

}  // namespace fdx::rf
