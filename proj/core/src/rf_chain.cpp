// SPDX-License-Identifier: Apache-2.0

#include "fdx/rf_chain.hpp"

#include <algorithm>
#include <cmath>

#include "fdx/errors.hpp"

namespace fdx::rf {

namespace {

double db_to_linear_power(double db) { return std::pow(10.0, db / 10.0); }
double db_to_linear_amp(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace

ComplexBaseband apply_iq_imbalance(const ComplexBaseband& signal, const IqImbalanceParams& p) {
    if (p.irr_db <= 0) throw ConfigError("iq imbalance: irr_db must be positive");
    ComplexBaseband out = signal;
    if (std::isinf(p.irr_db)) return out;
    const cplx g2 = db_to_linear_amp(-p.irr_db) *
                    cplx{0.7071067811865476, 0.7071067811865476};
    for (cplx& s : out.samples) s = s + g2 * std::conj(s);
    return out;
}

ComplexBaseband apply_nonlinear_stage(const ComplexBaseband& signal, const RfStageParams& p) {
    if (!std::isfinite(p.gain_db)) throw ConfigError("nonlinear stage: gain_db must be finite");
    const double g = db_to_linear_amp(p.gain_db);
    const double a2 = p.iip2_dbm && std::isfinite(*p.iip2_dbm)
                          ? 1.0 / std::sqrt(db_to_linear_power(*p.iip2_dbm))
                          : 0.0;
    const double a3 = p.iip3_dbm && std::isfinite(*p.iip3_dbm)
                          ? 1.0 / db_to_linear_power(*p.iip3_dbm)
                          : 0.0;
    ComplexBaseband out = signal;
    if (a2 == 0.0 && a3 == 0.0) {
        for (cplx& s : out.samples) s *= g;
        return out;
    }
    for (cplx& s : out.samples) {
        const double env2 = std::norm(s);
        s = g * (s + a2 * env2 + a3 * s * env2);
    }
    return out;
}

ComplexBaseband add_thermal_noise(const ComplexBaseband& signal, double nf_db,
                                  double bandwidth_hz, Rng& rng) {
    if (bandwidth_hz <= 0) throw ConfigError("thermal noise: bandwidth_hz must be positive");
    const double power_dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + nf_db;
    const double sigma = std::sqrt(db_to_linear_power(power_dbm));
    ComplexBaseband out = signal;
    for (cplx& s : out.samples) s += sigma * rng.cgauss();
    return out;
}

ComplexBaseband quantize_adc(const ComplexBaseband& signal, const AdcParams& p,
                             std::optional<double> fullscale) {
    if (signal.empty()) throw EstimationError("quantize_adc: empty signal");
    if (p.bits < 1 || p.bits > 24) throw ConfigError("quantize_adc: bits must be in [1, 24]");

    double fs;
    if (fullscale) {
        fs = *fullscale;
    } else {
        double rms = std::sqrt(waveform::measure_power_linear(signal));
        if (rms <= 0.0) return signal;  // all-zero input passes through
        fs = rms * db_to_linear_amp(p.papr_headroom_db);
    }
    if (fs <= 0.0) return signal;

    const double levels = std::pow(2.0, p.bits);
    const double step = 2.0 * fs / levels;
    const double top = fs - 0.5 * step;
    auto quant = [&](double v) {
        double q = step * (std::floor(v / step) + 0.5);
        return std::clamp(q, -top, top);
    };
    ComplexBaseband out = signal;
    for (cplx& s : out.samples) s = {quant(s.real()), quant(s.imag())};
    return out;
}

TxChainOutput transmit_chain(const ComplexBaseband& x, const TxChainParams& p) {
    // Drive level: PA output should land at the transmit power, so back the
    // input off by the PA gain.
    ComplexBaseband driven = x;
    waveform::normalize_power_dbm(driven, p.tx_power_dbm - p.pa.gain_db);
    ComplexBaseband rf = p.iq_enabled ? apply_iq_imbalance(driven, p.iq) : driven;
    if (p.nonlin_enabled) {
        rf = apply_nonlinear_stage(rf, p.pa);
    } else {
        RfStageParams clean;
        clean.gain_db = p.pa.gain_db;
        rf = apply_nonlinear_stage(rf, clean);
    }
    waveform::normalize_power_dbm(rf, p.tx_power_dbm);

    TxChainOutput out;
    out.tx_ref = rf;
    waveform::normalize_power_dbm(out.tx_ref, 0.0);
    out.rf_out = std::move(rf);
    return out;
}

ComplexBaseband receive_chain(const ComplexBaseband& y_rf, const RxChainParams& p, Rng& noise_rng,
                              FrontEndState* state) {
    ComplexBaseband s =
        p.noise_enabled ? add_thermal_noise(y_rf, p.nf_db, p.bandwidth_hz, noise_rng) : y_rf;

    auto stage = [&](const ComplexBaseband& in, const RfStageParams& sp) {
        if (p.nonlin_enabled) return apply_nonlinear_stage(in, sp);
        RfStageParams clean;
        clean.gain_db = sp.gain_db;
        return apply_nonlinear_stage(in, clean);
    };
    s = stage(s, p.lna);
    s = stage(s, p.mixer);
    if (p.iq_enabled) s = apply_iq_imbalance(s, p.iq);

    // AGC: place the VGA output RMS at 10^(-headroom/20) of the ADC full
    // scale (1.0). The gain and the quantizer full scale are frozen in
    // `state` so every block of a trial sees the same front end.
    FrontEndState local;
    FrontEndState& fe = state ? *state : local;
    if (!fe.set) {
        const double rms = std::sqrt(waveform::measure_power_linear(s));
        const double target_rms = db_to_linear_amp(-p.adc.papr_headroom_db);
        double want_db = rms > 0.0 ? 20.0 * std::log10(target_rms / rms) : p.vga_min_db;
        fe.vga_gain_db = std::clamp(want_db, p.vga_min_db, p.vga_max_db);
        fe.vga_clamped = want_db != fe.vga_gain_db;
        fe.adc_fullscale = 1.0 * db_to_linear_amp(fe.vga_gain_db - want_db);
        fe.nominal_gain_db = p.lna.gain_db + p.mixer.gain_db + fe.vga_gain_db;
        fe.set = true;
    }
    RfStageParams vga = p.vga;
    vga.gain_db = fe.vga_gain_db;
    s = stage(s, vga);
    if (!p.adc_enabled) return s;
    return quantize_adc(s, p.adc, fe.adc_fullscale);
}

}  // namespace fdx::rf
