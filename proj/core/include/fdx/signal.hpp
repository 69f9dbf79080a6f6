// SPDX-License-Identifier: Apache-2.0
//
// ComplexBaseband is the signal currency passed between every stage: a vector
// of complex samples plus the rate they were taken at. Power convention:
// mean |sample|^2 of 1.0 corresponds to 0 dBm, so dBm figures from the system
// tables apply directly without an impedance model.

#pragma once

#include <complex>
#include <vector>

namespace fdx {

using cplx = std::complex<double>;

struct ComplexBaseband {
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

namespace waveform {

// Mean-square sample power in dBm under the 1.0 == 0 dBm convention.
double measure_power_dbm(const ComplexBaseband& signal);

// Linear mean-square power.
double measure_power_linear(const ComplexBaseband& signal);

// |mean(s^2)| / mean(|s|^2); near zero for circular (proper) signals, 1 for a
// real-valued one. Requires at least 1000 samples to be meaningful.
double measure_circularity(const ComplexBaseband& signal);

// Fourth moment ratio E|s|^4 / (E|s|^2)^2; 2.0 for a circular Gaussian.
double measure_kurtosis(const ComplexBaseband& signal);

// Scales the signal in place so its mean power is exactly `power_dbm`.
void normalize_power_dbm(ComplexBaseband& signal, double power_dbm);

}  // namespace waveform

using waveform::measure_power_dbm;

}  // namespace fdx
