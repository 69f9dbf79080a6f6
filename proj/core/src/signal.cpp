// SPDX-License-Identifier: Apache-2.0

#include "fdx/signal.hpp"

#include <cmath>

#include "fdx/errors.hpp"

namespace fdx::waveform {

double measure_power_linear(const ComplexBaseband& signal) {
    if (signal.empty()) throw EstimationError("measure_power: empty signal");
    double acc = 0.0;
    for (const cplx& s : signal.samples) acc += std::norm(s);
    return acc / static_cast<double>(signal.size());
}

double measure_power_dbm(const ComplexBaseband& signal) {
    return 10.0 * std::log10(measure_power_linear(signal));
}

double measure_circularity(const ComplexBaseband& signal) {
    if (signal.size() < 1000)
        throw EstimationError("measure_circularity: need at least 1000 samples");
    cplx pseudo = 0.0;
    double power = 0.0;
    for (const cplx& s : signal.samples) {
        pseudo += s * s;
        power += std::norm(s);
    }
    return std::abs(pseudo) / power;
}

double measure_kurtosis(const ComplexBaseband& signal) {
    if (signal.empty()) throw EstimationError("measure_kurtosis: empty signal");
    double m2 = 0.0, m4 = 0.0;
    for (const cplx& s : signal.samples) {
        double p = std::norm(s);
        m2 += p;
        m4 += p * p;
    }
    double n = static_cast<double>(signal.size());
    m2 /= n;
    m4 /= n;
    return m4 / (m2 * m2);
}

void normalize_power_dbm(ComplexBaseband& signal, double power_dbm) {
    double target = std::pow(10.0, power_dbm / 10.0);
    double current = measure_power_linear(signal);
    if (current <= 0.0) return;  // all-zero stays all-zero
    double scale = std::sqrt(target / current);
    for (cplx& s : signal.samples) s *= scale;
}

}  // namespace fdx::waveform
