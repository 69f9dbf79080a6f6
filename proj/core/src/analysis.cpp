// SPDX-License-Identifier: Apache-2.0

#include "fdx/analysis.hpp"

#include <cmath>
#include <limits>

#include "fdx/errors.hpp"

namespace fdx::analysis {

Eigen::MatrixXcd crlb_exact(const cancel::ReferenceMatrix& x, const NoiseProfile& noise) {
    const int k = x.cols();
    if (x.rows() < k) throw EstimationError("crlb: fewer rows than unknowns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(x.data);
    const Eigen::MatrixXcd& qrm = qr.matrixQR();
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        const double d = std::abs(qrm(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin <= 0.0 || dmax / dmin > cancel::kConditionLimit)
        throw EstimationError("crlb: reference matrix is rank deficient");

    const Eigen::MatrixXcd rinv =
        qrm.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(
            Eigen::MatrixXcd::Identity(k, k));
    const Eigen::MatrixXcd cov_permuted = rinv * rinv.adjoint();
    const auto& perm = qr.colsPermutation();
    return (noise.sigma_n2 + noise.sigma_r2) * (perm * cov_permuted * perm.transpose());
}

double crlb_per_tap(double n, double p_ref, const NoiseProfile& noise) {
    if (n <= 0.0 || p_ref <= 0.0) throw EstimationError("crlb: n and p_ref must be positive");
    return (noise.sigma_n2 + noise.sigma_r2) / (n * p_ref);
}

double required_sample_ratio(double snr_linear) {
    if (snr_linear < 0.0) throw EstimationError("required_sample_ratio: negative SNR");
    return snr_linear + 1.0;
}

double calibration_overhead(const RateScenario& s) {
    if (s.t_coh_s <= 0.0 || s.f_s_hz <= 0.0)
        throw EstimationError("rate: coherence time and sample rate must be positive");
    return 2.0 * s.n_c / (s.t_coh_s * s.f_s_hz);
}

double rate_no_calibration(double sinr_nc_linear) {
    if (sinr_nc_linear < 0.0) throw EstimationError("rate: negative SINR");
    return 2.0 * std::log2(1.0 + sinr_nc_linear);
}

double rate_with_calibration(const RateScenario& s) {
    const double overhead = calibration_overhead(s);
    if (overhead > 1.0)
        throw InfeasibleError("calibration overhead " + std::to_string(overhead) +
                              " exceeds the coherence interval");
    return overhead * std::log2(1.0 + s.snr_linear) +
           2.0 * (1.0 - overhead) * std::log2(1.0 + s.sinr_c_linear);
}

}  // namespace fdx::analysis
