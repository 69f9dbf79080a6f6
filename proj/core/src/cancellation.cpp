// SPDX-License-Identifier: Apache-2.0

#include "fdx/cancellation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fdx/errors.hpp"

namespace fdx::cancel {

namespace {

int block_width(Mode mode, int m) { return mode == Mode::kWidelyLinear ? 2 * m : m; }

std::string describe_block(Mode mode, int m, int col) {
    const int w = block_width(mode, m);
    const int block = col / w;
    std::string msg = "reference block " + std::to_string(block);
    if (mode == Mode::kWidelyLinear && (col % w) >= m) msg += " (conjugate part)";
    return msg;
}

void check_condition(const Eigen::MatrixXcd& rdiag_source, Mode mode, int m, int worst_col) {
    const int k = static_cast<int>(rdiag_source.cols());
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        const double d = std::abs(rdiag_source(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin <= 0.0 || dmax / dmin > kConditionLimit)
        throw EstimationError("ls_estimate: reference matrix condition number exceeds 1e10 at " +
                              describe_block(mode, m, worst_col));
}

}  // namespace

ReferenceMatrix build_reference_matrix(const std::vector<ComplexBaseband>& refs, int n, int m,
                                       Mode mode) {
    if (refs.empty()) throw EstimationError("build_reference_matrix: no reference signals");
    if (m < 1 || m >= n) throw EstimationError("build_reference_matrix: need 1 <= m < n");
    for (const ComplexBaseband& r : refs)
        if (static_cast<int>(r.size()) < n)
            throw EstimationError("build_reference_matrix: reference shorter than n samples");

    const int rows = n - m + 1;
    const int w = block_width(mode, m);
    ReferenceMatrix x;
    x.mode = mode;
    x.n = n;
    x.m = m;
    x.n_blocks = static_cast<int>(refs.size());
    x.data.resize(rows, w * x.n_blocks);
    for (int j = 0; j < x.n_blocks; ++j) {
        const auto& s = refs[static_cast<std::size_t>(j)].samples;
        for (int r = 0; r < rows; ++r) {
            for (int k = 0; k < m; ++k) {
                const cplx v = s[static_cast<std::size_t>(m - 1 + r - k)];
                x.data(r, j * w + k) = v;
                if (mode == Mode::kWidelyLinear) x.data(r, j * w + m + k) = std::conj(v);
            }
        }
    }
    x.p_ref = x.data.squaredNorm() / (static_cast<double>(rows) * x.cols());
    return x;
}

ChannelEstimate ls_estimate(const ReferenceMatrix& x, const ComplexBaseband& y) {
    if (static_cast<int>(y.size()) != x.rows())
        throw EstimationError("ls_estimate: observation length does not match matrix rows");
    if (x.rows() < x.cols())
        throw EstimationError("ls_estimate: fewer equations than unknowns");

    Eigen::VectorXcd rhs(x.rows());
    for (int r = 0; r < x.rows(); ++r) rhs(r) = y.samples[static_cast<std::size_t>(r)];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(x.data);
    const Eigen::MatrixXcd& qrm = qr.matrixQR();
    const int k = x.cols();
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        const double d = std::abs(qrm(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmin <= 0.0 || dmax / dmin > kConditionLimit) {
        const int worst = qr.colsPermutation().indices()(k - 1);
        throw EstimationError("ls_estimate: reference matrix condition number exceeds 1e10 at " +
                              describe_block(x.mode, x.m, worst));
    }

    ChannelEstimate est;
    est.mode = x.mode;
    est.taps = qr.solve(rhs);
    const double rss = (rhs - x.data * est.taps).squaredNorm();
    est.residual_power_dbm = 10.0 * std::log10(rss / x.rows());
    return est;
}

ComplexBaseband digital_cancel(const ComplexBaseband& y_adc, const ReferenceMatrix& x,
                               const ChannelEstimate& est) {
    if (est.taps.size() != x.cols())
        throw EstimationError("digital_cancel: estimate does not match matrix layout");
    if (static_cast<int>(y_adc.size()) < x.rows() + x.m - 1)
        throw EstimationError("digital_cancel: observation shorter than the matrix window");

    const Eigen::VectorXcd model = x.data * est.taps;
    ComplexBaseband out;
    out.sample_rate_hz = y_adc.sample_rate_hz;
    out.samples.resize(static_cast<std::size_t>(x.rows()));
    for (int r = 0; r < x.rows(); ++r)
        out.samples[static_cast<std::size_t>(r)] =
            y_adc.samples[static_cast<std::size_t>(x.m - 1 + r)] - model(r);
    return out;
}

double measure_sinr(const ComplexBaseband& residual, const ComplexBaseband& soi_component) {
    if (residual.size() != soi_component.size() || residual.empty())
        throw EstimationError("measure_sinr: residual and soi lengths differ");
    double p_soi = 0.0;
    double p_in = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        p_soi += std::norm(soi_component.samples[i]);
        p_in += std::norm(residual.samples[i] - soi_component.samples[i]);
    }
    if (p_in <= 0.0) return std::numeric_limits<double>::infinity();
    if (p_soi <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p_soi / p_in);
}

SequentialLs::SequentialLs(std::vector<ComplexBaseband> refs, ComplexBaseband y, int m, Mode mode)
    : refs_(std::move(refs)), y_(std::move(y)), m_(m), mode_(mode) {
    if (refs_.empty()) throw EstimationError("sequential ls: no reference signals");
    if (m_ < 1) throw EstimationError("sequential ls: m must be positive");
    for (const ComplexBaseband& r : refs_)
        if (r.size() != y_.size())
            throw EstimationError("sequential ls: reference and observation lengths differ");
    k_ = block_width(mode_, m_) * static_cast<int>(refs_.size());
    rfac_.setZero(k_, k_ + 1);
    n_consumed_ = m_ - 1;  // no full row exists yet
}

void SequentialLs::advance_to(int n) {
    if (n > static_cast<int>(y_.size()))
        throw EstimationError("sequential ls: advance past end of data");
    if (n <= n_consumed_) return;
    n_consumed_ = n;
    const int rows_avail = n - m_ + 1;
    constexpr int kPanel = 1024;
    while (rows_done_ < rows_avail)
        fold_panel(std::min(kPanel, rows_avail - rows_done_));
}

void SequentialLs::fold_panel(int rows) {
    const int w = block_width(mode_, m_);
    stage_.resize(k_ + rows, k_ + 1);
    stage_.topRows(k_) = rfac_;
    for (int i = 0; i < rows; ++i) {
        const int r = rows_done_ + i;
        for (int j = 0; j < static_cast<int>(refs_.size()); ++j) {
            const auto& s = refs_[static_cast<std::size_t>(j)].samples;
            for (int k = 0; k < m_; ++k) {
                const cplx v = s[static_cast<std::size_t>(m_ - 1 + r - k)];
                stage_(k_ + i, j * w + k) = v;
                if (mode_ == Mode::kWidelyLinear) stage_(k_ + i, j * w + m_ + k) = std::conj(v);
            }
        }
        stage_(k_ + i, k_) = y_.samples[static_cast<std::size_t>(m_ - 1 + r)];
    }
    col_power_sum_ += stage_.block(k_, 0, rows, k_).squaredNorm();

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stage_);
    const Eigen::MatrixXcd& qrm = qr.matrixQR();
    rfac_ = qrm.topRows(k_).triangularView<Eigen::Upper>();
    // Row k_ of the triangularized stage carries the residual increment of the
    // combined prefix system in its last column.
    rss_ += std::norm(qrm(k_, k_));
    rows_done_ += rows;
}

double SequentialLs::p_ref() const {
    if (rows_done_ == 0) return 0.0;
    return col_power_sum_ / (static_cast<double>(rows_done_) * k_);
}

ChannelEstimate SequentialLs::solve() const {
    if (rows_done_ < k_)
        throw EstimationError("sequential ls: fewer equations than unknowns");
    int worst = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k_; ++i) {
        const double d = std::abs(rfac_(i, i));
        if (d < dmin) {
            dmin = d;
            worst = i;
        }
    }
    check_condition(rfac_.topLeftCorner(k_, k_), mode_, m_, worst);

    ChannelEstimate est;
    est.mode = mode_;
    est.taps = rfac_.topLeftCorner(k_, k_).triangularView<Eigen::Upper>().solve(
        rfac_.col(k_).head(k_));
    est.residual_power_dbm =
        rss_ > 0.0 ? 10.0 * std::log10(rss_ / rows_done_)
                   : -std::numeric_limits<double>::infinity();
    return est;
}

}  // namespace fdx::cancel
