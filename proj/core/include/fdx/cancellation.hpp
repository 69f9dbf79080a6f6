// SPDX-License-Identifier: Apache-2.0
//
// Digital cancellation: convolution reference matrices (plain and conjugate
// augmented), least-squares channel estimation via orthogonal factorization,
// residual formation and SINR measurement.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fdx/signal.hpp"

namespace fdx {

enum class Mode { kLinear, kWidelyLinear };

namespace cancel {

// Stacked convolution matrix over n samples of each reference signal: one
// m-column block per reference, rows r = 0..n-m. Row r, column k of block j
// holds x_j(m-1+r-k). Widely-linear mode puts the elementwise conjugate block
// right after each direct block, doubling the column count.
struct ReferenceMatrix {
    Eigen::MatrixXcd data;
    Mode mode = Mode::kLinear;
    int n = 0;        // samples consumed per reference
    int m = 0;        // taps per block
    int n_blocks = 0; // number of reference signals
    double p_ref = 0.0;  // empirical mean column power

    int rows() const { return static_cast<int>(data.rows()); }
    int cols() const { return static_cast<int>(data.cols()); }
};

struct ChannelEstimate {
    Eigen::VectorXcd taps;  // layout mirrors ReferenceMatrix columns
    Mode mode = Mode::kLinear;
    double residual_power_dbm = 0.0;
};

inline constexpr double kConditionLimit = 1e10;

ReferenceMatrix build_reference_matrix(const std::vector<ComplexBaseband>& refs, int n, int m,
                                       Mode mode);

// Minimizes |y - X h| by Householder QR. Condition numbers above
// kConditionLimit abort with a diagnostic naming the offending column block.
ChannelEstimate ls_estimate(const ReferenceMatrix& x, const ComplexBaseband& y);

// y_adc windowed to X's row range minus X * estimate; the residual seen by
// the detector.
ComplexBaseband digital_cancel(const ComplexBaseband& y_adc, const ReferenceMatrix& x,
                               const ChannelEstimate& est);

// 10*log10(P(soi) / P(residual - soi)); +infinity when the interference plus
// noise power underflows to zero.
double measure_sinr(const ComplexBaseband& residual, const ComplexBaseband& soi_component);

// Streaming least squares over a growing row window of the same regression.
// Rows are appended in panels and folded into a K x K triangular factor, so
// estimates for every prefix length come out of one pass over the data.
class SequentialLs {
  public:
    // refs: reference signals (est-domain); y: observation aligned with them.
    SequentialLs(std::vector<ComplexBaseband> refs, ComplexBaseband y, int m, Mode mode);

    // Consumes reference samples up to prefix length n (monotone).
    void advance_to(int n);

    int n_consumed() const { return n_consumed_; }
    int n_cols() const { return k_; }
    double p_ref() const;

    // Estimate from the rows consumed so far.
    ChannelEstimate solve() const;

  private:
    void fold_panel(int rows);

    std::vector<ComplexBaseband> refs_;
    ComplexBaseband y_;
    int m_ = 0;
    Mode mode_ = Mode::kLinear;
    int k_ = 0;
    int n_consumed_ = 0;   // samples consumed (row r exists for r <= n-m)
    int rows_done_ = 0;    // rows folded into the factor
    double col_power_sum_ = 0.0;
    double rss_ = 0.0;     // residual sum of squares over folded rows
    Eigen::MatrixXcd rfac_;    // K x (K+1): triangular factor | transformed rhs
    Eigen::MatrixXcd stage_;   // workspace for [rfac; panel]
};

}  // namespace cancel

using cancel::ChannelEstimate;
using cancel::ReferenceMatrix;

}  // namespace fdx
