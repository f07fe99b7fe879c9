// Copyright 2026 The bdris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include "bdris/core_model.hpp"

namespace bdris {

/// Per-user unit-energy-budget precoders, stored as columns.
struct PrecoderSet {
  Eigen::MatrixXcd vectors;  // M x K

  int users() const { return static_cast<int>(vectors.cols()); }
};

/// Matched (maximum ratio) precoder h^H / ||h||; unit norm.
Eigen::VectorXcd mrt_precoder(const Eigen::RowVectorXcd& h);

/// Zero-forcing precoders from the pseudo-inverse of the K x M channel,
/// equal-norm allocation ||w_k||^2 = 1/K. Requires K <= M and full row rank;
/// throws RankError naming the offending singular value otherwise.
PrecoderSet zf_precoders(const Eigen::MatrixXcd& h);

/// P_T |h w|^2.
double received_power(const Eigen::RowVectorXcd& h, const Eigen::VectorXcd& w,
                      double tx_power);

/// Sum over users of log(1 + signal / (interference + noise)), natural log.
/// Divide by ln 2 for bits.
double sum_rate(const Eigen::MatrixXcd& h, const PrecoderSet& precoders,
                double tx_power, double noise_power);

/// Composite K x M channel H_R * Theta * H_T evaluated block-wise in grouped
/// coordinates, never materializing the full N x N scattering matrix.
Eigen::MatrixXcd effective_channel(const ScatteringBlocks& blocks,
                                   const Eigen::MatrixXcd& rx_grouped,
                                   const Eigen::MatrixXcd& tx_grouped);

}  // namespace bdris
