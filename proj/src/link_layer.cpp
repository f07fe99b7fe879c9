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

#include "bdris/link_layer.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace bdris {

Eigen::VectorXcd mrt_precoder(const Eigen::RowVectorXcd& h) {
  const double norm = h.norm();
  if (norm == 0.0) throw DegenerateInputError("matched precoder of a zero channel");
  return h.adjoint() / norm;
}

PrecoderSet zf_precoders(const Eigen::MatrixXcd& h) {
  const auto k = h.rows();
  const auto m = h.cols();
  if (k < 1 || k > m)
    throw InvalidConfigError("zero forcing requires 1 <= users <= antennas");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_min = svd.singularValues()(k - 1);
  const double sigma_max = svd.singularValues()(0);
  if (sigma_min <= 0.0 || sigma_max / sigma_min > 1e10)
    throw RankError("channel matrix is rank deficient, smallest singular value " +
                    std::to_string(sigma_min));

  // Directions from the pseudo-inverse H^H (H H^H)^{-1}, then equal norms.
  const Eigen::VectorXcd inv_sigma =
      svd.singularValues().cwiseInverse().cast<std::complex<double>>();
  const Eigen::MatrixXcd pinv =
      svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().adjoint();
  PrecoderSet set;
  set.vectors = pinv;
  const double per_user = 1.0 / std::sqrt(static_cast<double>(k));
  for (Eigen::Index j = 0; j < k; ++j)
    set.vectors.col(j) *= per_user / set.vectors.col(j).norm();
  return set;
}

double received_power(const Eigen::RowVectorXcd& h, const Eigen::VectorXcd& w,
                      double tx_power) {
  if (h.size() != w.size())
    throw InvalidConfigError("precoder length does not match the channel");
  if (w.norm() > 1.0 + 1e-10)
    throw InvalidConfigError("precoder exceeds the unit energy budget");
  return tx_power * std::norm((h * w).value());
}

double sum_rate(const Eigen::MatrixXcd& h, const PrecoderSet& precoders,
                double tx_power, double noise_power) {
  const auto k = h.rows();
  if (precoders.vectors.cols() != k || precoders.vectors.rows() != h.cols())
    throw InvalidConfigError("precoder set does not match the channel");
  const Eigen::MatrixXcd cross = h * precoders.vectors;  // (k, i) -> h_k w_i
  double rate = 0.0;
  for (Eigen::Index u = 0; u < k; ++u) {
    const double signal = tx_power * std::norm(cross(u, u));
    double interference = 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (i != u) interference += tx_power * std::norm(cross(u, i));
    rate += std::log1p(signal / (interference + noise_power));
  }
  return rate;
}

Eigen::MatrixXcd effective_channel(const ScatteringBlocks& blocks,
                                   const Eigen::MatrixXcd& rx_grouped,
                                   const Eigen::MatrixXcd& tx_grouped) {
  const int ng = blocks.group_size();
  if (ng == 0 || rx_grouped.cols() != tx_grouped.rows() ||
      rx_grouped.cols() != static_cast<Eigen::Index>(blocks.blocks.size()) * ng)
    throw InvalidConfigError("blocks do not tile the channel dimensions");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rx_grouped.rows(), tx_grouped.cols());
  for (std::size_t g = 0; g < blocks.blocks.size(); ++g) {
    const auto offset = static_cast<Eigen::Index>(g) * ng;
    out.noalias() += rx_grouped.middleCols(offset, ng) * blocks.blocks[g] *
                     tx_grouped.middleRows(offset, ng);
  }
  return out;
}

}  // namespace bdris
