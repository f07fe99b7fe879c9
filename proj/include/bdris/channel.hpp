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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bdris/core_model.hpp"

namespace bdris {

/// Second-order statistics of the two hops.
struct CorrelationSpec {
  Eigen::MatrixXd r_ris;  // N x N, unit diagonal
  Eigen::MatrixXd r_tx;   // M x M, unit diagonal
  Eigen::MatrixXd r_t;    // NM x NM, kron(r_ris, r_tx)
  double rx_path_loss = 1.0;  // linear, RIS -> receiver hop
  double tx_path_loss = 1.0;  // linear, transmitter -> RIS hop
};

/// One draw of the two-hop channel.
struct ChannelRealization {
  Eigen::MatrixXcd tx_channel;   // N x M, transmitter -> RIS
  Eigen::MatrixXcd rx_channels;  // K x N, row k is RIS -> receiver k
};

struct TrainingSet {
  std::vector<ChannelRealization> realizations;
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(realizations.size()); }
};

/// [i,j] = rho^|i-j|; symmetric positive definite with unit diagonal.
Eigen::MatrixXd exponential_corr(int n, double rho);

/// UPA covariance kron(R_H, R_V): element n maps to grid position
/// (i_h, i_v) = (n / n_v, n % n_v), the vertical index running fastest.
Eigen::MatrixXd ris_covariance(int n_h, int n_v, double rho);

/// l0 * d^-alpha. Throws for non-positive distance.
double path_loss(double distance, double alpha, double l0);

/// Statistics implied by a system configuration (geometry and rho).
CorrelationSpec make_correlation_spec(const SystemConfig& cfg);

/// Draws `count` independent realizations: each receiver row is
/// sqrt(L_R) * F g with F F^T = r_ris, and the column-major vec of the
/// transmitter channel is sqrt(L_T) * F_T g with F_T F_T^T =
/// kron(r_tx, r_ris), so the RIS factor acts within columns. Every vector
/// has its own derived RNG stream (see rng.hpp); identical seeds give
/// bit-identical sets.
TrainingSet sample_realizations(const SystemConfig& cfg,
                                const CorrelationSpec& spec, int count,
                                std::uint64_t seed);

/// Binary dump: magic "BDCH", u32 version, then u64 N, M, K, C, seed,
/// then per realization the column-major complex entries of the
/// transmitter and receiver channels as interleaved re,im float64.
void write_training_set(const std::string& path, const TrainingSet& set);
TrainingSet read_training_set(const std::string& path);

}  // namespace bdris
