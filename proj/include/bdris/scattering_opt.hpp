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
#include <vector>

#include <Eigen/Core>

#include "bdris/channel.hpp"
#include "bdris/core_model.hpp"

namespace bdris {

/// Symmetric unitary matrix mapping the unit vector `from` to the unit
/// vector `to`. Built as V V^T for a suitably chosen unitary V; any output
/// satisfying the three-part contract (symmetry, unitarity, the mapping,
/// each to 1e-9) is valid, so tests check the contract rather than values.
/// Accuracy degrades only in the measure-zero regime where `to` is almost
/// but not exactly parallel to conj(`from`).
Eigen::MatrixXcd symmetric_unitary_map(const Eigen::VectorXcd& from,
                                       const Eigen::VectorXcd& to);

/// Per-group optimal blocks for the coherent objective |h Theta u|: each
/// block maps the group's normalized u-subvector to the group's normalized
/// conjugate h-subvector, so the contribution h_g Theta_g u_g equals
/// ||h_g|| ||u_g|| (real, nonnegative) and the total reaches
/// sum_g ||h_g|| ||u_g||, the groupwise Cauchy-Schwarz maximum. Groups where
/// either subvector vanishes get the block -I (the zero-reactance image).
/// Inputs are in grouped coordinates.
ScatteringBlocks closed_form_blocks(const GroupingStrategy& strategy,
                                    const Eigen::RowVectorXcd& rx_grouped,
                                    const Eigen::VectorXcd& tx_grouped);

struct SuScatteringResult {
  ScatteringBlocks blocks;
  double gain = 0.0;  // squared 2-norm of the composite channel row
  std::vector<double> objective_trace;  // non-decreasing across iterations
  int iterations = 0;
};

/// Online single-user stage: alternates the unit-norm auxiliary precoder
/// (matched to the current composite channel) with the closed-form optimal
/// blocks for that precoder, until the relative gain change drops below
/// 1e-8 or 200 iterations. Works in grouped coordinates throughout.
SuScatteringResult optimize_scattering_su(const GroupingStrategy& strategy,
                                          const ChannelRealization& channel);

struct QuasiNewtonOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;     // infinity norm, scale-normalized problem
  double init_scale = 100.0;            // ohm, std dev of the random reactance init
  int restarts = 1;
  double finite_difference_step = 1e-4; // relative, for the check fallback
  double reference_impedance = 50.0;    // ohm
  std::uint64_t seed = 0;               // stream for the random restarts
};

/// Sum channel-gain objective ||Hr * blkdiag(Theta_g(X_g)) * Ht||_F^2 as an
/// unconstrained function of the stacked upper-triangular reactance entries
/// (row-major within each block, blocks in order), with analytic gradient
/// through the network map. Channels are in grouped coordinates.
class ReactanceProblem {
 public:
  ReactanceProblem(Eigen::MatrixXcd rx_grouped, Eigen::MatrixXcd tx_grouped,
                   int group_size, double z0);

  int dim() const { return groups_ * group_size_ * (group_size_ + 1) / 2; }
  int groups() const { return groups_; }
  int group_size() const { return group_size_; }

  double value(const Eigen::VectorXd& x) const;
  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;
  /// Central finite differences of value(); step is relative per coordinate.
  Eigen::VectorXd finite_difference_gradient(const Eigen::VectorXd& x,
                                             double relative_step) const;

  ReactanceBlocks unpack(const Eigen::VectorXd& x) const;
  Eigen::VectorXd pack(const ReactanceBlocks& blocks) const;

 private:
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;

  Eigen::MatrixXcd rx_, tx_;
  int group_size_;
  int groups_;
  double z0_;
};

enum class QuasiNewtonStatus { kGradientTolerance, kMaxIterations, kStalled };

struct MuScatteringResult {
  ReactanceBlocks reactance;
  ScatteringBlocks blocks;
  double objective = 0.0;  // in the original channel scale
  QuasiNewtonStatus status = QuasiNewtonStatus::kMaxIterations;
  int iterations = 0;
  int rejected_steps = 0;  // line-search trials discarded as non-finite
  double gradient_norm = 0.0;
};

/// Online multi-user stage: limited-memory quasi-Newton ascent over the free
/// reactance entries, best of `restarts` random initializations. The
/// channels are normalized internally so the stopping tolerances are scale
/// free; the reported objective is rescaled back. The returned objective is
/// never below the best initialization.
MuScatteringResult optimize_scattering_mu(const GroupingStrategy& strategy,
                                          const ChannelRealization& channel,
                                          const QuasiNewtonOptions& options = {});

}  // namespace bdris
