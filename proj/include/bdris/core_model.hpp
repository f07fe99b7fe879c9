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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bdris/errors.hpp"

namespace bdris {

// Entry-wise tolerance for the symmetry/unitarity invariants of scattering
// and reactance blocks (double precision, block sizes up to 256).
inline constexpr double kBlockTolerance = 1e-10;

/// All scalar system parameters of a RIS-aided MISO link.
/// Indices are 0-based everywhere in code; 1-based only in printed output.
struct SystemConfig {
  int ris_elements = 16;   // N, number of RIS elements
  int upa_horizontal = 2;  // N_H, horizontal UPA size
  int upa_vertical = 8;    // N_V, vertical UPA size (fast index)
  int tx_antennas = 4;     // M
  int users = 1;           // K
  int group_size = 4;      // N_G, must divide N

  double reference_impedance = 50.0;  // ohm
  // 10 dBm default: with the default geometry this puts the per-user SNR in
  // the few-dB range where the sum rate responds to channel-gain improvements.
  double tx_power = 0.01;             // watt per data symbol
  double noise_power = 1e-11;         // watt (-80 dBm)
  double correlation = 0.8;           // rho in [0, 1)
  double ref_path_loss = 1e-3;        // linear loss at 1 m (-30 dB)
  double pl_exponent_rx = 2.8;        // RIS -> receiver
  double pl_exponent_tx = 2.0;        // transmitter -> RIS

  std::array<double, 2> tx_pos{0.0, 0.0};
  std::array<double, 2> ris_pos{50.0, 2.0};
  std::array<double, 2> rx_pos{52.0, 0.0};

  int groups() const { return ris_elements / group_size; }

  /// Throws InvalidConfigError if any invariant fails.
  void validate() const;
};

/// A partition of the N RIS elements into N/N_G groups of N_G, stored as a
/// permutation: slot j holds element perm[j], group g owns slots
/// [g*N_G, (g+1)*N_G). Two strategies are the same iff they induce the same
/// partition; canonical() gives the unique representative.
class GroupingStrategy {
 public:
  GroupingStrategy(std::vector<int> perm, int group_size);

  int size() const { return static_cast<int>(perm_.size()); }
  int group_size() const { return group_size_; }
  int groups() const { return size() / group_size_; }
  std::span<const int> slots() const { return perm_; }
  int element_at(int slot) const { return perm_[slot]; }
  std::span<const int> group(int g) const {
    return std::span<const int>(perm_).subspan(
        static_cast<std::size_t>(g) * group_size_, group_size_);
  }

  /// Group index of each element (inverse view of the permutation).
  std::vector<int> group_of_elements() const;

  /// Sorted within groups, groups ordered by smallest member.
  GroupingStrategy canonical() const;
  bool same_partition(const GroupingStrategy& other) const;

  /// 1-based, e.g. "{1,3},{2,4}" for the canonical form.
  std::string partition_string() const;

  friend bool operator==(const GroupingStrategy& a, const GroupingStrategy& b) {
    return a.group_size_ == b.group_size_ && a.perm_ == b.perm_;
  }

 private:
  std::vector<int> perm_;
  int group_size_;
};

/// The per-group complex scattering matrices; each block must be symmetric
/// and unitary within kBlockTolerance.
struct ScatteringBlocks {
  std::vector<Eigen::MatrixXcd> blocks;

  int group_size() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows());
  }
  /// Throws NumericalError when a block violates symmetry or unitarity.
  void check(double tol = kBlockTolerance) const;
};

/// The per-group real reactance matrices (ohm); symmetric within tolerance.
struct ReactanceBlocks {
  std::vector<Eigen::MatrixXd> blocks;

  void check(double tol = kBlockTolerance) const;
};

/// Identity permutation: group g = {g*N_G, ..., (g+1)*N_G - 1}. This is the
/// adjacent-elements baseline grouping.
GroupingStrategy sequential_grouping(int elements, int group_size);

/// N x N matrix with column j equal to the standard basis vector e_{perm[j]}.
Eigen::MatrixXd permutation_matrix(const GroupingStrategy& strategy);

/// Full scattering matrix P * blkdiag(blocks) * P^T; entry
/// (perm[i], perm[j]) equals entry (i, j) of the block diagonal.
Eigen::MatrixXcd assemble_scattering(const GroupingStrategy& strategy,
                                     const ScatteringBlocks& blocks);

/// Scattering matrix of a lossless reciprocal network with reactance x:
/// (j x + z0 I)^{-1} (j x - z0 I). Computed through the eigendecomposition
/// of x so the result is symmetric unitary to machine precision.
Eigen::MatrixXcd cayley_scattering(const Eigen::MatrixXd& reactance,
                                   double z0);

/// Number of distinct partitions of `elements` items into groups of
/// `group_size`: exact while the value fits in 64 bits (e.g. all
/// group_size = 2 cases up to 34 elements); throws CountOverflowError above.
std::uint64_t count_groupings(int elements, int group_size);

/// Columns of the receiver-side channel reordered into grouped coordinates:
/// column j of the result is column perm[j] of `rx` (i.e. H_R * P).
Eigen::MatrixXcd group_rx_channel(const Eigen::MatrixXcd& rx,
                                  const GroupingStrategy& strategy);

/// Rows of the transmitter-side channel reordered into grouped coordinates:
/// row j of the result is row perm[j] of `tx` (i.e. P^T * H_T).
Eigen::MatrixXcd group_tx_channel(const Eigen::MatrixXcd& tx,
                                  const GroupingStrategy& strategy);

}  // namespace bdris
