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

#include <vector>

#include <Eigen/Dense>

#include "bdris/core_model.hpp"
#include "bdris/rng.hpp"

namespace bdris::test {

inline Eigen::MatrixXcd random_complex(Xoshiro256pp& rng, Eigen::Index rows,
                                       Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline Eigen::MatrixXd random_symmetric(Xoshiro256pp& rng, Eigen::Index n,
                                        double scale) {
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      m(i, j) = scale * rng.normal();
      m(j, i) = m(i, j);
    }
  return m;
}

inline Eigen::VectorXcd random_unit(Xoshiro256pp& rng, Eigen::Index n) {
  Eigen::VectorXcd v = random_complex(rng, n, 1);
  return v / v.norm();
}

/// Haar-ish random unitary via QR of a Ginibre matrix.
inline Eigen::MatrixXcd random_unitary(Xoshiro256pp& rng, Eigen::Index n) {
  const Eigen::MatrixXcd g = random_complex(rng, n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Random symmetric unitary block, a feasible lossless reciprocal network.
inline Eigen::MatrixXcd random_symmetric_unitary(Xoshiro256pp& rng,
                                                 Eigen::Index n) {
  const Eigen::MatrixXcd v = random_unitary(rng, n);
  Eigen::MatrixXcd theta = v * v.transpose();
  return ((theta + theta.transpose()) * 0.5).eval();
}

/// All partitions of {0..n-1} into groups of `group_size`, as canonical
/// strategies; independent enumeration oracle for the counting and search
/// code paths.
inline void enumerate_partitions_rec(std::vector<int>& owner, int next_group,
                                     int group_size,
                                     std::vector<GroupingStrategy>& out) {
  const int n = static_cast<int>(owner.size());
  int first = -1;
  for (int i = 0; i < n; ++i)
    if (owner[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    std::vector<std::vector<int>> groups(next_group);
    for (int i = 0; i < n; ++i) groups[owner[i]].push_back(i);
    std::vector<int> perm;
    for (auto& g : groups) perm.insert(perm.end(), g.begin(), g.end());
    out.emplace_back(GroupingStrategy(perm, group_size).canonical());
    return;
  }
  owner[first] = next_group;
  std::vector<int> free;
  for (int i = first + 1; i < n; ++i)
    if (owner[i] < 0) free.push_back(i);
  // choose group_size-1 mates for `first` from the free elements
  std::vector<int> idx(group_size - 1);
  const int f = static_cast<int>(free.size());
  if (group_size - 1 > f) {
    owner[first] = -1;
    return;
  }
  for (int i = 0; i < group_size - 1; ++i) idx[i] = i;
  while (true) {
    for (int i = 0; i < group_size - 1; ++i) owner[free[idx[i]]] = next_group;
    enumerate_partitions_rec(owner, next_group + 1, group_size, out);
    for (int i = 0; i < group_size - 1; ++i) owner[free[idx[i]]] = -1;
    int pos = group_size - 2;
    if (pos < 0) break;
    while (pos >= 0 && idx[pos] == f - (group_size - 1 - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < group_size - 1; ++i) idx[i] = idx[i - 1] + 1;
  }
  owner[first] = -1;
}

inline std::vector<GroupingStrategy> enumerate_partitions(int n, int group_size) {
  std::vector<int> owner(n, -1);
  std::vector<GroupingStrategy> out;
  enumerate_partitions_rec(owner, 0, group_size, out);
  return out;
}

}  // namespace bdris::test
