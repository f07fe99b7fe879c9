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

#include "bdris/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

namespace bdris {

void SystemConfig::validate() const {
  if (ris_elements <= 0 || tx_antennas <= 0 || users <= 0 || group_size <= 0)
    throw InvalidConfigError("system dimensions must be positive");
  if (upa_horizontal * upa_vertical != ris_elements)
    throw InvalidConfigError("UPA dimensions do not multiply to the element count");
  if (ris_elements % group_size != 0)
    throw InvalidConfigError("group size does not divide the element count");
  if (reference_impedance <= 0.0)
    throw InvalidConfigError("reference impedance must be positive");
  if (correlation < 0.0 || correlation >= 1.0)
    throw InvalidConfigError("correlation coefficient must lie in [0, 1)");
  if (tx_power <= 0.0) throw InvalidConfigError("transmit power must be positive");
  if (noise_power <= 0.0) throw InvalidConfigError("noise power must be positive");
  if (ref_path_loss <= 0.0)
    throw InvalidConfigError("reference path loss must be positive");
}

GroupingStrategy::GroupingStrategy(std::vector<int> perm, int group_size)
    : perm_(std::move(perm)), group_size_(group_size) {
  const int n = static_cast<int>(perm_.size());
  if (group_size_ <= 0 || n == 0 || n % group_size_ != 0)
    throw InvalidConfigError("group size does not divide the element count");
  std::vector<char> seen(n, 0);
  for (int e : perm_) {
    if (e < 0 || e >= n || seen[e])
      throw InvalidConfigError("permutation is not a bijection on 0..N-1");
    seen[e] = 1;
  }
}

std::vector<int> GroupingStrategy::group_of_elements() const {
  std::vector<int> owner(perm_.size());
  for (int slot = 0; slot < size(); ++slot)
    owner[perm_[slot]] = slot / group_size_;
  return owner;
}

GroupingStrategy GroupingStrategy::canonical() const {
  const int g = groups();
  std::vector<std::vector<int>> parts(g);
  for (int i = 0; i < g; ++i) {
    auto members = group(i);
    parts[i].assign(members.begin(), members.end());
    std::sort(parts[i].begin(), parts[i].end());
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<int> flat;
  flat.reserve(perm_.size());
  for (const auto& p : parts) flat.insert(flat.end(), p.begin(), p.end());
  return GroupingStrategy(std::move(flat), group_size_);
}

bool GroupingStrategy::same_partition(const GroupingStrategy& other) const {
  if (size() != other.size() || group_size_ != other.group_size_) return false;
  return canonical() == other.canonical();
}

std::string GroupingStrategy::partition_string() const {
  const GroupingStrategy c = canonical();
  std::ostringstream out;
  for (int g = 0; g < c.groups(); ++g) {
    if (g > 0) out << ',';
    out << '{';
    auto members = c.group(g);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out << ',';
      out << members[i] + 1;
    }
    out << '}';
  }
  return out.str();
}

void ScatteringBlocks::check(double tol) const {
  for (std::size_t g = 0; g < blocks.size(); ++g) {
    const auto& b = blocks[g];
    if (b.rows() != b.cols())
      throw NumericalError("scattering block " + std::to_string(g) + " is not square");
    const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol)
      throw NumericalError("scattering block " + std::to_string(g) +
                           " violates symmetry: " + std::to_string(asym));
    const Eigen::MatrixXcd gram = b.adjoint() * b;
    const double dev =
        (gram - Eigen::MatrixXcd::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff();
    if (dev > tol)
      throw NumericalError("scattering block " + std::to_string(g) +
                           " violates unitarity: " + std::to_string(dev));
  }
}

void ReactanceBlocks::check(double tol) const {
  for (std::size_t g = 0; g < blocks.size(); ++g) {
    const auto& b = blocks[g];
    if (b.rows() != b.cols())
      throw NumericalError("reactance block " + std::to_string(g) + " is not square");
    const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol)
      throw NumericalError("reactance block " + std::to_string(g) +
                           " violates symmetry: " + std::to_string(asym));
  }
}

GroupingStrategy sequential_grouping(int elements, int group_size) {
  if (elements <= 0 || group_size <= 0 || elements % group_size != 0)
    throw InvalidConfigError("group size does not divide the element count");
  std::vector<int> perm(elements);
  for (int i = 0; i < elements; ++i) perm[i] = i;
  return GroupingStrategy(std::move(perm), group_size);
}

Eigen::MatrixXd permutation_matrix(const GroupingStrategy& strategy) {
  const int n = strategy.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) p(strategy.element_at(j), j) = 1.0;
  return p;
}

Eigen::MatrixXcd assemble_scattering(const GroupingStrategy& strategy,
                                     const ScatteringBlocks& blocks) {
  const int n = strategy.size();
  const int ng = strategy.group_size();
  if (static_cast<int>(blocks.blocks.size()) != strategy.groups())
    throw InvalidConfigError("block count does not match the group count");
  for (const auto& b : blocks.blocks)
    if (b.rows() != ng || b.cols() != ng)
      throw InvalidConfigError("block dimension does not match the group size");

  Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(n, n);
  for (int g = 0; g < strategy.groups(); ++g) {
    auto members = strategy.group(g);
    const auto& b = blocks.blocks[g];
    for (int i = 0; i < ng; ++i)
      for (int j = 0; j < ng; ++j) theta(members[i], members[j]) = b(i, j);
  }
  return theta;
}

Eigen::MatrixXcd cayley_scattering(const Eigen::MatrixXd& reactance, double z0) {
  if (reactance.rows() != reactance.cols())
    throw InvalidConfigError("reactance matrix must be square");
  if (z0 <= 0.0) throw InvalidConfigError("reference impedance must be positive");
  const double scale = std::max(1.0, reactance.cwiseAbs().maxCoeff());
  if ((reactance - reactance.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NumericalError("reactance matrix is not symmetric");

  // x = V diag(lambda) V^T with V real orthogonal, so the map reduces to the
  // scalar (j*lambda - z0)/(j*lambda + z0) on each eigenvalue; every factor
  // has unit modulus, which keeps the result unitary regardless of cond(x).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reactance);
  if (eig.info() != Eigen::Success)
    throw NumericalError("eigendecomposition of the reactance matrix failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  Eigen::VectorXcd factors(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const std::complex<double> jl(0.0, lambda(i));
    factors(i) = (jl - z0) / (jl + z0);
  }
  const Eigen::MatrixXcd v = eig.eigenvectors().cast<std::complex<double>>();
  Eigen::MatrixXcd theta = v * factors.asDiagonal() * v.transpose();
  theta = ((theta + theta.transpose()) * 0.5).eval();
  return theta;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw CountOverflowError("grouping count exceeds 64 bits");
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i);
    acc /= static_cast<unsigned>(i);  // exact: product of i consecutive ints
    if (acc > static_cast<unsigned __int128>(UINT64_MAX))
      throw CountOverflowError("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::uint64_t count_groupings(int elements, int group_size) {
  if (elements <= 0 || group_size <= 0 || elements % group_size != 0)
    throw InvalidConfigError("group size does not divide the element count");
  // N! / (G! (N_G!)^G) = prod_g C(g*N_G - 1, N_G - 1): factor g counts the
  // choices of groupmates for the largest element not yet assigned.
  std::uint64_t result = 1;
  for (int g = 1; g <= elements / group_size; ++g)
    result = checked_mul(result, binomial(g * group_size - 1, group_size - 1));
  return result;
}

Eigen::MatrixXcd group_rx_channel(const Eigen::MatrixXcd& rx,
                                  const GroupingStrategy& strategy) {
  if (rx.cols() != strategy.size())
    throw InvalidConfigError("receiver channel width does not match the strategy");
  Eigen::MatrixXcd out(rx.rows(), rx.cols());
  for (int j = 0; j < strategy.size(); ++j)
    out.col(j) = rx.col(strategy.element_at(j));
  return out;
}

Eigen::MatrixXcd group_tx_channel(const Eigen::MatrixXcd& tx,
                                  const GroupingStrategy& strategy) {
  if (tx.rows() != strategy.size())
    throw InvalidConfigError("transmitter channel height does not match the strategy");
  Eigen::MatrixXcd out(tx.rows(), tx.cols());
  for (int j = 0; j < strategy.size(); ++j)
    out.row(j) = tx.row(strategy.element_at(j));
  return out;
}

}  // namespace bdris
