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

#include "bdris/grouping_search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bdris/linalg.hpp"

namespace bdris {

namespace {

SurrogatePrecompute build_precompute(const TrainingSet& set, bool multi_user,
                                     bool use_power_iteration) {
  if (set.realizations.empty())
    throw InvalidConfigError("precompute requires at least one realization");
  SurrogatePrecompute pre;
  pre.rx_weight.reserve(set.realizations.size());
  pre.tx_weight.reserve(set.realizations.size());
  for (const auto& real : set.realizations) {
    const SingularTriplet tx =
        use_power_iteration ? dominant_singular_triplet_power(real.tx_channel)
                            : dominant_singular_triplet(real.tx_channel);
    pre.tx_weight.push_back(tx.left.cwiseAbs());
    if (multi_user) {
      const SingularTriplet rx =
          use_power_iteration
              ? dominant_singular_triplet_power(real.rx_channels)
              : dominant_singular_triplet(real.rx_channels);
      pre.rx_weight.push_back(rx.right.cwiseAbs());
    } else {
      pre.rx_weight.push_back(real.rx_channels.row(0).cwiseAbs().transpose());
    }
  }
  return pre;
}

double objective_impl(const GroupingStrategy& strategy,
                      const SurrogatePrecompute& pre) {
  if (pre.size() != strategy.size())
    throw InvalidConfigError("precompute size does not match the strategy");
  const int groups = strategy.groups();
  double acc = 0.0;
  for (int c = 0; c < pre.count(); ++c) {
    const Eigen::VectorXd& a = pre.rx_weight[c];
    const Eigen::VectorXd& b = pre.tx_weight[c];
    double inner = 0.0;
    for (int g = 0; g < groups; ++g) {
      double na = 0.0, nb = 0.0;
      for (int e : strategy.group(g)) {
        na += a(e) * a(e);
        nb += b(e) * b(e);
      }
      inner += std::sqrt(na * nb);
    }
    acc += inner * inner;
  }
  return acc / pre.count();
}

std::vector<int> canonical_key(const std::vector<int>& owner, int groups,
                               int group_size) {
  std::vector<std::vector<int>> parts(groups);
  for (auto& p : parts) p.reserve(group_size);
  for (int e = 0; e < static_cast<int>(owner.size()); ++e)
    parts[owner[e]].push_back(e);  // elements visited in ascending order
  std::sort(parts.begin(), parts.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  std::vector<int> key;
  key.reserve(owner.size());
  for (const auto& p : parts) key.insert(key.end(), p.begin(), p.end());
  return key;
}

// Group-norm caches for the incumbent strategy, enabling O(C) evaluation of
// a swapped candidate: a swap only changes two group norms per realization.
struct IncrementalState {
  Eigen::MatrixXd a_sq;       // C x N, squared rx magnitudes
  Eigen::MatrixXd b_sq;       // C x N
  Eigen::MatrixXd group_a;    // C x G, per-group squared norms
  Eigen::MatrixXd group_b;    // C x G
  Eigen::VectorXd inner_sum;  // C, sum_g sqrt(group_a * group_b)

  void rebuild(const std::vector<int>& owner, int groups) {
    const auto c_count = a_sq.rows();
    group_a.setZero(c_count, groups);
    group_b.setZero(c_count, groups);
    for (int e = 0; e < static_cast<int>(owner.size()); ++e) {
      group_a.col(owner[e]) += a_sq.col(e);
      group_b.col(owner[e]) += b_sq.col(e);
    }
    inner_sum = (group_a.array() * group_b.array()).sqrt().rowwise().sum();
  }

  double objective() const {
    return inner_sum.array().square().mean();
  }

  // Objective after exchanging the groups of elements p (in gp) and q (in gq).
  double swapped_objective(int p, int gp, int q, int gq) const {
    const auto c_count = a_sq.rows();
    double acc = 0.0;
    for (Eigen::Index c = 0; c < c_count; ++c) {
      const double ap = a_sq(c, p), aq = a_sq(c, q);
      const double bp = b_sq(c, p), bq = b_sq(c, q);
      const double old_p = std::sqrt(group_a(c, gp) * group_b(c, gp));
      const double old_q = std::sqrt(group_a(c, gq) * group_b(c, gq));
      const double new_p = std::sqrt(std::max(0.0, group_a(c, gp) - ap + aq) *
                                     std::max(0.0, group_b(c, gp) - bp + bq));
      const double new_q = std::sqrt(std::max(0.0, group_a(c, gq) - aq + ap) *
                                     std::max(0.0, group_b(c, gq) - bq + bp));
      const double s = inner_sum(c) - old_p - old_q + new_p + new_q;
      acc += s * s;
    }
    return acc / static_cast<double>(c_count);
  }
};

}  // namespace

SurrogatePrecompute build_su_precompute(const TrainingSet& set,
                                        bool use_power_iteration) {
  return build_precompute(set, false, use_power_iteration);
}

SurrogatePrecompute build_mu_precompute(const TrainingSet& set,
                                        bool use_power_iteration) {
  return build_precompute(set, true, use_power_iteration);
}

double su_grouping_objective(const GroupingStrategy& strategy,
                             const SurrogatePrecompute& pre) {
  return objective_impl(strategy, pre);
}

double mu_grouping_objective(const GroupingStrategy& strategy,
                             const SurrogatePrecompute& pre) {
  return objective_impl(strategy, pre);
}

std::vector<GroupingStrategy> swap_neighborhood(const GroupingStrategy& strategy) {
  const int n = strategy.size();
  const int ng = strategy.group_size();
  std::vector<int> owner = strategy.group_of_elements();
  std::set<std::vector<int>> seen;
  std::vector<GroupingStrategy> out;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (owner[p] == owner[q]) continue;
      std::swap(owner[p], owner[q]);
      std::vector<int> key = canonical_key(owner, strategy.groups(), ng);
      std::swap(owner[p], owner[q]);
      if (seen.insert(key).second)
        out.emplace_back(std::move(key), ng);
    }
  }
  return out;
}

std::pair<GroupingStrategy, SearchTrace> optimize_grouping(
    const SurrogatePrecompute& pre, int group_size) {
  if (pre.count() == 0)
    throw InvalidConfigError("empty precompute");
  const int n = pre.size();
  GroupingStrategy current = sequential_grouping(n, group_size);
  const int groups = current.groups();

  IncrementalState state;
  state.a_sq.resize(pre.count(), n);
  state.b_sq.resize(pre.count(), n);
  for (int c = 0; c < pre.count(); ++c) {
    state.a_sq.row(c) = pre.rx_weight[c].array().square().transpose();
    state.b_sq.row(c) = pre.tx_weight[c].array().square().transpose();
  }

  std::vector<int> owner = current.group_of_elements();
  state.rebuild(owner, groups);
  double current_value = state.objective();

  SearchTrace trace;
  trace.steps.push_back({0, current_value, current, 0, 0});
  if (groups == 1) return {current, trace};

  const int raw_count = n * (n - group_size) / 2;
  for (int iteration = 1;; ++iteration) {
    double best_value = current_value;
    std::vector<int> best_key;
    bool improved = false;
    std::set<std::vector<int>> seen;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (owner[p] == owner[q]) continue;
        std::swap(owner[p], owner[q]);
        std::vector<int> key = canonical_key(owner, groups, group_size);
        std::swap(owner[p], owner[q]);
        if (!seen.insert(key).second) continue;
        const double value = state.swapped_objective(p, owner[p], q, owner[q]);
        if (value > best_value ||
            (improved && value == best_value && key < best_key)) {
          best_value = value;
          best_key = std::move(key);
          improved = true;
        }
      }
    }

    if (!improved) {
      // Incumbent survives its whole neighborhood: converged.
      trace.steps.push_back({iteration, current_value, current, raw_count,
                             static_cast<int>(seen.size())});
      break;
    }
    GroupingStrategy candidate(best_key, group_size);
    std::vector<int> candidate_owner = candidate.group_of_elements();
    state.rebuild(candidate_owner, groups);
    const double full_value = state.objective();  // exact value, resets drift
    if (full_value <= current_value) {
      // Improvement was below recomputation precision; stop here.
      state.rebuild(owner, groups);
      trace.steps.push_back({iteration, current_value, current, raw_count,
                             static_cast<int>(seen.size())});
      break;
    }
    current = std::move(candidate);
    owner = std::move(candidate_owner);
    current_value = full_value;
    trace.steps.push_back({iteration, current_value, current, raw_count,
                           static_cast<int>(seen.size())});
  }
  return {current, trace};
}

}  // namespace bdris
