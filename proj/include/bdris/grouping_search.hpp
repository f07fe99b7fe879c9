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

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bdris/channel.hpp"
#include "bdris/core_model.hpp"

namespace bdris {

/// Per-realization magnitude vectors that fully determine the offline
/// grouping objective: rx_weight holds |h_R| (single-user) or the magnitudes
/// of the dominant right singular vector of H_R (multi-user); tx_weight
/// holds the magnitudes of the dominant left singular vector of H_T. Only
/// magnitudes are kept since the objective depends on per-group 2-norms.
struct SurrogatePrecompute {
  std::vector<Eigen::VectorXd> rx_weight;
  std::vector<Eigen::VectorXd> tx_weight;

  int count() const { return static_cast<int>(rx_weight.size()); }
  int size() const {
    return rx_weight.empty() ? 0 : static_cast<int>(rx_weight.front().size());
  }
};

SurrogatePrecompute build_su_precompute(const TrainingSet& set,
                                        bool use_power_iteration = false);
SurrogatePrecompute build_mu_precompute(const TrainingSet& set,
                                        bool use_power_iteration = false);

/// Mean over realizations of (sum_g ||rx restricted to g|| * ||tx restricted
/// to g||)^2, groups taken from the strategy on the unpermuted vectors.
double su_grouping_objective(const GroupingStrategy& strategy,
                             const SurrogatePrecompute& pre);
double mu_grouping_objective(const GroupingStrategy& strategy,
                             const SurrogatePrecompute& pre);

/// All partitions reachable by exchanging the group memberships of two
/// elements in different groups, de-duplicated to distinct partitions in
/// canonical form. The raw (pre-deduplication) swap count is N(N-N_G)/2;
/// empty when there is a single group.
std::vector<GroupingStrategy> swap_neighborhood(const GroupingStrategy& strategy);

struct SearchStep {
  int iteration = 0;
  double objective = 0.0;
  GroupingStrategy accepted;
  int raw_neighborhood = 0;       // N(N-N_G)/2 for every iteration >= 1
  int distinct_neighborhood = 0;  // after partition de-duplication
};

struct SearchTrace {
  std::vector<SearchStep> steps;
};

/// Swap-neighborhood local search over grouping strategies, starting from
/// the sequential grouping. Each iteration accepts the best strategy among
/// the incumbent and its swap neighborhood (incumbent preferred on ties,
/// lowest canonical order among tied neighbors) and stops when the incumbent
/// survives; the accepted objective is strictly increasing until the final
/// repeated value. Candidate values are computed incrementally (a swap only
/// touches two groups) and the accepted state is recomputed in full.
std::pair<GroupingStrategy, SearchTrace> optimize_grouping(
    const SurrogatePrecompute& pre, int group_size);

}  // namespace bdris
