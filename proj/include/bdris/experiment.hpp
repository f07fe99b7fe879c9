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

#include "bdris/core_model.hpp"
#include "bdris/grouping_search.hpp"
#include "bdris/scattering_opt.hpp"

namespace bdris {

enum class Mode { kSingleUser, kMultiUser };
enum class Architecture { kSingle, kGroupSequential, kGroupOptimized, kFully };

std::string to_string(Mode mode);
std::string to_string(Architecture arch);

/// Sweep description on top of the scalar system parameters. Training and
/// evaluation channel sets use disjointly derived seeds.
struct ExperimentConfig {
  SystemConfig base;
  Mode mode = Mode::kSingleUser;
  std::vector<int> element_sweep{16};      // N values; N_H = N / N_V
  std::vector<int> group_size_sweep{4};    // N_G values for the group architectures
  std::vector<double> rho_sweep{0.8};
  std::vector<Architecture> architectures{
      Architecture::kSingle, Architecture::kGroupSequential,
      Architecture::kGroupOptimized, Architecture::kFully};
  int training_size = 100;
  int eval_realizations = 500;
  std::uint64_t seed = 1;
  std::string out = "results.csv";
  int jobs = 1;
  int mu_restarts = 1;
  int mu_max_iterations = 500;

  void validate() const;
};

/// Flat `key = value` text with `#` comments; lists comma-separated.
/// Unknown keys are rejected. See the README for the key set.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct ResultRow {
  std::string mode;
  int elements = 0;
  int upa_horizontal = 0;
  int upa_vertical = 0;
  int group_size = 0;
  double rho = 0.0;
  std::string architecture;
  std::string metric;  // power [W], power_gain, sum_rate [bit/s/Hz], sum_rate_gain
  double mean = 0.0;
  double stderr_ = 0.0;
  long count = 0;
  std::uint64_t seed = 0;
  double tx_power = 0.0;
  double noise_power = 0.0;
  double wall_seconds = 0.0;  // not serialized
};

struct ExperimentOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::string> errors;  // one entry per failed sweep point
};

/// Runs the full pipeline for every sweep point: training draw, offline
/// grouping search for the optimized architecture, evaluation draw, online
/// optimization per realization and architecture, then aggregation including
/// gains relative to the single-connected baseline when it is present.
/// Deterministic for a fixed config and seed, independent of `jobs`.
/// Sweep-point failures are collected and the remaining points continue.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kResultsCsvHeader =
    "mode,N,N_H,N_V,N_G,rho,architecture,metric,mean,stderr,n,seed,P_T,sigma_z2";

/// Shortest round-trip decimal formatting throughout.
std::string results_to_csv(const std::vector<ResultRow>& rows,
                           const ExperimentConfig& cfg);
std::string trace_to_csv(const SearchTrace& trace);

std::string format_double(double value);
void write_text_file(const std::string& path, const std::string& text);

/// Grid of 1-based group ids, upa_vertical rows by upa_horizontal columns;
/// cell (i_v, i_h) holds the group of element n = i_h * upa_vertical + i_v
/// (0-based, vertical index fastest). Ids follow the canonical group order.
std::string export_grouping_map(const GroupingStrategy& strategy,
                                int upa_horizontal, int upa_vertical);
GroupingStrategy parse_grouping_map(const std::string& csv, int group_size);

/// Mean over groups of the mean pairwise distance between element positions
/// on the UPA grid (unit cell `spacing`); 0 when groups are singletons.
double intra_group_distance(const GroupingStrategy& strategy,
                            int upa_horizontal, int upa_vertical,
                            double spacing);

}  // namespace bdris
