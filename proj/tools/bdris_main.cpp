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

#include <bit>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bdris/channel.hpp"
#include "bdris/experiment.hpp"
#include "bdris/grouping_search.hpp"
#include "bdris/rng.hpp"

namespace {

using namespace bdris;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> realizations;
  std::optional<int> training_size;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Configuration file (key = value)");
  cmd->add_option("--seed", flags.seed, "Override the experiment seed");
  cmd->add_option("--out", flags.out, "Output path");
  cmd->add_option("--realizations", flags.realizations,
                  "Override the evaluation realization count");
  cmd->add_option("--training-size", flags.training_size,
                  "Override the training set size");
  cmd->add_option("--jobs", flags.jobs, "Worker threads for the evaluation loop");
}

ExperimentConfig load_config(const CommonFlags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = parse_config_file(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.out = *flags.out;
  if (flags.realizations) cfg.eval_realizations = *flags.realizations;
  if (flags.training_size) cfg.training_size = *flags.training_size;
  if (flags.jobs) cfg.jobs = *flags.jobs;
  cfg.validate();
  return cfg;
}

SystemConfig sweep_point(const ExperimentConfig& cfg) {
  SystemConfig point = cfg.base;
  point.ris_elements = cfg.element_sweep.front();
  point.upa_horizontal = point.ris_elements / cfg.base.upa_vertical;
  point.correlation = cfg.rho_sweep.front();
  point.group_size = cfg.group_size_sweep.front();
  point.users = (cfg.mode == Mode::kSingleUser) ? 1 : cfg.base.users;
  return point;
}

int run_eval(const ExperimentConfig& cfg) {
  const ExperimentOutcome outcome = run_experiment(cfg);
  write_text_file(cfg.out, results_to_csv(outcome.rows, cfg));
  std::cerr << "wrote " << outcome.rows.size() << " rows to " << cfg.out << "\n";
  for (const auto& err : outcome.errors) std::cerr << "failed: " << err << "\n";
  return outcome.errors.empty() ? 0 : 1;
}

int run_gen(const ExperimentConfig& cfg, const CommonFlags& flags) {
  const SystemConfig point = sweep_point(cfg);
  const CorrelationSpec spec = make_correlation_spec(point);
  const std::uint64_t seed = derive_stream(
      cfg.seed, {stream_tag::kTrainingSet,
                 static_cast<std::uint64_t>(point.ris_elements),
                 std::bit_cast<std::uint64_t>(point.correlation)});
  const TrainingSet set =
      sample_realizations(point, spec, cfg.training_size, seed);
  const std::string path = flags.out.value_or("channels.bin");
  write_training_set(path, set);
  std::cerr << "wrote " << set.count() << " realizations to " << path << "\n";
  return 0;
}

int run_group(const ExperimentConfig& cfg, const CommonFlags& flags) {
  const SystemConfig point = sweep_point(cfg);
  const CorrelationSpec spec = make_correlation_spec(point);
  const std::uint64_t seed = derive_stream(
      cfg.seed, {stream_tag::kTrainingSet,
                 static_cast<std::uint64_t>(point.ris_elements),
                 std::bit_cast<std::uint64_t>(point.correlation)});
  const TrainingSet set =
      sample_realizations(point, spec, cfg.training_size, seed);
  const SurrogatePrecompute pre = (cfg.mode == Mode::kSingleUser)
                                      ? build_su_precompute(set)
                                      : build_mu_precompute(set);
  const auto [best, trace] = optimize_grouping(pre, point.group_size);
  std::cout << "partition " << best.partition_string() << "\n";
  std::cout << "objective " << format_double(trace.steps.back().objective) << "\n";
  if (flags.out) {
    write_text_file(*flags.out, trace_to_csv(trace));
    std::cerr << "wrote trace to " << *flags.out << "\n";
  } else {
    std::cout << trace_to_csv(trace);
  }
  return 0;
}

// Sweeps reproducing the trend figures; endpoints documented in the README.
ExperimentConfig fig1_config() {
  ExperimentConfig cfg;
  cfg.mode = Mode::kSingleUser;
  cfg.element_sweep = {16, 32, 48, 64};
  cfg.group_size_sweep = {2, 4};
  cfg.rho_sweep = {0.6, 0.8};
  cfg.training_size = 100;
  cfg.eval_realizations = 300;
  cfg.out = "fig1.csv";
  return cfg;
}

ExperimentConfig fig3_config() {
  ExperimentConfig cfg = fig1_config();
  cfg.mode = Mode::kMultiUser;
  cfg.base.users = 2;
  cfg.base.noise_power = 1e-11;  // -80 dBm
  cfg.eval_realizations = 200;
  cfg.out = "fig3.csv";
  return cfg;
}

int run_fig2(const ExperimentConfig& overrides, const CommonFlags& flags) {
  const std::string out_dir = flags.out.value_or(".");
  std::filesystem::create_directories(out_dir);
  std::ostringstream summary;
  summary << "N,N_H,N_V,N_G,rho,architecture,intra_group_distance,seed\n";
  for (int n_h : {2, 4, 6, 8}) {
    SystemConfig point;
    point.upa_horizontal = n_h;
    point.upa_vertical = 8;
    point.ris_elements = 8 * n_h;
    point.group_size = 4;
    point.correlation = 0.8;
    point.users = 1;
    const CorrelationSpec spec = make_correlation_spec(point);
    const std::uint64_t seed = derive_stream(
        overrides.seed, {stream_tag::kTrainingSet,
                         static_cast<std::uint64_t>(point.ris_elements),
                         std::bit_cast<std::uint64_t>(point.correlation)});
    const TrainingSet set =
        sample_realizations(point, spec, overrides.training_size, seed);
    const SurrogatePrecompute pre = build_su_precompute(set);
    const auto [best, trace] = optimize_grouping(pre, 4);
    const GroupingStrategy baseline = sequential_grouping(point.ris_elements, 4);

    const std::string grid_path =
        out_dir + "/grouping_" + std::to_string(n_h) + "x8.csv";
    write_text_file(grid_path, export_grouping_map(best, n_h, 8));
    for (const auto& [label, strategy] :
         {std::pair<const char*, const GroupingStrategy&>{"group-NG", baseline},
          std::pair<const char*, const GroupingStrategy&>{"group-OG", best}}) {
      summary << point.ris_elements << ',' << n_h << ",8,4,0.8," << label << ','
              << format_double(intra_group_distance(strategy, n_h, 8, 1.0)) << ','
              << overrides.seed << '\n';
    }
    std::cerr << "grid " << n_h << "x8 -> " << grid_path << "\n";
  }
  const std::string summary_path = out_dir + "/fig2_summary.csv";
  write_text_file(summary_path, summary.str());
  std::cerr << "wrote " << summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beyond diagonal RIS grouping and scattering optimization"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* gen = app.add_subcommand("gen", "Sample a channel set and dump it");
  CLI::App* group = app.add_subcommand("group", "Offline grouping search only");
  CLI::App* eval = app.add_subcommand("eval", "Full experiment pipeline");
  CLI::App* fig1 = app.add_subcommand("fig1", "Single-user power-gain sweep");
  CLI::App* fig2 = app.add_subcommand("fig2", "Optimized grouping maps");
  CLI::App* fig3 = app.add_subcommand("fig3", "Multi-user sum-rate sweep");
  for (CLI::App* cmd : {gen, group, eval, fig1, fig2, fig3})
    add_common_flags(cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(load_config(flags), flags);
    if (group->parsed()) return run_group(load_config(flags), flags);
    if (eval->parsed()) return run_eval(load_config(flags));
    if (fig1->parsed() || fig3->parsed()) {
      ExperimentConfig cfg = fig1->parsed() ? fig1_config() : fig3_config();
      if (flags.seed) cfg.seed = *flags.seed;
      if (flags.out) cfg.out = *flags.out;
      if (flags.realizations) cfg.eval_realizations = *flags.realizations;
      if (flags.training_size) cfg.training_size = *flags.training_size;
      if (flags.jobs) cfg.jobs = *flags.jobs;
      cfg.validate();
      return run_eval(cfg);
    }
    if (fig2->parsed()) {
      ExperimentConfig cfg;
      if (flags.seed) cfg.seed = *flags.seed;
      if (flags.training_size) cfg.training_size = *flags.training_size;
      return run_fig2(cfg, flags);
    }
  } catch (const InvalidConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
