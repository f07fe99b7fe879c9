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

#include "bdris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "bdris/link_layer.hpp"
#include "bdris/rng.hpp"

namespace bdris {

void ExperimentConfig::validate() const {
  if (element_sweep.empty() || group_size_sweep.empty() || rho_sweep.empty())
    throw InvalidConfigError("sweep lists must be non-empty");
  if (architectures.empty()) throw InvalidConfigError("no architectures selected");
  if (training_size < 1 || eval_realizations < 1)
    throw InvalidConfigError("training and evaluation sizes must be >= 1");
  if (jobs < 1) throw InvalidConfigError("jobs must be >= 1");
  if (mu_restarts < 1 || mu_max_iterations < 1)
    throw InvalidConfigError("multi-user solver settings must be >= 1");
  for (int n : element_sweep) {
    if (n < 1 || n % base.upa_vertical != 0)
      throw InvalidConfigError("every swept N must be a positive multiple of N_V");
    for (int g : group_size_sweep) {
      SystemConfig point = base;
      point.ris_elements = n;
      point.upa_horizontal = n / base.upa_vertical;
      point.group_size = g;
      point.users = (mode == Mode::kSingleUser) ? 1 : base.users;
      for (double rho : rho_sweep) {
        point.correlation = rho;
        point.validate();
      }
    }
  }
  if (mode == Mode::kMultiUser && base.users > base.tx_antennas)
    throw InvalidConfigError("zero forcing requires users <= transmit antennas");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("key '" + key + "': cannot parse integer '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("key '" + key + "': cannot parse number '" + value + "'");
  }
}

std::array<double, 2> parse_position(const std::string& key, const std::string& value) {
  const auto parts = split_list(value);
  if (parts.size() != 2)
    throw InvalidConfigError("key '" + key + "': expected two comma-separated coordinates");
  return {parse_real(key, parts[0]), parse_real(key, parts[1])};
}

Architecture parse_architecture(const std::string& value) {
  if (value == "single") return Architecture::kSingle;
  if (value == "group-NG") return Architecture::kGroupSequential;
  if (value == "group-OG") return Architecture::kGroupOptimized;
  if (value == "fully") return Architecture::kFully;
  throw InvalidConfigError("unknown architecture '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfigError("line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      throw InvalidConfigError("key '" + key + "' has an empty value");

    if (key == "mode") {
      if (value == "single-user") cfg.mode = Mode::kSingleUser;
      else if (value == "multi-user") cfg.mode = Mode::kMultiUser;
      else throw InvalidConfigError("unknown mode '" + value + "'");
    } else if (key == "N") {
      cfg.element_sweep.clear();
      for (const auto& v : split_list(value)) cfg.element_sweep.push_back(parse_int(key, v));
    } else if (key == "N_G") {
      cfg.group_size_sweep.clear();
      for (const auto& v : split_list(value)) cfg.group_size_sweep.push_back(parse_int(key, v));
    } else if (key == "rho") {
      cfg.rho_sweep.clear();
      for (const auto& v : split_list(value)) cfg.rho_sweep.push_back(parse_real(key, v));
    } else if (key == "architectures") {
      cfg.architectures.clear();
      for (const auto& v : split_list(value)) cfg.architectures.push_back(parse_architecture(v));
    } else if (key == "N_V") {
      cfg.base.upa_vertical = parse_int(key, value);
    } else if (key == "M") {
      cfg.base.tx_antennas = parse_int(key, value);
    } else if (key == "K") {
      cfg.base.users = parse_int(key, value);
    } else if (key == "Z0") {
      cfg.base.reference_impedance = parse_real(key, value);
    } else if (key == "P_T") {
      cfg.base.tx_power = parse_real(key, value);
    } else if (key == "sigma_z2") {
      cfg.base.noise_power = parse_real(key, value);
    } else if (key == "L0") {
      cfg.base.ref_path_loss = parse_real(key, value);
    } else if (key == "alpha_R") {
      cfg.base.pl_exponent_rx = parse_real(key, value);
    } else if (key == "alpha_T") {
      cfg.base.pl_exponent_tx = parse_real(key, value);
    } else if (key == "tx_pos") {
      cfg.base.tx_pos = parse_position(key, value);
    } else if (key == "ris_pos") {
      cfg.base.ris_pos = parse_position(key, value);
    } else if (key == "rx_pos") {
      cfg.base.rx_pos = parse_position(key, value);
    } else if (key == "training_size") {
      cfg.training_size = parse_int(key, value);
    } else if (key == "eval_realizations") {
      cfg.eval_realizations = parse_int(key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "jobs") {
      cfg.jobs = parse_int(key, value);
    } else if (key == "mu_restarts") {
      cfg.mu_restarts = parse_int(key, value);
    } else if (key == "mu_max_iterations") {
      cfg.mu_max_iterations = parse_int(key, value);
    } else {
      throw InvalidConfigError("unknown configuration key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

namespace {

struct ArchInstance {
  Architecture arch;
  int group_size;
  GroupingStrategy strategy;
};

struct PointStats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

PointStats mean_and_stderr(const std::vector<double>& values) {
  PointStats s;
  const auto n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

// Delta-method standard error of mean(a)/mean(b) from paired samples.
double ratio_stderr(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  if (a.size() < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double va = 0.0, vb = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cov += (a[i] - ma) * (b[i] - mb);
  }
  va /= (n - 1.0);
  vb /= (n - 1.0);
  cov /= (n - 1.0);
  const double r = ma / mb;
  const double var =
      (va / (mb * mb) + r * r * vb / (mb * mb) - 2.0 * r * cov / (mb * mb)) / n;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

double evaluate_realization(Mode mode, const ArchInstance& inst,
                            const ChannelRealization& ch, const SystemConfig& cfg,
                            const QuasiNewtonOptions& mu_options) {
  const Eigen::MatrixXcd rx = group_rx_channel(ch.rx_channels, inst.strategy);
  const Eigen::MatrixXcd tx = group_tx_channel(ch.tx_channel, inst.strategy);
  if (mode == Mode::kSingleUser) {
    const SuScatteringResult res = optimize_scattering_su(inst.strategy, ch);
    const Eigen::MatrixXcd h = effective_channel(res.blocks, rx.topRows(1), tx);
    return received_power(h.row(0), mrt_precoder(h.row(0)), cfg.tx_power);
  }
  const MuScatteringResult res =
      optimize_scattering_mu(inst.strategy, ch, mu_options);
  const Eigen::MatrixXcd h = effective_channel(res.blocks, rx, tx);
  const PrecoderSet precoders = zf_precoders(h);
  return sum_rate(h, precoders, cfg.tx_power, cfg.noise_power) / std::numbers::ln2;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentOutcome outcome;

  for (int n : cfg.element_sweep) {
    for (double rho : cfg.rho_sweep) {
      SystemConfig point = cfg.base;
      point.ris_elements = n;
      point.upa_horizontal = n / cfg.base.upa_vertical;
      point.correlation = rho;
      point.users = (cfg.mode == Mode::kSingleUser) ? 1 : cfg.base.users;
      const std::uint64_t rho_bits = std::bit_cast<std::uint64_t>(rho);
      const auto t_start = std::chrono::steady_clock::now();
      try {
        const CorrelationSpec spec = make_correlation_spec(point);
        const std::uint64_t train_seed = derive_stream(
            cfg.seed, {stream_tag::kTrainingSet, static_cast<std::uint64_t>(n), rho_bits});
        const std::uint64_t eval_seed = derive_stream(
            cfg.seed, {stream_tag::kEvalSet, static_cast<std::uint64_t>(n), rho_bits});
        const TrainingSet training =
            sample_realizations(point, spec, cfg.training_size, train_seed);
        const TrainingSet evaluation =
            sample_realizations(point, spec, cfg.eval_realizations, eval_seed);

        SurrogatePrecompute pre;
        const bool needs_optimized =
            std::find(cfg.architectures.begin(), cfg.architectures.end(),
                      Architecture::kGroupOptimized) != cfg.architectures.end();
        if (needs_optimized)
          pre = (cfg.mode == Mode::kSingleUser) ? build_su_precompute(training)
                                                : build_mu_precompute(training);

        // Single- and fully-connected run once per sweep point; the group
        // architectures once per swept group size.
        std::vector<ArchInstance> instances;
        for (Architecture arch : cfg.architectures) {
          switch (arch) {
            case Architecture::kSingle:
              instances.push_back({arch, 1, sequential_grouping(n, 1)});
              break;
            case Architecture::kFully:
              instances.push_back({arch, n, sequential_grouping(n, n)});
              break;
            case Architecture::kGroupSequential:
              for (int g : cfg.group_size_sweep)
                instances.push_back({arch, g, sequential_grouping(n, g)});
              break;
            case Architecture::kGroupOptimized:
              for (int g : cfg.group_size_sweep)
                instances.push_back({arch, g, optimize_grouping(pre, g).first});
              break;
          }
        }

        // Evaluation: workers pick realizations by index; every value lands
        // in its slot, so aggregation below is independent of scheduling.
        const int realizations = evaluation.count();
        std::vector<std::vector<double>> metric(
            instances.size(), std::vector<double>(realizations, 0.0));
        std::vector<std::string> failures(realizations);
        std::atomic<int> next{0};
        auto worker = [&]() {
          for (int r = next.fetch_add(1); r < realizations; r = next.fetch_add(1)) {
            try {
              for (std::size_t a = 0; a < instances.size(); ++a) {
                QuasiNewtonOptions mu_options;
                mu_options.restarts = cfg.mu_restarts;
                mu_options.max_iterations = cfg.mu_max_iterations;
                mu_options.reference_impedance = point.reference_impedance;
                mu_options.seed = derive_stream(
                    eval_seed, {stream_tag::kReactanceInit,
                                static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(a)});
                metric[a][r] = evaluate_realization(
                    cfg.mode, instances[a], evaluation.realizations[r], point,
                    mu_options);
              }
            } catch (const std::exception& e) {
              failures[r] = e.what();
            }
          }
        };
        if (cfg.jobs == 1) {
          worker();
        } else {
          std::vector<std::thread> pool;
          for (int j = 0; j < cfg.jobs; ++j) pool.emplace_back(worker);
          for (auto& t : pool) t.join();
        }
        for (int r = 0; r < realizations; ++r)
          if (!failures[r].empty())
            throw NumericalError("realization " + std::to_string(r) + ": " + failures[r]);

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                .count();

        const char* metric_name =
            cfg.mode == Mode::kSingleUser ? "power" : "sum_rate";
        const char* gain_name =
            cfg.mode == Mode::kSingleUser ? "power_gain" : "sum_rate_gain";
        int single_index = -1;
        for (std::size_t a = 0; a < instances.size(); ++a)
          if (instances[a].arch == Architecture::kSingle)
            single_index = static_cast<int>(a);

        for (std::size_t a = 0; a < instances.size(); ++a) {
          const PointStats stats = mean_and_stderr(metric[a]);
          ResultRow row;
          row.mode = to_string(cfg.mode);
          row.elements = n;
          row.upa_horizontal = point.upa_horizontal;
          row.upa_vertical = point.upa_vertical;
          row.group_size = instances[a].group_size;
          row.rho = rho;
          row.architecture = to_string(instances[a].arch);
          row.metric = metric_name;
          row.mean = stats.mean;
          row.stderr_ = stats.stderr_;
          row.count = realizations;
          row.seed = cfg.seed;
          row.tx_power = point.tx_power;
          row.noise_power = point.noise_power;
          row.wall_seconds = wall;
          outcome.rows.push_back(row);
          if (single_index >= 0) {
            const PointStats base_stats = mean_and_stderr(metric[single_index]);
            row.metric = gain_name;
            row.mean = stats.mean / base_stats.mean;
            row.stderr_ = ratio_stderr(metric[a], metric[single_index]);
            outcome.rows.push_back(row);
          }
        }
      } catch (const std::exception& e) {
        outcome.errors.push_back("N=" + std::to_string(n) + " rho=" +
                                 format_double(rho) + ": " + e.what());
      }
    }
  }
  return outcome;
}

std::string export_grouping_map(const GroupingStrategy& strategy,
                                int upa_horizontal, int upa_vertical) {
  if (upa_horizontal * upa_vertical != strategy.size())
    throw InvalidConfigError("grid dimensions do not match the strategy size");
  const GroupingStrategy canon = strategy.canonical();
  std::vector<int> owner = canon.group_of_elements();
  std::ostringstream out;
  for (int iv = 0; iv < upa_vertical; ++iv) {
    for (int ih = 0; ih < upa_horizontal; ++ih) {
      if (ih) out << ',';
      out << owner[ih * upa_vertical + iv] + 1;
    }
    out << '\n';
  }
  return out.str();
}

GroupingStrategy parse_grouping_map(const std::string& csv, int group_size) {
  std::vector<std::vector<int>> grid;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stoi(cell) - 1);
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw InvalidConfigError("empty grouping map");
  const int upa_vertical = static_cast<int>(grid.size());
  const int upa_horizontal = static_cast<int>(grid.front().size());
  const int n = upa_vertical * upa_horizontal;
  std::vector<std::vector<int>> groups(n / group_size);
  for (int iv = 0; iv < upa_vertical; ++iv) {
    if (static_cast<int>(grid[iv].size()) != upa_horizontal)
      throw InvalidConfigError("ragged grouping map");
    for (int ih = 0; ih < upa_horizontal; ++ih) {
      const int id = grid[iv][ih];
      if (id < 0 || id >= n / group_size)
        throw InvalidConfigError("group id out of range in grouping map");
      groups[id].push_back(ih * upa_vertical + iv);
    }
  }
  std::vector<int> perm;
  perm.reserve(n);
  for (auto& g : groups) {
    if (static_cast<int>(g.size()) != group_size)
      throw InvalidConfigError("group sizes in the map are not uniform");
    std::sort(g.begin(), g.end());
    perm.insert(perm.end(), g.begin(), g.end());
  }
  return GroupingStrategy(std::move(perm), group_size).canonical();
}

double intra_group_distance(const GroupingStrategy& strategy,
                            int upa_horizontal, int upa_vertical,
                            double spacing) {
  if (upa_horizontal * upa_vertical != strategy.size())
    throw InvalidConfigError("grid dimensions do not match the strategy size");
  if (strategy.group_size() == 1) return 0.0;
  double total = 0.0;
  for (int g = 0; g < strategy.groups(); ++g) {
    auto members = strategy.group(g);
    double acc = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double xi = members[i] / upa_vertical, yi = members[i] % upa_vertical;
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const double xj = members[j] / upa_vertical, yj = members[j] % upa_vertical;
        acc += std::hypot(xi - xj, yi - yj);
        ++pairs;
      }
    }
    total += acc / pairs;
  }
  return spacing * total / strategy.groups();
}

}  // namespace bdris
