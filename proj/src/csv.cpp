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

#include <charconv>
#include <fstream>
#include <sstream>

#include "bdris/experiment.hpp"

namespace bdris {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidConfigError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw NumericalError("write failure on " + path);
}

std::string to_string(Mode mode) {
  return mode == Mode::kSingleUser ? "single-user" : "multi-user";
}

std::string to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kSingle: return "single";
    case Architecture::kGroupSequential: return "group-NG";
    case Architecture::kGroupOptimized: return "group-OG";
    case Architecture::kFully: return "fully";
  }
  return "?";
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  return out.str();
}

std::string join_doubles(const std::vector<double>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_double(values[i]);
  }
  return out.str();
}

}  // namespace

std::string results_to_csv(const std::vector<ResultRow>& rows,
                           const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# bdris results\n";
  out << "# mode = " << to_string(cfg.mode) << '\n';
  out << "# N = " << join_ints(cfg.element_sweep) << '\n';
  out << "# N_G = " << join_ints(cfg.group_size_sweep) << '\n';
  out << "# rho = " << join_doubles(cfg.rho_sweep) << '\n';
  out << "# N_V = " << cfg.base.upa_vertical << '\n';
  out << "# M = " << cfg.base.tx_antennas << '\n';
  out << "# K = " << (cfg.mode == Mode::kSingleUser ? 1 : cfg.base.users) << '\n';
  out << "# Z0 = " << format_double(cfg.base.reference_impedance) << '\n';
  out << "# P_T = " << format_double(cfg.base.tx_power) << '\n';
  out << "# sigma_z2 = " << format_double(cfg.base.noise_power) << '\n';
  out << "# L0 = " << format_double(cfg.base.ref_path_loss) << '\n';
  out << "# alpha_R = " << format_double(cfg.base.pl_exponent_rx) << '\n';
  out << "# alpha_T = " << format_double(cfg.base.pl_exponent_tx) << '\n';
  out << "# training_size = " << cfg.training_size << '\n';
  out << "# eval_realizations = " << cfg.eval_realizations << '\n';
  out << "# seed = " << cfg.seed << '\n';
  out << "# zf_allocation = equal-norm\n";
  out << "# rate_unit = bit/s/Hz\n";
  out << kResultsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.mode << ',' << r.elements << ',' << r.upa_horizontal << ','
        << r.upa_vertical << ',' << r.group_size << ',' << format_double(r.rho)
        << ',' << r.architecture << ',' << r.metric << ','
        << format_double(r.mean) << ',' << format_double(r.stderr_) << ','
        << r.count << ',' << r.seed << ',' << format_double(r.tx_power) << ','
        << format_double(r.noise_power) << '\n';
  }
  return out.str();
}

std::string trace_to_csv(const SearchTrace& trace) {
  std::ostringstream out;
  out << "iteration,objective,n_evaluated,accepted_partition_string\n";
  for (const auto& step : trace.steps) {
    out << step.iteration << ',' << format_double(step.objective) << ','
        << step.raw_neighborhood << ",\"" << step.accepted.partition_string()
        << "\"\n";
  }
  return out.str();
}

}  // namespace bdris
