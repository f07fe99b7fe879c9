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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bdris/channel.hpp"
#include "bdris/core_model.hpp"
#include "bdris/experiment.hpp"
#include "bdris/grouping_search.hpp"
#include "bdris/linalg.hpp"
#include "bdris/link_layer.hpp"
#include "bdris/scattering_opt.hpp"

namespace py = pybind11;
using namespace bdris;

namespace {

ScatteringBlocks blocks_from_list(const std::vector<Eigen::MatrixXcd>& blocks) {
  ScatteringBlocks out;
  out.blocks = blocks;
  return out;
}

}  // namespace

PYBIND11_MODULE(_bdris, m) {
  m.doc() = "Grouping-strategy and scattering-matrix optimization for "
            "beyond diagonal RIS";

  py::register_exception<InvalidConfigError>(m, "InvalidConfigError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<RankError>(m, "RankError", PyExc_ArithmeticError);
  py::register_exception<CountOverflowError>(m, "CountOverflowError", PyExc_OverflowError);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("ris_elements", &SystemConfig::ris_elements)
      .def_readwrite("upa_horizontal", &SystemConfig::upa_horizontal)
      .def_readwrite("upa_vertical", &SystemConfig::upa_vertical)
      .def_readwrite("tx_antennas", &SystemConfig::tx_antennas)
      .def_readwrite("users", &SystemConfig::users)
      .def_readwrite("group_size", &SystemConfig::group_size)
      .def_readwrite("reference_impedance", &SystemConfig::reference_impedance)
      .def_readwrite("tx_power", &SystemConfig::tx_power)
      .def_readwrite("noise_power", &SystemConfig::noise_power)
      .def_readwrite("correlation", &SystemConfig::correlation)
      .def_readwrite("ref_path_loss", &SystemConfig::ref_path_loss)
      .def_readwrite("pl_exponent_rx", &SystemConfig::pl_exponent_rx)
      .def_readwrite("pl_exponent_tx", &SystemConfig::pl_exponent_tx)
      .def_readwrite("tx_pos", &SystemConfig::tx_pos)
      .def_readwrite("ris_pos", &SystemConfig::ris_pos)
      .def_readwrite("rx_pos", &SystemConfig::rx_pos)
      .def("groups", &SystemConfig::groups)
      .def("validate", &SystemConfig::validate);

  py::class_<GroupingStrategy>(m, "GroupingStrategy")
      .def(py::init<std::vector<int>, int>(), py::arg("perm"), py::arg("group_size"))
      .def_property_readonly("perm",
                             [](const GroupingStrategy& s) {
                               return std::vector<int>(s.slots().begin(),
                                                       s.slots().end());
                             })
      .def_property_readonly("group_size", &GroupingStrategy::group_size)
      .def_property_readonly("groups", &GroupingStrategy::groups)
      .def("group",
           [](const GroupingStrategy& s, int g) {
             auto members = s.group(g);
             return std::vector<int>(members.begin(), members.end());
           })
      .def("canonical", &GroupingStrategy::canonical)
      .def("same_partition", &GroupingStrategy::same_partition)
      .def("partition_string", &GroupingStrategy::partition_string)
      .def("__repr__", [](const GroupingStrategy& s) {
        return "GroupingStrategy(" + s.partition_string() + ")";
      });

  py::class_<ScatteringBlocks>(m, "ScatteringBlocks")
      .def(py::init(&blocks_from_list), py::arg("blocks"))
      .def_readwrite("blocks", &ScatteringBlocks::blocks)
      .def("check", &ScatteringBlocks::check, py::arg("tol") = kBlockTolerance);

  py::class_<ReactanceBlocks>(m, "ReactanceBlocks")
      .def_readwrite("blocks", &ReactanceBlocks::blocks)
      .def("check", &ReactanceBlocks::check, py::arg("tol") = kBlockTolerance);

  m.def("sequential_grouping", &sequential_grouping, py::arg("elements"),
        py::arg("group_size"));
  m.def("permutation_matrix", &permutation_matrix);
  m.def("assemble_scattering", &assemble_scattering);
  m.def("cayley_scattering", &cayley_scattering, py::arg("reactance"),
        py::arg("z0") = 50.0);
  m.def("count_groupings", &count_groupings, py::arg("elements"),
        py::arg("group_size"));
  m.def("group_rx_channel", &group_rx_channel);
  m.def("group_tx_channel", &group_tx_channel);

  py::class_<CorrelationSpec>(m, "CorrelationSpec")
      .def_readwrite("r_ris", &CorrelationSpec::r_ris)
      .def_readwrite("r_tx", &CorrelationSpec::r_tx)
      .def_readwrite("r_t", &CorrelationSpec::r_t)
      .def_readwrite("rx_path_loss", &CorrelationSpec::rx_path_loss)
      .def_readwrite("tx_path_loss", &CorrelationSpec::tx_path_loss);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init<>())
      .def_readwrite("tx_channel", &ChannelRealization::tx_channel)
      .def_readwrite("rx_channels", &ChannelRealization::rx_channels);

  py::class_<TrainingSet>(m, "TrainingSet")
      .def(py::init<>())
      .def_readwrite("realizations", &TrainingSet::realizations)
      .def_readwrite("seed", &TrainingSet::seed)
      .def("count", &TrainingSet::count);

  m.def("exponential_corr", &exponential_corr, py::arg("n"), py::arg("rho"));
  m.def("ris_covariance", &ris_covariance, py::arg("n_h"), py::arg("n_v"),
        py::arg("rho"));
  m.def("path_loss", &path_loss, py::arg("distance"), py::arg("alpha"),
        py::arg("l0"));
  m.def("make_correlation_spec", &make_correlation_spec);
  m.def("sample_realizations", &sample_realizations, py::arg("cfg"),
        py::arg("spec"), py::arg("count"), py::arg("seed"));
  m.def("write_training_set", &write_training_set);
  m.def("read_training_set", &read_training_set);

  py::class_<SingularTriplet>(m, "SingularTriplet")
      .def_readonly("sigma", &SingularTriplet::sigma)
      .def_readonly("left", &SingularTriplet::left)
      .def_readonly("right", &SingularTriplet::right);
  m.def("dominant_singular_triplet", &dominant_singular_triplet);

  py::class_<SurrogatePrecompute>(m, "SurrogatePrecompute")
      .def_readwrite("rx_weight", &SurrogatePrecompute::rx_weight)
      .def_readwrite("tx_weight", &SurrogatePrecompute::tx_weight)
      .def("count", &SurrogatePrecompute::count)
      .def("size", &SurrogatePrecompute::size);
  m.def("build_su_precompute", &build_su_precompute, py::arg("set"),
        py::arg("use_power_iteration") = false);
  m.def("build_mu_precompute", &build_mu_precompute, py::arg("set"),
        py::arg("use_power_iteration") = false);
  m.def("su_grouping_objective", &su_grouping_objective);
  m.def("mu_grouping_objective", &mu_grouping_objective);
  m.def("swap_neighborhood", &swap_neighborhood);

  py::class_<SearchStep>(m, "SearchStep")
      .def_readonly("iteration", &SearchStep::iteration)
      .def_readonly("objective", &SearchStep::objective)
      .def_readonly("accepted", &SearchStep::accepted)
      .def_readonly("raw_neighborhood", &SearchStep::raw_neighborhood)
      .def_readonly("distinct_neighborhood", &SearchStep::distinct_neighborhood);
  py::class_<SearchTrace>(m, "SearchTrace")
      .def_readonly("steps", &SearchTrace::steps);
  m.def("optimize_grouping", &optimize_grouping, py::arg("pre"),
        py::arg("group_size"));

  m.def("symmetric_unitary_map", &symmetric_unitary_map, py::arg("from_vec"),
        py::arg("to_vec"));
  m.def("closed_form_blocks", &closed_form_blocks);

  py::class_<SuScatteringResult>(m, "SuScatteringResult")
      .def_readonly("blocks", &SuScatteringResult::blocks)
      .def_readonly("gain", &SuScatteringResult::gain)
      .def_readonly("objective_trace", &SuScatteringResult::objective_trace)
      .def_readonly("iterations", &SuScatteringResult::iterations);
  m.def("optimize_scattering_su", &optimize_scattering_su);

  py::class_<QuasiNewtonOptions>(m, "QuasiNewtonOptions")
      .def(py::init<>())
      .def_readwrite("max_iterations", &QuasiNewtonOptions::max_iterations)
      .def_readwrite("gradient_tolerance", &QuasiNewtonOptions::gradient_tolerance)
      .def_readwrite("init_scale", &QuasiNewtonOptions::init_scale)
      .def_readwrite("restarts", &QuasiNewtonOptions::restarts)
      .def_readwrite("finite_difference_step",
                     &QuasiNewtonOptions::finite_difference_step)
      .def_readwrite("reference_impedance", &QuasiNewtonOptions::reference_impedance)
      .def_readwrite("seed", &QuasiNewtonOptions::seed);

  py::enum_<QuasiNewtonStatus>(m, "QuasiNewtonStatus")
      .value("GRADIENT_TOLERANCE", QuasiNewtonStatus::kGradientTolerance)
      .value("MAX_ITERATIONS", QuasiNewtonStatus::kMaxIterations)
      .value("STALLED", QuasiNewtonStatus::kStalled);

  py::class_<ReactanceProblem>(m, "ReactanceProblem")
      .def(py::init<Eigen::MatrixXcd, Eigen::MatrixXcd, int, double>(),
           py::arg("rx_grouped"), py::arg("tx_grouped"), py::arg("group_size"),
           py::arg("z0") = 50.0)
      .def("dim", &ReactanceProblem::dim)
      .def("value", &ReactanceProblem::value)
      .def("value_and_gradient",
           [](const ReactanceProblem& p, const Eigen::VectorXd& x) {
             Eigen::VectorXd grad;
             const double value = p.value_and_gradient(x, grad);
             return py::make_tuple(value, grad);
           })
      .def("finite_difference_gradient", &ReactanceProblem::finite_difference_gradient)
      .def("unpack", &ReactanceProblem::unpack)
      .def("pack", &ReactanceProblem::pack);

  py::class_<MuScatteringResult>(m, "MuScatteringResult")
      .def_readonly("reactance", &MuScatteringResult::reactance)
      .def_readonly("blocks", &MuScatteringResult::blocks)
      .def_readonly("objective", &MuScatteringResult::objective)
      .def_readonly("status", &MuScatteringResult::status)
      .def_readonly("iterations", &MuScatteringResult::iterations)
      .def_readonly("rejected_steps", &MuScatteringResult::rejected_steps)
      .def_readonly("gradient_norm", &MuScatteringResult::gradient_norm);
  m.def("optimize_scattering_mu", &optimize_scattering_mu, py::arg("strategy"),
        py::arg("channel"), py::arg("options") = QuasiNewtonOptions{});

  py::class_<PrecoderSet>(m, "PrecoderSet")
      .def_readwrite("vectors", &PrecoderSet::vectors)
      .def("users", &PrecoderSet::users);
  m.def("mrt_precoder", &mrt_precoder);
  m.def("zf_precoders", &zf_precoders);
  m.def("received_power", &received_power, py::arg("h"), py::arg("w"),
        py::arg("tx_power"));
  m.def("sum_rate", &sum_rate, py::arg("h"), py::arg("precoders"),
        py::arg("tx_power"), py::arg("noise_power"));
  m.def("effective_channel", &effective_channel);

  py::enum_<Mode>(m, "Mode")
      .value("SINGLE_USER", Mode::kSingleUser)
      .value("MULTI_USER", Mode::kMultiUser);
  py::enum_<Architecture>(m, "Architecture")
      .value("SINGLE", Architecture::kSingle)
      .value("GROUP_SEQUENTIAL", Architecture::kGroupSequential)
      .value("GROUP_OPTIMIZED", Architecture::kGroupOptimized)
      .value("FULLY", Architecture::kFully);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("base", &ExperimentConfig::base)
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("element_sweep", &ExperimentConfig::element_sweep)
      .def_readwrite("group_size_sweep", &ExperimentConfig::group_size_sweep)
      .def_readwrite("rho_sweep", &ExperimentConfig::rho_sweep)
      .def_readwrite("architectures", &ExperimentConfig::architectures)
      .def_readwrite("training_size", &ExperimentConfig::training_size)
      .def_readwrite("eval_realizations", &ExperimentConfig::eval_realizations)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def_readwrite("mu_restarts", &ExperimentConfig::mu_restarts)
      .def_readwrite("mu_max_iterations", &ExperimentConfig::mu_max_iterations)
      .def("validate", &ExperimentConfig::validate);
  m.def("parse_config_file", &parse_config_file);
  m.def("parse_config_text", &parse_config_text);

  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("mode", &ResultRow::mode)
      .def_readonly("elements", &ResultRow::elements)
      .def_readonly("group_size", &ResultRow::group_size)
      .def_readonly("rho", &ResultRow::rho)
      .def_readonly("architecture", &ResultRow::architecture)
      .def_readonly("metric", &ResultRow::metric)
      .def_readonly("mean", &ResultRow::mean)
      .def_readonly("stderr", &ResultRow::stderr_)
      .def_readonly("count", &ResultRow::count);
  py::class_<ExperimentOutcome>(m, "ExperimentOutcome")
      .def_readonly("rows", &ExperimentOutcome::rows)
      .def_readonly("errors", &ExperimentOutcome::errors);
  m.def("run_experiment", &run_experiment,
        py::call_guard<py::gil_scoped_release>());
  m.def("results_to_csv", &results_to_csv);
  m.def("trace_to_csv", &trace_to_csv);
  m.def("export_grouping_map", &export_grouping_map, py::arg("strategy"),
        py::arg("upa_horizontal"), py::arg("upa_vertical"));
  m.def("intra_group_distance", &intra_group_distance, py::arg("strategy"),
        py::arg("upa_horizontal"), py::arg("upa_vertical"),
        py::arg("spacing") = 1.0);
}
