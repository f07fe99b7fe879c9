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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <Eigen/Dense>

#include "bdris/channel.hpp"
#include "bdris/linalg.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace bdris;

namespace {

SystemConfig small_config(int n_h, int n_v, int m, int k, double rho) {
  SystemConfig cfg;
  cfg.ris_elements = n_h * n_v;
  cfg.upa_horizontal = n_h;
  cfg.upa_vertical = n_v;
  cfg.tx_antennas = m;
  cfg.users = k;
  cfg.group_size = 1;
  cfg.correlation = rho;
  return cfg;
}

}  // namespace

TEST_CASE("exponential correlation matrix") {
  const Eigen::MatrixXd r2 = exponential_corr(2, 0.6);
  CHECK(r2(0, 1) == doctest::Approx(0.6));
  CHECK(r2(0, 0) == 1.0);

  CHECK(exponential_corr(3, 0.0).isApprox(Eigen::MatrixXd::Identity(3, 3)));

  const Eigen::MatrixXd r3 = exponential_corr(3, 0.8);
  Eigen::MatrixXd expect(3, 3);
  expect << 1.0, 0.8, 0.64, 0.8, 1.0, 0.8, 0.64, 0.8, 1.0;
  CHECK((r3 - expect).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(exponential_corr(8, 0.9));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  CHECK_THROWS_AS(exponential_corr(3, 1.0), InvalidConfigError);
  CHECK_THROWS_AS(exponential_corr(3, -0.1), InvalidConfigError);
}

TEST_CASE("UPA covariance is the Kronecker of the axis correlations") {
  CHECK(ris_covariance(1, 2, 0.7).isApprox(exponential_corr(2, 0.7)));

  const Eigen::MatrixXd r = ris_covariance(2, 2, 0.6);
  CHECK(r.isApprox(kronecker(exponential_corr(2, 0.6), exponential_corr(2, 0.6))));
  // Element n = i_h * n_v + i_v: (0,0) vs (1,0) differ horizontally.
  CHECK(r(0, 2) == doctest::Approx(0.6));
  CHECK(r(0, 1) == doctest::Approx(0.6));
  CHECK(r(0, 3) == doctest::Approx(0.36));
  CHECK(ris_covariance(3, 4, 0.8).diagonal().isApprox(Eigen::VectorXd::Ones(12)));
}

TEST_CASE("path loss model") {
  CHECK(path_loss(1.0, 2.8, 1e-3) == doctest::Approx(1e-3));
  CHECK(path_loss(std::sqrt(8.0), 2.8, 1e-3) == doctest::Approx(5.4418e-5).epsilon(1e-3));
  CHECK(path_loss(std::sqrt(2504.0), 2.0, 1e-3) == doctest::Approx(3.9936e-7).epsilon(1e-3));
  CHECK_THROWS_AS(path_loss(0.0, 2.0, 1e-3), InvalidConfigError);
}

TEST_CASE("correlation spec from the default geometry") {
  SystemConfig cfg;  // defaults: 2x8 UPA, rho 0.8, paper geometry
  const CorrelationSpec spec = make_correlation_spec(cfg);
  CHECK(spec.rx_path_loss == doctest::Approx(5.4418e-5).epsilon(1e-3));
  CHECK(spec.tx_path_loss == doctest::Approx(3.9936e-7).epsilon(1e-3));
  CHECK(spec.r_t.isApprox(kronecker(spec.r_ris, spec.r_tx)));
  CHECK(spec.r_ris.rows() == 16);
  CHECK(spec.r_t.rows() == 16 * 4);
}

TEST_CASE("sampling determinism and zero mean") {
  const SystemConfig cfg = small_config(2, 2, 2, 2, 0.5);
  const CorrelationSpec spec = make_correlation_spec(cfg);

  const TrainingSet a = sample_realizations(cfg, spec, 5, 99);
  const TrainingSet b = sample_realizations(cfg, spec, 5, 99);
  for (int c = 0; c < 5; ++c) {
    CHECK((a.realizations[c].tx_channel - b.realizations[c].tx_channel)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((a.realizations[c].rx_channels - b.realizations[c].rx_channels)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  const TrainingSet other = sample_realizations(cfg, spec, 5, 100);
  CHECK((a.realizations[0].tx_channel - other.realizations[0].tx_channel)
            .cwiseAbs()
            .maxCoeff() > 0.0);

  // Empirical mean within a 4-sigma Monte-Carlo band.
  const int draws = 10000;
  const TrainingSet big = sample_realizations(cfg, spec, draws, 7);
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(cfg.ris_elements);
  for (const auto& real : big.realizations)
    mean += real.rx_channels.row(0).transpose();
  mean /= draws;
  const double band = 4.0 * std::sqrt(spec.rx_path_loss / draws);
  CHECK(mean.cwiseAbs().maxCoeff() < band);
}

TEST_CASE("receiver covariance matches the specification") {
  const SystemConfig cfg = small_config(2, 2, 2, 1, 0.5);
  const CorrelationSpec spec = make_correlation_spec(cfg);
  const int draws = 10000;
  const TrainingSet set = sample_realizations(cfg, spec, draws, 31);
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(4, 4);
  for (const auto& real : set.realizations) {
    const Eigen::VectorXcd h = real.rx_channels.row(0).transpose();
    cov += h * h.adjoint();
  }
  cov /= draws;
  const double err =
      (cov - spec.rx_path_loss * spec.r_ris.cast<std::complex<double>>())
          .cwiseAbs()
          .maxCoeff();
  CHECK(err < 0.05 * spec.rx_path_loss);
}

TEST_CASE("uncorrelated elements are empirically independent") {
  const SystemConfig cfg = small_config(2, 2, 2, 1, 0.0);
  const CorrelationSpec spec = make_correlation_spec(cfg);
  const int draws = 10000;
  const TrainingSet set = sample_realizations(cfg, spec, draws, 13);
  std::complex<double> cross = 0.0;
  for (const auto& real : set.realizations)
    cross += real.rx_channels(0, 0) * std::conj(real.rx_channels(0, 3));
  cross /= static_cast<double>(draws);
  CHECK(std::abs(cross) < 4.0 * spec.rx_path_loss / std::sqrt(double(draws)));
}

TEST_CASE("transmit channel covariance pins the vec convention") {
  // Column-major vec of the N x M matrix: the RIS factor must appear as the
  // fast Kronecker factor. Unequal factor sizes make the reversed order
  // distinguishable.
  const SystemConfig cfg = small_config(1, 3, 2, 1, 0.8);
  const CorrelationSpec spec = make_correlation_spec(cfg);
  const int draws = 20000;
  const TrainingSet set = sample_realizations(cfg, spec, draws, 17);
  const int nm = cfg.ris_elements * cfg.tx_antennas;
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(nm, nm);
  for (const auto& real : set.realizations) {
    const Eigen::Map<const Eigen::VectorXcd> vec(real.tx_channel.data(), nm);
    cov += vec * vec.adjoint();
  }
  cov /= draws;
  const Eigen::MatrixXd column_major_law =
      spec.tx_path_loss * kronecker(spec.r_tx, spec.r_ris);
  const Eigen::MatrixXd reversed_law = spec.tx_path_loss * spec.r_t;
  const double err_good =
      (cov - column_major_law.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
  const double err_bad =
      (cov - reversed_law.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
  CHECK(err_good < 0.05 * spec.tx_path_loss);
  CHECK(err_bad > 0.15 * spec.tx_path_loss);

  // Entry-wise physical law: RIS correlation across rows, array correlation
  // across columns.
  std::complex<double> row_pair = 0.0, col_pair = 0.0;
  for (const auto& real : set.realizations) {
    row_pair += real.tx_channel(0, 0) * std::conj(real.tx_channel(1, 0));
    col_pair += real.tx_channel(0, 0) * std::conj(real.tx_channel(0, 1));
  }
  row_pair /= static_cast<double>(draws);
  col_pair /= static_cast<double>(draws);
  CHECK(std::abs(row_pair - spec.tx_path_loss * spec.r_ris(0, 1)) <
        0.05 * spec.tx_path_loss);
  CHECK(std::abs(col_pair - spec.tx_path_loss * spec.r_tx(0, 1)) <
        0.05 * spec.tx_path_loss);
}

TEST_CASE("training set round trip through the binary dump") {
  const SystemConfig cfg = small_config(2, 2, 3, 2, 0.6);
  const CorrelationSpec spec = make_correlation_spec(cfg);
  const TrainingSet set = sample_realizations(cfg, spec, 4, 1234);
  const std::string path =
      (std::filesystem::temp_directory_path() / "bdris_dump_test.bin").string();
  write_training_set(path, set);
  const TrainingSet loaded = read_training_set(path);
  REQUIRE(loaded.count() == set.count());
  CHECK(loaded.seed == set.seed);
  for (int c = 0; c < set.count(); ++c) {
    CHECK((loaded.realizations[c].tx_channel - set.realizations[c].tx_channel)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((loaded.realizations[c].rx_channels - set.realizations[c].rx_channels)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  std::remove(path.c_str());
}
