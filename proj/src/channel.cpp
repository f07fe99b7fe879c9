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

#include "bdris/channel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bdris/linalg.hpp"
#include "bdris/rng.hpp"

namespace bdris {

namespace {

constexpr std::uint32_t kDumpMagic = 0x48434442;  // "BDCH" little endian
constexpr std::uint32_t kDumpVersion = 1;

double distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

Eigen::MatrixXd exponential_corr(int n, double rho) {
  if (n < 1) throw InvalidConfigError("correlation matrix size must be >= 1");
  if (rho < 0.0 || rho >= 1.0)
    throw InvalidConfigError("correlation coefficient must lie in [0, 1)");
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, std::abs(i - j));
  return r;
}

Eigen::MatrixXd ris_covariance(int n_h, int n_v, double rho) {
  return kronecker(exponential_corr(n_h, rho), exponential_corr(n_v, rho));
}

double path_loss(double distance, double alpha, double l0) {
  if (distance <= 0.0) throw InvalidConfigError("path-loss distance must be positive");
  return l0 * std::pow(distance, -alpha);
}

CorrelationSpec make_correlation_spec(const SystemConfig& cfg) {
  cfg.validate();
  CorrelationSpec spec;
  spec.r_ris = ris_covariance(cfg.upa_horizontal, cfg.upa_vertical, cfg.correlation);
  spec.r_tx = exponential_corr(cfg.tx_antennas, cfg.correlation);
  spec.r_t = kronecker(spec.r_ris, spec.r_tx);
  spec.rx_path_loss = path_loss(distance(cfg.ris_pos, cfg.rx_pos),
                                cfg.pl_exponent_rx, cfg.ref_path_loss);
  spec.tx_path_loss = path_loss(distance(cfg.tx_pos, cfg.ris_pos),
                                cfg.pl_exponent_tx, cfg.ref_path_loss);
  return spec;
}

TrainingSet sample_realizations(const SystemConfig& cfg,
                                const CorrelationSpec& spec, int count,
                                std::uint64_t seed) {
  cfg.validate();
  if (count < 1) throw InvalidConfigError("realization count must be >= 1");
  const int n = cfg.ris_elements;
  const int m = cfg.tx_antennas;
  const int k = cfg.users;
  if (spec.r_ris.rows() != n || spec.r_tx.rows() != m)
    throw InvalidConfigError("correlation spec does not match the configuration");

  const Eigen::MatrixXd rx_factor = covariance_factor(spec.r_ris);
  {
    const double err = (rx_factor * rx_factor.transpose() - spec.r_ris).norm() /
                       spec.r_ris.norm();
    if (err > 1e-8)
      throw NumericalError("RIS covariance factorization error " + std::to_string(err));
  }
  // Column-major vec of the N x M transmitter channel: the RIS index runs
  // within each column, so the RIS correlation is the fast Kronecker factor.
  const Eigen::MatrixXd vec_cov = kronecker(spec.r_tx, spec.r_ris);
  const Eigen::MatrixXd tx_factor = covariance_factor(vec_cov);
  {
    const double err =
        (tx_factor * tx_factor.transpose() - vec_cov).norm() / vec_cov.norm();
    if (err > 1e-8)
      throw NumericalError("transmitter covariance factorization error " +
                           std::to_string(err));
  }

  const double rx_scale = std::sqrt(spec.rx_path_loss);
  const double tx_scale = std::sqrt(spec.tx_path_loss);

  TrainingSet set;
  set.seed = seed;
  set.realizations.resize(count);
  for (int c = 0; c < count; ++c) {
    ChannelRealization& real = set.realizations[c];
    real.rx_channels.resize(k, n);
    for (int user = 0; user < k; ++user) {
      Xoshiro256pp rng(derive_stream(
          seed, {stream_tag::kRxChannel, static_cast<std::uint64_t>(c),
                 static_cast<std::uint64_t>(user)}));
      real.rx_channels.row(user) =
          (rx_scale * (rx_factor * rng.complex_normal_vector(n))).transpose();
    }
    Xoshiro256pp rng(derive_stream(
        seed, {stream_tag::kTxChannel, static_cast<std::uint64_t>(c)}));
    const Eigen::VectorXcd vec = tx_scale * (tx_factor * rng.complex_normal_vector(n * m));
    real.tx_channel = Eigen::Map<const Eigen::MatrixXcd>(vec.data(), n, m);
  }
  return set;
}

void write_training_set(const std::string& path, const TrainingSet& set) {
  if (set.realizations.empty())
    throw InvalidConfigError("cannot write an empty training set");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidConfigError("cannot open " + path + " for writing");

  const auto& first = set.realizations.front();
  const std::uint64_t header[5] = {
      static_cast<std::uint64_t>(first.tx_channel.rows()),
      static_cast<std::uint64_t>(first.tx_channel.cols()),
      static_cast<std::uint64_t>(first.rx_channels.rows()),
      static_cast<std::uint64_t>(set.realizations.size()), set.seed};
  out.write(reinterpret_cast<const char*>(&kDumpMagic), sizeof(kDumpMagic));
  out.write(reinterpret_cast<const char*>(&kDumpVersion), sizeof(kDumpVersion));
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (const auto& real : set.realizations) {
    out.write(reinterpret_cast<const char*>(real.tx_channel.data()),
              static_cast<std::streamsize>(real.tx_channel.size() *
                                           sizeof(std::complex<double>)));
    out.write(reinterpret_cast<const char*>(real.rx_channels.data()),
              static_cast<std::streamsize>(real.rx_channels.size() *
                                           sizeof(std::complex<double>)));
  }
  if (!out) throw NumericalError("write failure on " + path);
}

TrainingSet read_training_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfigError("cannot open " + path);
  std::uint32_t magic = 0, version = 0;
  std::uint64_t header[5] = {};
  in.read(reinterpret_cast<char*>(&magic), sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || magic != kDumpMagic)
    throw InvalidConfigError(path + " is not a channel dump");
  if (version != kDumpVersion)
    throw InvalidConfigError("unsupported channel dump version");

  const auto n = static_cast<Eigen::Index>(header[0]);
  const auto m = static_cast<Eigen::Index>(header[1]);
  const auto k = static_cast<Eigen::Index>(header[2]);
  const auto c = static_cast<Eigen::Index>(header[3]);
  TrainingSet set;
  set.seed = header[4];
  set.realizations.resize(c);
  for (auto& real : set.realizations) {
    real.tx_channel.resize(n, m);
    real.rx_channels.resize(k, n);
    in.read(reinterpret_cast<char*>(real.tx_channel.data()),
            static_cast<std::streamsize>(real.tx_channel.size() *
                                         sizeof(std::complex<double>)));
    in.read(reinterpret_cast<char*>(real.rx_channels.data()),
            static_cast<std::streamsize>(real.rx_channels.size() *
                                         sizeof(std::complex<double>)));
  }
  if (!in) throw InvalidConfigError(path + " is truncated");
  return set;
}

}  // namespace bdris
