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
#include <complex>

#include <Eigen/Dense>

#include "bdris/link_layer.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace bdris;
using Complex = std::complex<double>;

TEST_CASE("matched precoder") {
  Eigen::RowVectorXcd h(2);
  h << Complex(1, 0), Complex(0, 0);
  const Eigen::VectorXcd w = mrt_precoder(h);
  CHECK(std::abs(w(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(w(1)) < 1e-15);

  Xoshiro256pp rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::RowVectorXcd hr = test::random_complex(rng, 1, 4);
    const Eigen::VectorXcd wm = mrt_precoder(hr);
    CHECK(wm.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::norm((hr * wm).value()) ==
          doctest::Approx(hr.squaredNorm()).epsilon(1e-12));
    // Any other unit precoder does worse.
    const Eigen::VectorXcd other = test::random_unit(rng, 4);
    CHECK(std::norm((hr * other).value()) <= hr.squaredNorm() * (1 + 1e-12));
  }
  CHECK_THROWS_AS(mrt_precoder(Eigen::RowVectorXcd::Zero(3)), DegenerateInputError);
}

TEST_CASE("zero-forcing precoders") {
  Xoshiro256pp rng(2);

  SUBCASE("one user reduces to the matched direction") {
    const Eigen::MatrixXcd h = test::random_complex(rng, 1, 4);
    const PrecoderSet set = zf_precoders(h);
    const Eigen::VectorXcd mrt = mrt_precoder(h.row(0));
    CHECK(std::abs(std::abs(mrt.dot(set.vectors.col(0))) - 1.0) < 1e-10);
    CHECK(set.vectors.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("identity channel splits the budget") {
    const PrecoderSet set = zf_precoders(Eigen::MatrixXcd::Identity(3, 3));
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(set.vectors(k, k)) ==
            doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
  }

  SUBCASE("annihilates cross-user channels") {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd h = test::random_complex(rng, 2, 4);
      const PrecoderSet set = zf_precoders(h);
      const Eigen::MatrixXcd cross = h * set.vectors;
      const double leak = std::max(std::abs(cross(0, 1)), std::abs(cross(1, 0)));
      const double diag = std::min(std::abs(cross(0, 0)), std::abs(cross(1, 1)));
      CHECK(leak <= 1e-9 * diag);
      CHECK(set.vectors.col(0).norm() ==
            doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
  }

  SUBCASE("rank deficiency is reported") {
    Eigen::MatrixXcd h(2, 4);
    h.row(0) = test::random_complex(rng, 1, 4);
    h.row(1) = 2.0 * h.row(0);
    CHECK_THROWS_AS(zf_precoders(h), RankError);
    CHECK_THROWS_AS(zf_precoders(test::random_complex(rng, 5, 4)),
                    InvalidConfigError);
  }
}

TEST_CASE("received power") {
  Xoshiro256pp rng(3);
  const Eigen::RowVectorXcd h = test::random_complex(rng, 1, 3);
  const Eigen::VectorXcd w = mrt_precoder(h);
  CHECK(received_power(h, w, 2.0) ==
        doctest::Approx(2.0 * h.squaredNorm()).epsilon(1e-12));
  CHECK(received_power(h, w, 4.0) ==
        doctest::Approx(2.0 * received_power(h, w, 2.0)).epsilon(1e-12));

  // Orthogonal precoder receives nothing.
  Eigen::VectorXcd perp = test::random_unit(rng, 3);
  perp -= w * (w.dot(perp));
  perp /= perp.norm();
  CHECK(received_power(h, perp, 2.0) < 1e-20 * h.squaredNorm());

  // Scale covariance: |c|^2 comes out of the power.
  const Complex c(1.5, -2.0);
  CHECK(received_power(c * h, w, 1.0) ==
        doctest::Approx(std::norm(c) * received_power(h, w, 1.0)).epsilon(1e-12));
}

TEST_CASE("sum rate") {
  Xoshiro256pp rng(4);

  SUBCASE("single user closed form") {
    const Eigen::MatrixXcd h = test::random_complex(rng, 1, 3);
    const PrecoderSet set = zf_precoders(h);
    const double expect =
        std::log1p(2.0 * std::norm((h.row(0) * set.vectors.col(0)).value()) / 1e-3);
    CHECK(sum_rate(h, set, 2.0, 1e-3) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("zero channel gives zero rate") {
    PrecoderSet set;
    set.vectors = Eigen::MatrixXcd::Identity(3, 2) / std::sqrt(2.0);
    CHECK(sum_rate(Eigen::MatrixXcd::Zero(2, 3), set, 1.0, 1e-3) == 0.0);
  }

  SUBCASE("zero-forcing removes the interference term") {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd h = test::random_complex(rng, 2, 4);
      const PrecoderSet set = zf_precoders(h);
      const double with_interference = sum_rate(h, set, 1.0, 1e-6);
      double interference_free = 0.0;
      for (int k = 0; k < 2; ++k)
        interference_free +=
            std::log1p(std::norm((h.row(k) * set.vectors.col(k)).value()) / 1e-6);
      CHECK(with_interference ==
            doctest::Approx(interference_free).epsilon(1e-9));
    }
  }

  SUBCASE("monotone in transmit power") {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd h = test::random_complex(rng, 2, 3);
      const PrecoderSet set = zf_precoders(h);
      double previous = 0.0;
      for (double p : {0.1, 1.0, 10.0, 100.0}) {
        const double rate = sum_rate(h, set, p, 1e-3);
        CHECK(rate >= previous);
        previous = rate;
      }
    }
  }
}

TEST_CASE("effective channel equals the assembled product") {
  Xoshiro256pp rng(5);
  const GroupingStrategy s({3, 0, 5, 2, 1, 4}, 3);
  ScatteringBlocks blocks;
  blocks.blocks.push_back(test::random_symmetric_unitary(rng, 3));
  blocks.blocks.push_back(test::random_symmetric_unitary(rng, 3));
  const Eigen::MatrixXcd rx = test::random_complex(rng, 2, 6);
  const Eigen::MatrixXcd tx = test::random_complex(rng, 6, 4);

  const Eigen::MatrixXcd grouped = effective_channel(
      blocks, group_rx_channel(rx, s), group_tx_channel(tx, s));
  const Eigen::MatrixXcd direct = rx * assemble_scattering(s, blocks) * tx;
  CHECK((grouped - direct).cwiseAbs().maxCoeff() < 1e-12 * direct.norm());
}
