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

#include <Eigen/Core>

namespace bdris {

struct SingularTriplet {
  double sigma = 0.0;
  Eigen::VectorXcd left;   // unit norm, first nonzero entry real positive
  Eigen::VectorXcd right;  // unit norm, phased consistently with `left`
};

/// Largest singular value with its left/right singular vectors, via a full
/// decomposition. Throws DegenerateInputError for the zero matrix.
SingularTriplet dominant_singular_triplet(const Eigen::MatrixXcd& a);

/// Same triplet through power iteration on A^H A; alternative evaluation
/// path kept for large instances, validated against the full decomposition.
SingularTriplet dominant_singular_triplet_power(const Eigen::MatrixXcd& a,
                                                double tol = 1e-10,
                                                int max_iterations = 5000);

double spectral_norm(const Eigen::MatrixXcd& a);

/// Factor F with F F^T = cov for a real symmetric PSD matrix, via the
/// eigendecomposition with negative eigenvalues clipped to zero. Stable for
/// the near-singular covariances of highly correlated large surfaces, where
/// a Cholesky factorization would fail.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace bdris
