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

#include "bdris/linalg.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "bdris/errors.hpp"

namespace bdris {

namespace {

// Rotate the pair so the first entry of `left` above the noise floor is real
// positive; A v = sigma u is preserved under a common phase.
void fix_phase(Eigen::VectorXcd& left, Eigen::VectorXcd& right) {
  for (Eigen::Index i = 0; i < left.size(); ++i) {
    const double mag = std::abs(left(i));
    if (mag > 1e-12) {
      const std::complex<double> phase = std::conj(left(i)) / mag;
      left *= phase;
      right *= phase;
      return;
    }
  }
}

}  // namespace

SingularTriplet dominant_singular_triplet(const Eigen::MatrixXcd& a) {
  if (a.size() == 0 || a.norm() == 0.0)
    throw DegenerateInputError("dominant singular triplet of a zero matrix");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriplet t;
  t.sigma = svd.singularValues()(0);
  t.left = svd.matrixU().col(0);
  t.right = svd.matrixV().col(0);
  fix_phase(t.left, t.right);
  return t;
}

SingularTriplet dominant_singular_triplet_power(const Eigen::MatrixXcd& a,
                                                double tol, int max_iterations) {
  if (a.size() == 0 || a.norm() == 0.0)
    throw DegenerateInputError("dominant singular triplet of a zero matrix");
  // Deterministic start: the column of largest norm, perturbed towards the
  // all-ones direction to escape exact orthogonality with the dominant pair.
  Eigen::Index start = 0;
  a.colwise().norm().maxCoeff(&start);
  Eigen::VectorXcd v = a.col(start).adjoint().transpose();
  v += Eigen::VectorXcd::Constant(v.size(), 1e-3 * v.norm() + 1e-30);
  v.normalize();

  double sigma = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXcd av = a * v;
    const double s = av.norm();
    Eigen::VectorXcd next = a.adjoint() * av;
    const double norm_next = next.norm();
    if (norm_next == 0.0) break;
    next /= norm_next;
    const std::complex<double> overlap = v.dot(next);
    const std::complex<double> phase = overlap / std::max(std::abs(overlap), 1e-300);
    const double delta = (next - v * phase).norm();
    v = next;
    if (std::abs(s - sigma) <= tol * std::max(1.0, s) && delta <= tol) {
      sigma = s;
      break;
    }
    sigma = s;
  }
  SingularTriplet t;
  const Eigen::VectorXcd av = a * v;
  t.sigma = av.norm();
  t.left = av / t.sigma;
  t.right = v;
  fix_phase(t.left, t.right);
  return t;
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols())
    throw InvalidConfigError("covariance matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw NumericalError("covariance eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace bdris
