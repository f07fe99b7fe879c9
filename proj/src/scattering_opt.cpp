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

#include "bdris/scattering_opt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>

#include <Eigen/Dense>

#include "bdris/linalg.hpp"
#include "bdris/rng.hpp"

namespace bdris {

namespace {

using Complex = std::complex<double>;

// Extends `basis` (orthonormal columns) to a full orthonormal basis by
// Gram-Schmidt over the standard basis vectors, re-orthogonalizing once.
Eigen::MatrixXcd complete_unitary(const Eigen::MatrixXcd& basis) {
  const Eigen::Index n = basis.rows();
  Eigen::MatrixXcd q(n, n);
  Eigen::Index filled = basis.cols();
  q.leftCols(filled) = basis;
  for (Eigen::Index candidate = 0; candidate < n && filled < n; ++candidate) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(candidate) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      v -= q.leftCols(filled) * (q.leftCols(filled).adjoint() * v);
    const double norm = v.norm();
    if (norm < 0.5) continue;  // candidate lies in the accumulated span
    q.col(filled++) = v / norm;
  }
  if (filled != n) throw NumericalError("orthonormal completion failed");
  return q;
}

}  // namespace

Eigen::MatrixXcd symmetric_unitary_map(const Eigen::VectorXcd& from,
                                       const Eigen::VectorXcd& to) {
  const Eigen::Index n = from.size();
  if (to.size() != n || n == 0)
    throw InvalidConfigError("mapped vectors must have equal nonzero length");
  if (std::abs(from.norm() - 1.0) > 1e-10 || std::abs(to.norm() - 1.0) > 1e-10)
    throw InvalidConfigError("mapped vectors must have unit norm");

  // Theta = V V^T maps conj(V z) to V conj(z) for every z. Requiring
  // Theta from = to therefore reduces to finding a unitary V with
  // V x = conj(from) and V conj(x) = to for some unit x with
  // x^T x = conj(from^T to); both vector pairs then share the same Gram
  // matrix and V exists.
  const Complex s = from.transpose() * to;
  const double r = std::min(1.0, std::abs(s));
  const double phi = -std::arg(s);
  const double residual_sq = 1.0 - r * r;
  const bool near_parallel = residual_sq <= 1e-13;
  // In the near-parallel regime `to` is e^{j arg(s)} conj(from) up to
  // O(sqrt(residual_sq)); dropping the second constraint with t = 0 keeps
  // x and conj(x) exactly proportional.
  const double t = near_parallel ? 0.0 : 0.5 * std::acos(r);

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  const Complex half_phase = std::polar(1.0, phi / 2.0);
  x(0) = half_phase * std::cos(t);
  if (n > 1) x(1) = half_phase * Complex(0.0, std::sin(t));

  const Eigen::VectorXcd u1 = x;
  const Eigen::VectorXcd w1 = from.conjugate();

  Eigen::MatrixXcd source(n, near_parallel ? 1 : 2);
  Eigen::MatrixXcd target(n, source.cols());
  source.col(0) = u1;
  target.col(0) = w1;
  if (source.cols() == 2) {
    Eigen::VectorXcd u2 = x.conjugate();
    Eigen::VectorXcd w2 = to;
    for (int pass = 0; pass < 2; ++pass) {
      u2 -= u1 * (u1.dot(u2));
      w2 -= w1 * (w1.dot(w2));
    }
    source.col(1) = u2 / u2.norm();
    target.col(1) = w2 / w2.norm();
  }

  const Eigen::MatrixXcd qu = complete_unitary(source);
  const Eigen::MatrixXcd qw = complete_unitary(target);
  const Eigen::MatrixXcd v = qw * qu.adjoint();
  Eigen::MatrixXcd theta = v * v.transpose();
  theta = ((theta + theta.transpose()) * 0.5).eval();
  return theta;
}

ScatteringBlocks closed_form_blocks(const GroupingStrategy& strategy,
                                    const Eigen::RowVectorXcd& rx_grouped,
                                    const Eigen::VectorXcd& tx_grouped) {
  const int n = strategy.size();
  const int ng = strategy.group_size();
  if (rx_grouped.size() != n || tx_grouped.size() != n)
    throw InvalidConfigError("channel vectors do not match the strategy size");

  ScatteringBlocks out;
  out.blocks.reserve(strategy.groups());
  bool any_active = false;
  for (int g = 0; g < strategy.groups(); ++g) {
    const Eigen::RowVectorXcd h = rx_grouped.segment(g * ng, ng);
    const Eigen::VectorXcd u = tx_grouped.segment(g * ng, ng);
    const double hn = h.norm();
    const double un = u.norm();
    if (hn <= 1e-300 || un <= 1e-300) {
      out.blocks.push_back(-Eigen::MatrixXcd::Identity(ng, ng));
      continue;
    }
    any_active = true;
    const Eigen::VectorXcd target = h.conjugate().transpose() / hn;
    out.blocks.push_back(symmetric_unitary_map(u / un, target));
  }
  if (!any_active)
    throw DegenerateInputError("every group has a vanishing channel subvector");
  return out;
}

namespace {

Eigen::RowVectorXcd composite_row(const ScatteringBlocks& blocks,
                                  const Eigen::RowVectorXcd& rx,
                                  const Eigen::MatrixXcd& tx, int ng) {
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(tx.cols());
  for (std::size_t g = 0; g < blocks.blocks.size(); ++g) {
    const auto offset = static_cast<Eigen::Index>(g) * ng;
    row += rx.segment(offset, ng) * blocks.blocks[g] * tx.middleRows(offset, ng);
  }
  return row;
}

}  // namespace

SuScatteringResult optimize_scattering_su(const GroupingStrategy& strategy,
                                          const ChannelRealization& channel) {
  if (channel.rx_channels.rows() < 1)
    throw InvalidConfigError("single-user optimization requires a receiver row");
  const Eigen::RowVectorXcd rx =
      group_rx_channel(channel.rx_channels.topRows(1), strategy).row(0);
  const Eigen::MatrixXcd tx = group_tx_channel(channel.tx_channel, strategy);
  if (rx.norm() == 0.0 || tx.norm() == 0.0)
    throw DegenerateInputError("zero channel realization");

  const int ng = strategy.group_size();
  // Seeding with the dominant left singular direction of the transmit hop
  // realizes the coherent lower bound at the first evaluation and makes the
  // fully-connected case exact immediately.
  const SingularTriplet tx_triplet = dominant_singular_triplet(tx);
  ScatteringBlocks blocks = closed_form_blocks(strategy, rx, tx_triplet.left);

  SuScatteringResult result;
  double previous = -1.0;
  constexpr int kMaxIterations = 200;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::RowVectorXcd row = composite_row(blocks, rx, tx, ng);
    const double gain = row.squaredNorm();
    result.objective_trace.push_back(gain);
    result.iterations = it + 1;
    if (gain <= 0.0) break;
    if (previous >= 0.0 && gain - previous <= 1e-8 * gain) break;
    previous = gain;

    // Matched precoder for the current blocks, then re-optimal blocks.
    const Eigen::VectorXcd w = row.adjoint() / row.norm();
    Eigen::VectorXcd direction = tx * w;
    const double dn = direction.norm();
    if (dn == 0.0) break;
    direction /= dn;
    blocks = closed_form_blocks(strategy, rx, direction);
  }
  result.gain = result.objective_trace.back();
  result.blocks = std::move(blocks);
  return result;
}

ReactanceProblem::ReactanceProblem(Eigen::MatrixXcd rx_grouped,
                                   Eigen::MatrixXcd tx_grouped, int group_size,
                                   double z0)
    : rx_(std::move(rx_grouped)),
      tx_(std::move(tx_grouped)),
      group_size_(group_size),
      z0_(z0) {
  if (rx_.cols() != tx_.rows())
    throw InvalidConfigError("channel dimensions do not compose");
  if (group_size_ <= 0 || rx_.cols() % group_size_ != 0)
    throw InvalidConfigError("group size does not divide the element count");
  if (z0_ <= 0.0) throw InvalidConfigError("reference impedance must be positive");
  groups_ = static_cast<int>(rx_.cols()) / group_size_;
}

ReactanceBlocks ReactanceProblem::unpack(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw InvalidConfigError("parameter vector has wrong size");
  ReactanceBlocks blocks;
  blocks.blocks.reserve(groups_);
  Eigen::Index k = 0;
  for (int g = 0; g < groups_; ++g) {
    Eigen::MatrixXd b(group_size_, group_size_);
    for (int i = 0; i < group_size_; ++i)
      for (int j = i; j < group_size_; ++j) {
        b(i, j) = x(k);
        b(j, i) = x(k);
        ++k;
      }
    blocks.blocks.push_back(std::move(b));
  }
  return blocks;
}

Eigen::VectorXd ReactanceProblem::pack(const ReactanceBlocks& blocks) const {
  Eigen::VectorXd x(dim());
  Eigen::Index k = 0;
  for (int g = 0; g < groups_; ++g)
    for (int i = 0; i < group_size_; ++i)
      for (int j = i; j < group_size_; ++j) x(k++) = blocks.blocks[g](i, j);
  return x;
}

double ReactanceProblem::value(const Eigen::VectorXd& x) const {
  return evaluate(x, nullptr);
}

double ReactanceProblem::value_and_gradient(const Eigen::VectorXd& x,
                                            Eigen::VectorXd& grad) const {
  return evaluate(x, &grad);
}

double ReactanceProblem::evaluate(const Eigen::VectorXd& x,
                                  Eigen::VectorXd* grad) const {
  if (x.size() != dim()) throw InvalidConfigError("parameter vector has wrong size");
  const int ng = group_size_;

  // Theta_g = I - 2 z0 A_g^{-1} with A_g = j X_g + z0 I (complex symmetric),
  // so dTheta_g = 2 j z0 A_g^{-1} dX_g A_g^{-1}. With E the composite K x M
  // channel and M_g = C_g E^H B_g, the derivative of ||E||_F^2 along a
  // symmetric perturbation reduces to -4 z0 Im(W_ij + W_ji) on the strict
  // upper triangle and -4 z0 Im(W_ii) on the diagonal, where
  // W_g = A_g^{-1} M_g A_g^{-1}.
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> factors;
  if (grad) factors.reserve(groups_);

  Eigen::MatrixXcd composite = Eigen::MatrixXcd::Zero(rx_.rows(), tx_.cols());
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(ng, ng);
  Eigen::Index k = 0;
  for (int g = 0; g < groups_; ++g) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(ng, ng);
    for (int i = 0; i < ng; ++i)
      for (int j = i; j < ng; ++j) {
        a(i, j) = Complex(0.0, x(k));
        a(j, i) = a(i, j);
        ++k;
      }
    a.diagonal().array() += z0_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::MatrixXcd theta = identity - 2.0 * z0_ * lu.solve(identity);
    composite.noalias() +=
        rx_.middleCols(g * ng, ng) * theta * tx_.middleRows(g * ng, ng);
    if (grad) factors.push_back(std::move(lu));
  }
  const double value = composite.squaredNorm();
  if (!grad) return value;

  grad->resize(dim());
  k = 0;
  for (int g = 0; g < groups_; ++g) {
    const Eigen::MatrixXcd m = tx_.middleRows(g * ng, ng) * composite.adjoint() *
                               rx_.middleCols(g * ng, ng);
    const Eigen::MatrixXcd y = factors[g].solve(m);
    // A_g is symmetric, so right-multiplying by A_g^{-1} is a transposed solve.
    const Eigen::MatrixXcd w = factors[g].solve(y.transpose()).transpose();
    for (int i = 0; i < ng; ++i)
      for (int j = i; j < ng; ++j) {
        (*grad)(k++) = (i == j) ? -4.0 * z0_ * std::imag(w(i, i))
                                : -4.0 * z0_ * std::imag(w(i, j) + w(j, i));
      }
  }
  return value;
}

Eigen::VectorXd ReactanceProblem::finite_difference_gradient(
    const Eigen::VectorXd& x, double relative_step) const {
  Eigen::VectorXd grad(dim());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = relative_step * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + h;
    const double up = value(probe);
    probe(i) = x(i) - h;
    const double down = value(probe);
    probe(i) = x(i);
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

namespace {

struct LbfgsOutcome {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
  QuasiNewtonStatus status = QuasiNewtonStatus::kMaxIterations;
  int iterations = 0;
  int rejected_steps = 0;
  double gradient_norm = 0.0;
  bool finite = false;
};

// Limited-memory quasi-Newton ascent with Armijo backtracking on -f.
// Generous memory: the reactance landscape has long curved valleys and a
// short history approximates their Hessian poorly.
LbfgsOutcome lbfgs_maximize(const ReactanceProblem& problem, Eigen::VectorXd x,
                            const QuasiNewtonOptions& options) {
  const int kMemory = std::min(problem.dim(), 64);
  constexpr double kArmijo = 1e-4;

  LbfgsOutcome out;
  Eigen::VectorXd grad(problem.dim());
  double f = problem.value_and_gradient(x, grad);
  if (!std::isfinite(f)) {
    out.x = std::move(x);
    return out;
  }
  out.finite = true;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  double gamma = 1.0;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    if (out.gradient_norm <= options.gradient_tolerance) {
      out.status = QuasiNewtonStatus::kGradientTolerance;
      break;
    }

    // Two-loop recursion on the ascent direction.
    Eigen::VectorXd direction = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(direction);
      direction -= alpha[i] * y_hist[i];
    }
    direction *= gamma;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(direction);
      direction += (alpha[i] - beta) * s_hist[i];
    }
    double slope = grad.dot(direction);
    if (slope <= 0.0) {  // curvature information went bad; reset to ascent
      direction = grad;
      slope = grad.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      gamma = 1.0;
    }

    double step = (it == 0) ? 1.0 / std::max(1.0, grad.norm()) : 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new, grad_new;
    double f_new = f;
    for (int trial = 0; trial < 60; ++trial) {
      x_new = x + step * direction;
      f_new = problem.value_and_gradient(x_new, grad_new);
      if (std::isfinite(f_new) && f_new >= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      if (!std::isfinite(f_new)) ++out.rejected_steps;
      step *= 0.5;
      if (step * direction.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>()))
        break;
    }
    if (!accepted) {
      out.status = QuasiNewtonStatus::kStalled;
      break;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad - grad_new;  // ascent: secant on -grad
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      gamma = sy / y_hist.back().squaredNorm();
      if (static_cast<int>(s_hist.size()) > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    grad = std::move(grad_new);
    f = f_new;
  }
  if (it == options.max_iterations) out.status = QuasiNewtonStatus::kMaxIterations;
  out.x = std::move(x);
  out.value = f;
  out.iterations = it;
  out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace

namespace {

// Inverse of the scattering map: the real symmetric reactance whose image is
// `theta` (symmetric unitary, eigenvalue +1 excluded). A small global phase
// retreat handles blocks with an eigenvalue too close to +1, where the
// reactance diverges.
Eigen::MatrixXd inverse_cayley(const Eigen::MatrixXcd& theta, double z0) {
  const Eigen::Index n = theta.rows();
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd block = theta;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Eigen::MatrixXcd x_complex =
        Complex(0.0, -z0) * ((identity + block) *
                             (identity - block).partialPivLu().inverse());
    const Eigen::MatrixXd x = x_complex.real();
    if (x.allFinite() && x.cwiseAbs().maxCoeff() < 1e7 &&
        x_complex.imag().cwiseAbs().maxCoeff() < 1e-6 * (1.0 + x.cwiseAbs().maxCoeff())) {
      return ((x + x.transpose()) * 0.5).eval();
    }
    block *= std::polar(1.0, -0.05);
  }
  return Eigen::MatrixXd::Zero(n, n);
}

// Deterministic warm start: the per-group coherent-optimal blocks for the
// dominant singular directions, pulled back through the network map. This
// sits at the surrogate lower-bound maximum, far above a random reactance.
Eigen::VectorXd warm_start_point(const ReactanceProblem& problem,
                                 const GroupingStrategy& strategy,
                                 const Eigen::MatrixXcd& rx,
                                 const Eigen::MatrixXcd& tx, double z0) {
  Eigen::RowVectorXcd row;
  if (rx.rows() == 1) {
    row = rx.row(0);
  } else {
    row = dominant_singular_triplet(rx).right.adjoint();
  }
  const Eigen::VectorXcd direction = dominant_singular_triplet(tx).left;
  const ScatteringBlocks blocks = closed_form_blocks(strategy, row, direction);
  ReactanceBlocks reactance;
  reactance.blocks.reserve(blocks.blocks.size());
  for (const auto& theta : blocks.blocks)
    reactance.blocks.push_back(inverse_cayley(theta, z0));
  return problem.pack(reactance);
}

// Objective through the exactly-unitary block construction, in true scale.
double exact_objective(const Eigen::MatrixXcd& rx, const Eigen::MatrixXcd& tx,
                       const ReactanceBlocks& reactance, double z0,
                       ScatteringBlocks* blocks_out) {
  const int ng = static_cast<int>(reactance.blocks.front().rows());
  ScatteringBlocks blocks;
  blocks.blocks.reserve(reactance.blocks.size());
  for (const auto& xg : reactance.blocks)
    blocks.blocks.push_back(cayley_scattering(xg, z0));
  Eigen::MatrixXcd composite = Eigen::MatrixXcd::Zero(rx.rows(), tx.cols());
  for (std::size_t g = 0; g < blocks.blocks.size(); ++g) {
    const auto offset = static_cast<Eigen::Index>(g) * ng;
    composite.noalias() +=
        rx.middleCols(offset, ng) * blocks.blocks[g] * tx.middleRows(offset, ng);
  }
  if (blocks_out) *blocks_out = std::move(blocks);
  return composite.squaredNorm();
}

}  // namespace

MuScatteringResult optimize_scattering_mu(const GroupingStrategy& strategy,
                                          const ChannelRealization& channel,
                                          const QuasiNewtonOptions& options) {
  if (options.max_iterations <= 0 || options.restarts <= 0 ||
      options.init_scale <= 0.0 || options.gradient_tolerance <= 0.0 ||
      options.finite_difference_step <= 0.0 || options.reference_impedance <= 0.0)
    throw InvalidConfigError("quasi-Newton options must be positive");

  const Eigen::MatrixXcd rx = group_rx_channel(channel.rx_channels, strategy);
  const Eigen::MatrixXcd tx = group_tx_channel(channel.tx_channel, strategy);
  const double rx_norm = rx.norm();
  const double tx_norm = tx.norm();
  if (rx_norm == 0.0 || tx_norm == 0.0)
    throw DegenerateInputError("zero channel realization");
  const double z0 = options.reference_impedance;

  // Normalized problem: objective in (0, 1], gradients O(1/z0), so the
  // stopping tolerance is meaningful at any path-loss scale. The reactance
  // variables themselves are scale free.
  ReactanceProblem problem(rx / rx_norm, tx / tx_norm, strategy.group_size(), z0);

  LbfgsOutcome best;
  Eigen::VectorXd best_point;
  double best_exact = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  // Restart 0 starts from the coherent closed-form blocks; further restarts
  // draw random reactances from the derived streams.
  for (int restart = 0; restart < options.restarts; ++restart) {
    Eigen::VectorXd x0;
    if (restart == 0) {
      x0 = warm_start_point(problem, strategy, rx / rx_norm, tx / tx_norm, z0);
    } else {
      Xoshiro256pp rng(derive_stream(options.seed,
                                     {stream_tag::kReactanceInit,
                                      static_cast<std::uint64_t>(restart)}));
      x0 = options.init_scale * rng.normal_vector(problem.dim());
    }
    LbfgsOutcome run = lbfgs_maximize(problem, x0, options);
    if (!run.finite) continue;
    any_finite = true;
    // Candidate points are both the initial and the final iterate, measured
    // through the exact construction; the return value is therefore never
    // below the initialization even at solver noise level.
    const std::array<const Eigen::VectorXd*, 2> candidates{&x0, &run.x};
    for (const Eigen::VectorXd* point : candidates) {
      const double exact = exact_objective(rx, tx, problem.unpack(*point), z0, nullptr);
      if (exact > best_exact) {
        best_exact = exact;
        best_point = *point;
        best = run;
      }
    }
  }
  if (!any_finite)
    throw OptimizationFailureError(
        "all quasi-Newton restarts produced non-finite objectives", best.x);

  MuScatteringResult result;
  result.reactance = problem.unpack(best_point);
  result.objective =
      exact_objective(rx, tx, result.reactance, z0, &result.blocks);
  result.status = best.status;
  result.iterations = best.iterations;
  result.rejected_steps = best.rejected_steps;
  result.gradient_norm = best.gradient_norm;
  return result;
}

}  // namespace bdris
