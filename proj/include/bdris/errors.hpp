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

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bdris {

/// Configuration or argument values outside their documented domain.
struct InvalidConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally zero or otherwise unusable numerical input.
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine left its validated accuracy regime.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank-deficient matrix where full rank is required.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact integer result does not fit the return type.
struct CountOverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Every optimizer restart failed; carries the best iterate seen.
struct OptimizationFailureError : std::runtime_error {
  OptimizationFailureError(const std::string& what, Eigen::VectorXd best)
      : std::runtime_error(what), best_point(std::move(best)) {}
  Eigen::VectorXd best_point;
};

}  // namespace bdris
