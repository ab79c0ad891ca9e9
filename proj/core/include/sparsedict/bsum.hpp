// Copyright 2026 The sparsedict Authors.
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

#include <functional>
#include <optional>

#include "sparsedict/proxops.hpp"
#include "sparsedict/types.hpp"

// Block successive upper-bound minimization learners for
//
//   min 1/2 ||Y - A X||_F^2 + lambda ||X||_1   s.t. (A, X) in the regime's set.
//
// Each iteration takes one proximal-gradient step in X (step 1/tau_x with
// tau_x = sigma_max^2(A)) followed by one dictionary step: either the exact
// norm-constrained ridge solve (total-norm regime) or a projected gradient
// step with tau_a = sigma_max^2(X). Both steps minimize a locally tight upper
// bound of the objective, so the objective never increases.

namespace sparsedict::bsum {

enum class DictionaryStep {
  ExactRidge,          ///< A <- argmin over the Frobenius ball (total-norm only)
  GradientProjection,  ///< A <- P(A - grad / tau_a)
};

/// Snapshot handed to the per-iteration observer. References are valid only
/// for the duration of the call.
struct IterationState {
  int iteration;
  const Matrix& Y;
  const Matrix& A_prev;
  const Matrix& X_prev;
  const Matrix& A;
  const Matrix& X;
  double tau_x;
  double tau_a;
  double objective;
  DictionaryStep dictionary_step;
};

/// Return false to stop the run (reported as StopReason::Interrupted).
using IterationCallback = std::function<bool(const IterationState&)>;

struct BsumProblem {
  TrainingMatrix Y;
  int k = 1;
  double lambda = 0.0;
  ConstraintRegime regime = TotalNorm{1.0};
  SolverConfig config{};

  /// Starting dictionary (projected onto the regime's set before use). When
  /// absent, entries are i.i.d. standard normal drawn from config.seed.
  std::optional<Matrix> initial_dictionary{};
  /// Only consulted by solve_case1.
  DictionaryStep case1_step = DictionaryStep::ExactRidge;
  proxops::BisectionConfig bisection{};
  IterationCallback on_iteration{};
  int max_atoms = 4096;
};

struct BsumResult {
  Dictionary A;
  CodeMatrix X;
  SolverTrace trace;
  double stationarity_residual = 0.0;
};

BsumResult solve_case1(const BsumProblem& p);  ///< TotalNorm
BsumResult solve_case2(const BsumProblem& p);  ///< PerAtomNorm
BsumResult solve_case3(const BsumProblem& p);  ///< NonnegTotalNorm
BsumResult solve_case4(const BsumProblem& p);  ///< NonnegL1Atom
/// Dispatches on p.regime.
BsumResult solve(const BsumProblem& p);

/// sigma_max^2(M) inflated by a 1e-6 relative safety margin, floored at `floor`.
double step_constant(const Matrix& M, double floor);

/// Proximal-gradient X map: soft shrinkage for signed codes, shifted clamp
/// X <- max(X - grad / tau_x - lambda / tau_x, 0) for nonnegative codes.
Matrix x_step(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda, double tau_x,
              bool nonnegative);

/// Projected gradient A map.
Matrix a_step(const Matrix& Y, const Matrix& A, const Matrix& X, double tau_a,
              const ConstraintRegime& regime, const proxops::BisectionConfig& cfg = {});

/// max of the relative fixed-point defects of the X map and the projected
/// gradient A map at (A, X). Zero exactly at stationary points.
double stationarity_residual(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda,
                             const ConstraintRegime& regime, double tau_x, double tau_a);
/// Same, with step constants evaluated at (A, X).
double stationarity_residual(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda,
                             const ConstraintRegime& regime, double tau_floor = 1e-8);

/// Quadratic upper bound on d1(Y, A, .) at X_prev, evaluated at X_new, minus
/// d1(Y, A, X_new). Nonnegative whenever tau_x majorizes the curvature.
double x_majorization_gap(const Matrix& Y, const Matrix& A, const Matrix& X_prev,
                          const Matrix& X_new, double tau_x);
/// Same for the dictionary block at fixed X.
double a_majorization_gap(const Matrix& Y, const Matrix& A_prev, const Matrix& A_new,
                          const Matrix& X, double tau_a);

}  // namespace sparsedict::bsum
