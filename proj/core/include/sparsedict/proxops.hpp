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

#include <span>

#include "sparsedict/types.hpp"

// Closed-form proximal maps and projections used by the dictionary learners,
// the power-iteration Lipschitz estimate, and the multiplier search for the
// norm-constrained ridge dictionary update.

namespace sparsedict::proxops {

struct BisectionConfig {
  double tol = 1e-10;  ///< on the constraint residual
  int max_iters = 200;
  double bracket_growth = 2.0;

  void validate() const;
};

/// Entrywise soft shrinkage. |C_ij| <= gamma maps to exactly zero.
Matrix soft_shrink(const Matrix& C, double gamma);

/// Squared largest singular value of M by power iteration on the smaller Gram
/// matrix, started from the normalized all-ones vector. Stops once the
/// eigen-residual ||G v - rho v|| falls below tol * rho; if max_iters runs out first
/// the Gram matrix is solved exactly instead. Zero matrix -> 0.
double sigma_max_sq(const Matrix& M, double tol = 1e-9, int max_iters = 100);

Matrix project_frobenius_ball(const Matrix& A, double beta);
Matrix project_per_atom_ball(const Matrix& A, std::span<const double> betas);
Matrix project_nonneg(const Matrix& M);
/// Nonnegative clamp followed by the Frobenius-ball rescale.
Matrix project_nonneg_frobenius(const Matrix& A, double beta);

/// [a - rho 1]_+ with rho >= 0 chosen by bisection so the result has L1 norm
/// theta (rho = 0 when the positive part already fits).
Vector project_nonneg_l1_column(const Vector& a, double theta, const BisectionConfig& cfg = {});
Matrix project_nonneg_l1_atoms(const Matrix& A, double theta, const BisectionConfig& cfg = {});

/// Euclidean projection onto the dictionary set of `regime`.
Matrix project_dictionary(const Matrix& A, const ConstraintRegime& regime,
                          const BisectionConfig& cfg = {});

struct RidgeUpdate {
  Matrix A;
  double theta = 0.0;  ///< multiplier of ||A||_F^2 <= beta
};

/// argmin_{||A||_F^2 <= beta} 1/2 ||Y - A X||_F^2, i.e. A = Y X^T (X X^T + theta I)^{-1}
/// with theta the constraint multiplier. A singular X X^T at theta = 0 is
/// regularized with `tau_floor`.
RidgeUpdate ridge_dictionary_update(const Matrix& Y, const Matrix& X, double beta,
                                    const BisectionConfig& cfg = {}, double tau_floor = 1e-8);

}  // namespace sparsedict::proxops
