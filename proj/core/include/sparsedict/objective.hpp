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

#include "sparsedict/types.hpp"

namespace sparsedict {

// Fit function 1/2 ||Y - A X||_F^2 + lambda ||X||_1 and the gradients of its
// smooth part. All functions throw DimensionError on non-conforming shapes.

double objective(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda);
double objective(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X,
                 double lambda);

/// Smooth part only: 1/2 ||Y - A X||_F^2.
double smooth_fit(const Matrix& Y, const Matrix& A, const Matrix& X);

/// (A X - Y) X^T, n x k.
Matrix grad_A(const Matrix& Y, const Matrix& A, const Matrix& X);
Matrix grad_A(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X);

/// A^T (A X - Y), k x N.
Matrix grad_X(const Matrix& Y, const Matrix& A, const Matrix& X);
Matrix grad_X(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X);

/// Every active constraint of `regime` holds within additive `tol`. A bound
/// list whose length does not match the atom count is reported as infeasible.
bool check_feasible(const Matrix& A, const Matrix& X, const ConstraintRegime& regime,
                    double tol);
bool check_feasible(const Dictionary& A, const CodeMatrix& X, const ConstraintRegime& regime,
                    double tol);

void check_conforming(const Matrix& Y, const Matrix& A, const Matrix& X);

}  // namespace sparsedict
