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

#include "sparsedict/objective.hpp"

#include <sstream>

namespace sparsedict {

void check_conforming(const Matrix& Y, const Matrix& A, const Matrix& X) {
  if (A.rows() != Y.rows() || A.cols() != X.rows() || X.cols() != Y.cols()) {
    std::ostringstream os;
    os << "incompatible shapes: Y " << Y.rows() << "x" << Y.cols() << ", A " << A.rows() << "x"
       << A.cols() << ", X " << X.rows() << "x" << X.cols();
    throw DimensionError(os.str());
  }
}

double smooth_fit(const Matrix& Y, const Matrix& A, const Matrix& X) {
  check_conforming(Y, A, X);
  return 0.5 * (Y - A * X).squaredNorm();
}

double objective(const Matrix& Y, const Matrix& A, const Matrix& X, double lambda) {
  return smooth_fit(Y, A, X) + lambda * X.lpNorm<1>();
}

double objective(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X,
                 double lambda) {
  return objective(Y.matrix(), A.atoms(), X.matrix(), lambda);
}

Matrix grad_A(const Matrix& Y, const Matrix& A, const Matrix& X) {
  check_conforming(Y, A, X);
  return (A * X - Y) * X.transpose();
}

Matrix grad_A(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X) {
  return grad_A(Y.matrix(), A.atoms(), X.matrix());
}

Matrix grad_X(const Matrix& Y, const Matrix& A, const Matrix& X) {
  check_conforming(Y, A, X);
  return A.transpose() * (A * X - Y);
}

Matrix grad_X(const TrainingMatrix& Y, const Dictionary& A, const CodeMatrix& X) {
  return grad_X(Y.matrix(), A.atoms(), X.matrix());
}

bool check_feasible(const Matrix& A, const Matrix& X, const ConstraintRegime& regime,
                    double tol) {
  if (codes_nonnegative(regime)) {
    if (A.size() > 0 && A.minCoeff() < -tol) return false;
    if (X.size() > 0 && X.minCoeff() < -tol) return false;
  }
  if (const auto* r = std::get_if<TotalNorm>(&regime)) return A.squaredNorm() <= r->beta + tol;
  if (const auto* r = std::get_if<NonnegTotalNorm>(&regime)) {
    return A.squaredNorm() <= r->beta + tol;
  }
  if (const auto* r = std::get_if<PerAtomNorm>(&regime)) {
    if (static_cast<Eigen::Index>(r->betas.size()) != A.cols()) return false;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (A.col(j).squaredNorm() > r->betas[j] + tol) return false;
    }
    return true;
  }
  const auto& r = std::get<NonnegL1Atom>(regime);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (A.col(j).lpNorm<1>() > r.theta + tol) return false;
  }
  return true;
}

bool check_feasible(const Dictionary& A, const CodeMatrix& X, const ConstraintRegime& regime,
                    double tol) {
  return check_feasible(A.atoms(), X.matrix(), regime, tol);
}

}  // namespace sparsedict
