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

#include "sparsedict/proxops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace sparsedict::proxops {

void BisectionConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("bisection tol must be > 0");
  if (max_iters < 1) throw InvalidArgument("bisection max_iters must be >= 1");
  if (!(bracket_growth > 1.0)) throw InvalidArgument("bracket_growth must be > 1");
}

Matrix soft_shrink(const Matrix& C, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("soft_shrink: gamma must be >= 0");
  if (gamma == 0.0) return C;
  return C.unaryExpr([gamma](double c) {
    if (c > gamma) return c - gamma;
    if (c < -gamma) return c + gamma;
    return 0.0;
  });
}

double sigma_max_sq(const Matrix& M, double tol, int max_iters) {
  if (M.size() == 0) return 0.0;
  const Matrix G = M.rows() <= M.cols() ? Matrix(M * M.transpose())
                                        : Matrix(M.transpose() * M);
  if (G.diagonal().maxCoeff() <= 0.0) return 0.0;

  Vector v = Vector::Ones(G.rows()) / std::sqrt(static_cast<double>(G.rows()));
  Vector w = G * v;
  double rho = v.dot(w);
  if (w.norm() == 0.0) {
    // All-ones start is in the null space; fall back to the heaviest coordinate.
    Eigen::Index idx = 0;
    G.diagonal().maxCoeff(&idx);
    v = Vector::Unit(G.rows(), idx);
    w = G * v;
    rho = v.dot(w);
  }
  for (int it = 0; it < max_iters; ++it) {
    if ((w - rho * v).norm() <= tol * rho) return std::max(rho, 0.0);
    v = w / w.norm();
    w = G * v;
    rho = v.dot(w);
  }
  if ((w - rho * v).norm() <= tol * rho) return std::max(rho, 0.0);
  // Clustered top eigenvalues: the cap was hit, so solve the small Gram matrix exactly.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  return std::max(eig.eigenvalues().maxCoeff(), 0.0);
}

namespace {

// Scales `a` onto the sphere of squared radius beta and nudges it inward until
// the rounded squared norm is at most beta.
template <class Derived>
void rescale_into_ball(Eigen::MatrixBase<Derived>& a, double beta) {
  const double sq = a.squaredNorm();
  if (sq <= beta) return;
  a *= std::sqrt(beta / sq);
  while (a.squaredNorm() > beta) a *= 1.0 - std::numeric_limits<double>::epsilon();
}

}  // namespace

Matrix project_frobenius_ball(const Matrix& A, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("project_frobenius_ball: beta must be > 0");
  Matrix out = A;
  rescale_into_ball(out, beta);
  return out;
}

Matrix project_per_atom_ball(const Matrix& A, std::span<const double> betas) {
  if (static_cast<Eigen::Index>(betas.size()) != A.cols()) {
    throw DimensionError("project_per_atom_ball: one bound per column required");
  }
  Matrix out = A;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (!(betas[j] > 0.0)) throw InvalidArgument("project_per_atom_ball: bounds must be > 0");
    auto col = out.col(j);
    rescale_into_ball(col, betas[j]);
  }
  return out;
}

Matrix project_nonneg(const Matrix& M) { return M.cwiseMax(0.0); }

Matrix project_nonneg_frobenius(const Matrix& A, double beta) {
  return project_frobenius_ball(project_nonneg(A), beta);
}

Vector project_nonneg_l1_column(const Vector& a, double theta, const BisectionConfig& cfg) {
  if (!(theta > 0.0)) throw InvalidArgument("project_nonneg_l1_column: theta must be > 0");
  cfg.validate();
  auto mass = [&a](double rho) { return (a.array() - rho).cwiseMax(0.0).sum(); };
  if (mass(0.0) <= theta) return a.cwiseMax(0.0);

  // Bisection on the shift until the bracket collapses; the support of
  // [a - rho]_+ is then fixed and rho follows in closed form on it.
  double lo = 0.0;
  double hi = a.maxCoeff();  // mass(hi) == 0 < theta
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (mass(mid) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double support_sum = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > lo) {
      support_sum += a[i];
      ++support;
    }
  }
  double rho = support > 0 ? (support_sum - theta) / support : hi;
  if (!(rho >= lo && rho <= hi)) rho = hi;
  Vector out = (a.array() - rho).cwiseMax(0.0).matrix();
  const double l1 = out.sum();
  if (l1 > theta) {
    out *= theta / l1;
  }
  if (std::abs(out.sum() - theta) > cfg.tol * std::max(1.0, theta)) {
    throw BisectionError("project_nonneg_l1_column: bisection did not converge", lo, hi);
  }
  return out;
}

Matrix project_nonneg_l1_atoms(const Matrix& A, double theta, const BisectionConfig& cfg) {
  Matrix out(A.rows(), A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    out.col(j) = project_nonneg_l1_column(A.col(j), theta, cfg);
  }
  return out;
}

Matrix project_dictionary(const Matrix& A, const ConstraintRegime& regime,
                          const BisectionConfig& cfg) {
  if (const auto* r = std::get_if<TotalNorm>(&regime)) return project_frobenius_ball(A, r->beta);
  if (const auto* r = std::get_if<PerAtomNorm>(&regime)) return project_per_atom_ball(A, r->betas);
  if (const auto* r = std::get_if<NonnegTotalNorm>(&regime)) {
    return project_nonneg_frobenius(A, r->beta);
  }
  return project_nonneg_l1_atoms(A, std::get<NonnegL1Atom>(regime).theta, cfg);
}

RidgeUpdate ridge_dictionary_update(const Matrix& Y, const Matrix& X, double beta,
                                    const BisectionConfig& cfg, double tau_floor) {
  if (!(beta > 0.0)) throw InvalidArgument("ridge_dictionary_update: beta must be > 0");
  if (Y.cols() != X.cols()) {
    throw DimensionError("ridge_dictionary_update: Y and X column counts differ");
  }
  cfg.validate();

  // (X X^T + theta I) A^T = X Y^T, solved in the eigenbasis of the Gram matrix
  // so that every trial multiplier costs O(n k).
  const Matrix gram = X * X.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector lambdas = eig.eigenvalues().cwiseMax(0.0);
  const Matrix& V = eig.eigenvectors();
  const Matrix C = (Y * X.transpose()) * V;
  const Vector col_sq = C.colwise().squaredNorm().transpose();

  auto norm_sq = [&](double theta) {
    return (col_sq.array() / (lambdas.array() + theta).square()).sum();
  };
  auto solution = [&](double theta) -> Matrix {
    return C * (lambdas.array() + theta).inverse().matrix().asDiagonal() * V.transpose();
  };

  if (X.size() == 0 || lambdas.maxCoeff() == 0.0) {
    return {Matrix::Zero(Y.rows(), X.rows()), 0.0};
  }

  const bool singular = lambdas.minCoeff() <= 1e-12 * lambdas.maxCoeff();
  const double base = singular ? tau_floor : 0.0;
  if (norm_sq(base) <= beta) return {solution(base), 0.0};

  double lo = 0.0;
  double hi = 1.0;
  int grow = 0;
  while (norm_sq(hi) > beta) {
    lo = hi;
    hi *= cfg.bracket_growth;
    if (++grow > cfg.max_iters || !std::isfinite(hi)) {
      throw BisectionError("ridge_dictionary_update: could not bracket the multiplier", lo, hi);
    }
  }
  // Refine to floating resolution; the hi end stays feasible throughout.
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (norm_sq(mid) > beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (beta - norm_sq(hi) > cfg.tol * std::max(1.0, beta)) {
    throw BisectionError("ridge_dictionary_update: multiplier search did not converge", lo, hi);
  }
  Matrix A = solution(hi);
  rescale_into_ball(A, beta);
  return {std::move(A), hi};
}

}  // namespace sparsedict::proxops
