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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "oracles.hpp"
#include "sparsedict/objective.hpp"
#include "sparsedict/proxops.hpp"
#include "sparsedict/rng.hpp"

namespace sparsedict::proxops {
namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(SoftShrink, Examples) {
  EXPECT_NEAR(soft_shrink(mat({{1.2}}), 0.5)(0, 0), 0.7, 1e-15);
  EXPECT_EQ(soft_shrink(mat({{0.3}}), 0.5)(0, 0), 0.0);
  EXPECT_NEAR(soft_shrink(mat({{-0.9}}), 0.5)(0, 0), -0.4, 1e-15);
  EXPECT_EQ(soft_shrink(mat({{0.5, -0.5}}), 0.5), Matrix::Zero(1, 2));
  const Matrix C = mat({{1.0, -2.0, 3.5}});
  EXPECT_EQ(soft_shrink(C, 0.0), C);
  EXPECT_THROW(soft_shrink(C, -1.0), InvalidArgument);
}

TEST(SoftShrink, MatchesScalarGridMinimizer) {
  auto rng = SeedTree(11).engine("shrink");
  std::uniform_real_distribution<double> c_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> g_dist(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const double c = c_dist(rng);
    const double g = g_dist(rng);
    const double ref = testing::scalar_argmin(
        [&](double z) { return 0.5 * (z - c) * (z - c) + g * std::abs(z); }, -6.0, 6.0);
    EXPECT_NEAR(soft_shrink(mat({{c}}), g)(0, 0), ref, 1e-6);
  }
}

TEST(SigmaMaxSq, Examples) {
  EXPECT_NEAR(sigma_max_sq(Matrix::Identity(3, 3)), 1.0, 1e-12);
  EXPECT_NEAR(sigma_max_sq(mat({{3, 0}, {0, 1}})), 9.0, 1e-8);
  EXPECT_EQ(sigma_max_sq(Matrix::Zero(4, 3)), 0.0);
}

TEST(SigmaMaxSq, MatchesSvdOnRandomMatrices) {
  const SeedTree tree(12);
  for (int t = 0; t < 50; ++t) {
    auto rng = tree.engine("svd", static_cast<std::uint64_t>(t));
    const Matrix M = gaussian_matrix(5, 7, rng);
    const double ref = testing::svd_sigma_max_sq(M);
    EXPECT_NEAR(sigma_max_sq(M), ref, 1e-6 * ref);
  }
}

TEST(SigmaMaxSq, ClusteredTopValuesStillAccurate) {
  // Top two singular values 1 and 1 - 1e-4; the all-ones start mixes them, so
  // 100 power steps cannot resolve the gap to 1e-9.
  auto rng = SeedTree(13).engine("rotation");
  const Eigen::HouseholderQR<Matrix> qu(gaussian_matrix(4, 4, rng));
  const Eigen::HouseholderQR<Matrix> qv(gaussian_matrix(4, 4, rng));
  const Vector s = (Vector(4) << 1.0, 1.0 - 1e-4, 0.5, 0.1).finished();
  const Matrix M = Matrix(qu.householderQ()) * s.asDiagonal() * Matrix(qv.householderQ()).transpose();
  EXPECT_NEAR(sigma_max_sq(M), 1.0, 1e-9);
}

TEST(FrobeniusBall, Examples) {
  const Matrix A = mat({{0.1, 0.2}});
  EXPECT_EQ(project_frobenius_ball(A, 1.0), A);
  const Matrix P = project_frobenius_ball(mat({{3}, {4}}), 1.0);
  EXPECT_NEAR(P(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(P(1, 0), 0.8, 1e-15);
  EXPECT_EQ(project_frobenius_ball(Matrix::Zero(2, 2), 1.0), Matrix::Zero(2, 2));
}

TEST(PerAtomBall, Examples) {
  const Matrix A = mat({{3, 0.1}, {4, 0.2}});
  const std::vector<double> betas{1.0, 1.0};
  const Matrix P = project_per_atom_ball(A, betas);
  EXPECT_NEAR(P(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(P(1, 0), 0.8, 1e-15);
  EXPECT_EQ(P.col(1), A.col(1));
  const std::vector<double> loose{100.0, 100.0};
  EXPECT_EQ(project_per_atom_ball(A, loose), A);
  const std::vector<double> short_list{1.0};
  EXPECT_THROW(project_per_atom_ball(A, short_list), DimensionError);
}

TEST(Nonneg, Examples) {
  EXPECT_EQ(project_nonneg(mat({{-1, 2}})), mat({{0, 2}}));
  EXPECT_EQ(project_nonneg(mat({{1, 2}})), mat({{1, 2}}));
  EXPECT_EQ(project_nonneg(mat({{-1, -2}})), Matrix::Zero(1, 2));
}

TEST(NonnegFrobenius, Examples) {
  const Matrix P = project_nonneg_frobenius(mat({{-1, 3}, {0, 4}}), 1.0);
  EXPECT_TRUE(P.isApprox(mat({{0, 0.6}, {0, 0.8}}), 1e-15));
  const Matrix F = mat({{0.1, 0.2}});
  EXPECT_EQ(project_nonneg_frobenius(F, 1.0), F);
  EXPECT_EQ(project_nonneg_frobenius(mat({{-1, -3}}), 1.0), Matrix::Zero(1, 2));
}

TEST(NonnegFrobenius, MatchesDykstra) {
  const SeedTree tree(13);
  for (int t = 0; t < 50; ++t) {
    auto rng = tree.engine("nnf", static_cast<std::uint64_t>(t));
    const Matrix A = gaussian_matrix(4, 3, rng);
    const double beta = 0.5;
    EXPECT_LE((project_nonneg_frobenius(A, beta) - testing::dykstra_nonneg_frobenius(A, beta)).norm(),
              1e-8);
  }
}

TEST(NonnegL1Column, Examples) {
  Vector a(2);
  a << 0.2, 0.3;
  EXPECT_EQ(project_nonneg_l1_column(a, 1.0), a);
  Vector b(3);
  b << 2, 1, -1;
  Vector want_b(3);
  want_b << 1, 0, 0;
  EXPECT_LE((project_nonneg_l1_column(b, 1.0) - want_b).norm(), 1e-12);
  Vector c(2);
  c << 0.6, 0.6;
  Vector want_c(2);
  want_c << 0.5, 0.5;
  EXPECT_LE((project_nonneg_l1_column(c, 1.0) - want_c).norm(), 1e-12);
}

TEST(NonnegL1Column, MatchesSortOracle) {
  const SeedTree tree(14);
  for (int t = 0; t < 1000; ++t) {
    auto rng = tree.engine("l1", static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_real_distribution<double> theta_dist(0.05, 4.0);
    const Vector a = gaussian_matrix(len(rng), 1, rng).col(0) * 2.0;
    const double theta = theta_dist(rng);
    const Vector got = project_nonneg_l1_column(a, theta);
    EXPECT_LE((got - testing::nonneg_l1_ball_projection(a, theta)).cwiseAbs().maxCoeff(), 1e-8)
        << "case " << t;
  }
}

TEST(Ridge, Examples) {
  auto r = ridge_dictionary_update(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 10.0);
  EXPECT_TRUE(r.A.isApprox(Matrix::Identity(2, 2), 1e-12));
  EXPECT_EQ(r.theta, 0.0);

  r = ridge_dictionary_update(2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0);
  EXPECT_NEAR(r.theta, 2.0 * std::sqrt(2.0) - 1.0, 1e-8);
  EXPECT_TRUE(r.A.isApprox(std::sqrt(0.5) * Matrix::Identity(2, 2), 1e-8));

  auto rng = SeedTree(15).engine("ridge");
  r = ridge_dictionary_update(gaussian_matrix(3, 4, rng), Matrix::Zero(2, 4), 1.0);
  EXPECT_TRUE(r.A.isZero(0.0));
  EXPECT_EQ(r.theta, 0.0);
}

TEST(Ridge, SatisfiesKkt) {
  const SeedTree tree(16);
  for (int t = 0; t < 200; ++t) {
    auto rng = tree.engine("kkt", static_cast<std::uint64_t>(t));
    const Matrix Y = gaussian_matrix(4, 9, rng);
    const Matrix X = gaussian_matrix(3, 9, rng);
    const double beta = 0.05 + 0.1 * (t % 20);
    const auto r = ridge_dictionary_update(Y, X, beta);
    const double norm2 = r.A.squaredNorm();
    EXPECT_GE(r.theta, 0.0);
    EXPECT_LE(norm2, beta + 1e-8);
    EXPECT_LE(std::abs(r.theta * (norm2 - beta)), 1e-6);
    // Stationarity of the Lagrangian: (A X - Y) X^T + theta A = 0.
    const Matrix station = (r.A * X - Y) * X.transpose() + r.theta * r.A;
    EXPECT_LE(station.norm(), 1e-8 * std::max(1.0, (Y * X.transpose()).norm()));
  }
}

struct NamedProjection {
  const char* name;
  std::function<Matrix(const Matrix&)> apply;
  ConstraintRegime regime;
};

std::vector<NamedProjection> projections() {
  const std::vector<double> betas{0.5, 1.0, 2.0};
  return {
      {"frobenius", [](const Matrix& A) { return project_frobenius_ball(A, 1.5); }, TotalNorm{1.5}},
      {"per-atom", [betas](const Matrix& A) { return project_per_atom_ball(A, betas); },
       PerAtomNorm{betas}},
      {"nonneg-frobenius", [](const Matrix& A) { return project_nonneg_frobenius(A, 1.5); },
       NonnegTotalNorm{1.5}},
      {"nonneg-l1", [](const Matrix& A) { return project_nonneg_l1_atoms(A, 0.7); },
       NonnegL1Atom{0.7}},
  };
}

TEST(Projections, IdempotentAndFeasible) {
  const SeedTree tree(17);
  for (const auto& proj : projections()) {
    for (int t = 0; t < 50; ++t) {
      auto rng = tree.engine(proj.name, static_cast<std::uint64_t>(t));
      const Matrix A = 2.0 * gaussian_matrix(4, 3, rng);
      const Matrix P = proj.apply(A);
      EXPECT_LE((proj.apply(P) - P).cwiseAbs().maxCoeff(), 1e-12) << proj.name;
      EXPECT_TRUE(check_feasible(P, Matrix::Zero(3, 1), proj.regime, 1e-9)) << proj.name;
    }
  }
  auto rng = tree.engine("nonneg");
  const Matrix P = project_nonneg(gaussian_matrix(3, 3, rng));
  EXPECT_EQ(project_nonneg(P), P);
}

TEST(Projections, Nonexpansive) {
  const SeedTree tree(18);
  for (const auto& proj : projections()) {
    for (int t = 0; t < 100; ++t) {
      auto rng = tree.engine(proj.name, static_cast<std::uint64_t>(t));
      const Matrix U = 2.0 * gaussian_matrix(4, 3, rng);
      const Matrix V = 2.0 * gaussian_matrix(4, 3, rng);
      EXPECT_LE((proj.apply(U) - proj.apply(V)).norm(), (U - V).norm() + 1e-12) << proj.name;
    }
  }
}

TEST(Dispatch, ProjectDictionaryUsesRegime) {
  const Matrix A = mat({{3, -1}, {4, 2}});
  EXPECT_EQ(project_dictionary(A, TotalNorm{1.0}), project_frobenius_ball(A, 1.0));
  EXPECT_EQ(project_dictionary(A, NonnegTotalNorm{1.0}), project_nonneg_frobenius(A, 1.0));
}

TEST(Bisection, ConfigValidation) {
  BisectionConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_iters = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.bracket_growth = 1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

}  // namespace
}  // namespace sparsedict::proxops
