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
#include <limits>

#include <Eigen/QR>

#include "sparsedict/denoise.hpp"
#include "sparsedict/rng.hpp"

namespace sparsedict::denoise {
namespace {

GrayImage ramp(int h, int w) {
  Matrix px(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) px(i, j) = 10.0 * i + j;
  }
  return GrayImage(px);
}

TEST(Patches, Counts) {
  PatchConfig two{2, 1};
  const auto P = extract_patches(ramp(3, 3), two);
  EXPECT_EQ(P.count(), 4);
  EXPECT_EQ(P.dim(), 4);
  Vector first(4);
  first << 0, 1, 10, 11;
  EXPECT_EQ(P.matrix().col(0), first);

  const auto whole = extract_patches(ramp(8, 8), PatchConfig{});
  EXPECT_EQ(whole.count(), 1);
  Matrix flat = ramp(8, 8).pixels().transpose();
  EXPECT_EQ(whole.matrix().col(0), Eigen::Map<Vector>(flat.data(), 64));

  const auto constant = extract_patches(GrayImage(Matrix::Constant(10, 12, 7.0)), PatchConfig{4, 2});
  EXPECT_EQ(constant.count(), 4 * 5);
  EXPECT_TRUE((constant.matrix().array() == 7.0).all());

  EXPECT_THROW(extract_patches(ramp(5, 9), PatchConfig{}), DimensionError);
}

TEST(Reassemble, EmptyCodesReturnNoisy) {
  const GrayImage noisy = ramp(4, 4);
  const Dictionary A(Matrix::Identity(4, 4), PerAtomNorm{{1, 1, 1, 1}});
  const auto out = reassemble(CodeMatrix(Matrix(4, 0)), A, noisy, PatchConfig{2, 1}, 1.0);
  EXPECT_EQ(out.pixels(), noisy.pixels());
}

TEST(Reassemble, NonOverlappingTilingWithZeroBlend) {
  const GrayImage img = ramp(6, 4);
  const PatchConfig cfg{2, 2};
  const auto P = extract_patches(img, cfg);
  const Dictionary A(Matrix::Identity(4, 4), PerAtomNorm{{1, 1, 1, 1}});
  const auto out = reassemble(CodeMatrix(P.matrix()), A, GrayImage(Matrix::Zero(6, 4)), cfg, 0.0);
  EXPECT_EQ(out.pixels(), img.pixels());
}

TEST(Reassemble, SinglePatchBlend) {
  const GrayImage noisy(Matrix::Constant(2, 2, 100.0));
  const Dictionary A(Matrix::Identity(4, 4), PerAtomNorm{{1, 1, 1, 1}});
  const auto out = reassemble(CodeMatrix(Matrix::Zero(4, 1)), A, noisy, PatchConfig{2, 1}, 1.0);
  EXPECT_TRUE((out.pixels().array() == 50.0).all());
}

TEST(Reassemble, MatchesExplicitLinearSolve) {
  const int h = 16;
  const int w = 16;
  const PatchConfig cfg{4, 1};
  auto rng = SeedTree(41).engine("recon");
  const GrayImage noisy(100.0 * uniform_matrix(h, w, rng));
  const Matrix atoms = gaussian_matrix(16, 20, rng);
  const Dictionary A(atoms, PerAtomNorm{std::vector<double>(20, 100.0)});
  const Eigen::Index count = cfg.rows_of_patches(h) * cfg.cols_of_patches(w);
  const Matrix X = gaussian_matrix(20, count, rng);
  const double beta = 0.7;

  // Pixel index r * w + c; R_ij selects a patch in row-major order.
  Matrix lhs = beta * Matrix::Identity(h * w, h * w);
  Vector rhs(h * w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) rhs(r * w + c) = beta * noisy.pixels()(r, c);
  }
  const Matrix recon = atoms * X;
  Eigen::Index col = 0;
  for (Eigen::Index bi = 0; bi < cfg.rows_of_patches(h); ++bi) {
    for (Eigen::Index bj = 0; bj < cfg.cols_of_patches(w); ++bj, ++col) {
      Matrix R = Matrix::Zero(16, h * w);
      for (int di = 0; di < 4; ++di) {
        for (int dj = 0; dj < 4; ++dj) R(di * 4 + dj, (bi + di) * w + bj + dj) = 1.0;
      }
      lhs += R.transpose() * R;
      rhs += R.transpose() * recon.col(col);
    }
  }
  const Vector S = lhs.ldlt().solve(rhs);
  const auto out = reassemble(CodeMatrix(X), A, noisy, cfg, beta);
  double worst = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) worst = std::max(worst, std::abs(out.pixels()(r, c) - S(r * w + c)));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Dct, SquareCaseIsOrthonormal) {
  const auto D = overcomplete_dct(64, 64);
  const Matrix G = D.atoms().transpose() * D.atoms();
  EXPECT_LE((G - Matrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((D.atoms().col(0).array() - 1.0 / 8.0).abs().maxCoeff(), 1e-15);
}

TEST(Dct, OvercompleteShapeAndNorms) {
  const auto D = overcomplete_dct(64, 256);
  EXPECT_EQ(D.dim(), 64);
  EXPECT_EQ(D.size(), 256);
  EXPECT_LE((D.atoms().colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_THROW(overcomplete_dct(60, 256), InvalidArgument);
  EXPECT_THROW(overcomplete_dct(256, 64), InvalidArgument);
}

TEST(Mu, Schedule) {
  DenoiseConfig cfg;
  Matrix unit = Matrix::Zero(4, 3);
  unit.row(0).setOnes();
  EXPECT_NEAR(mu_schedule(100.0, TrainingMatrix(unit), cfg), 0.35, 1e-15);
  EXPECT_NEAR(mu_schedule(20.0, TrainingMatrix(unit), cfg), 0.23, 1e-15);
  EXPECT_EQ(mu_schedule(20.0, TrainingMatrix(Matrix::Zero(4, 3)), cfg), 0.0);
}

TEST(Omp, Examples) {
  const Dictionary D = overcomplete_dct(16, 16);
  const Vector y = 2.5 * D.atoms().col(3);
  const Vector x = omp(y, D, 5, 1e-20);
  Vector want = Vector::Zero(16);
  want[3] = 2.5;
  EXPECT_LE((x - want).norm(), 1e-12);
  EXPECT_TRUE(omp(Vector::Zero(16), D, 5, 0.0).isZero(0.0));
  const Vector two = 2.0 * D.atoms().col(1) + 3.0 * D.atoms().col(5);
  const Vector got = omp(two, D, 5, 1e-20);
  EXPECT_NEAR(got[1], 2.0, 1e-12);
  EXPECT_NEAR(got[5], 3.0, 1e-12);
  EXPECT_EQ((got.array() != 0.0).count(), 2);
}

TEST(Omp, RespectsBudget) {
  auto rng = SeedTree(42).engine("omp");
  const Matrix A = gaussian_matrix(10, 30, rng);
  const Vector y = gaussian_matrix(10, 1, rng).col(0);
  EXPECT_LE((omp(y, A, 3, 0.0).array() != 0.0).count(), 3);
}

TEST(Ksvd, ExactAtomsFitAfterFirstCoding) {
  const Dictionary D = overcomplete_dct(16, 16);
  Matrix P(16, 4);
  P << D.atoms().col(0), D.atoms().col(4), D.atoms().col(7), D.atoms().col(4);
  const auto r = ksvd_learn(TrainingMatrix(P), D, 0, 4, 1e-20);
  EXPECT_LE(r.fit_history.front(), 1e-24);
}

TEST(Ksvd, PlantedSparseData) {
  auto rng = SeedTree(43).engine("ksvd");
  // Orthonormal atoms: OMP then recovers every 2-sparse support exactly.
  const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(16, 16, rng));
  const Matrix atoms = Matrix(qr.householderQ()).leftCols(8);
  Matrix X = Matrix::Zero(8, 64);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int i = 0; i < 64; ++i) {
    const int a = pick(rng);
    int b = pick(rng);
    while (b == a) b = pick(rng);
    X(a, i) = 1.0 + uniform_matrix(1, 1, rng)(0, 0);
    X(b, i) = -1.0 - uniform_matrix(1, 1, rng)(0, 0);
  }
  const Matrix P = atoms * X;
  ASSERT_LE((P - atoms * omp_batch(P, atoms, 2, 1e-20)).squaredNorm(), 1e-20);
  // Start from perturbed planted atoms.
  Matrix A0 = atoms + 0.1 * gaussian_matrix(16, 8, rng);
  for (int j = 0; j < 8; ++j) A0.col(j).normalize();
  const auto r = ksvd_learn(TrainingMatrix(P), Dictionary(A0, PerAtomNorm{std::vector<double>(8, 1.0)}),
                            200, 2, 1e-20);
  EXPECT_LE(r.fit_history.back(), 1e-6 * P.squaredNorm());
  EXPECT_LE((r.A.atoms().colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-10);
}

TEST(Ksvd, AtomUpdateHalfStepIsMonotone) {
  auto rng = SeedTree(44).engine("ksvd");
  const Matrix P = gaussian_matrix(16, 80, rng);
  const auto r = ksvd_learn(TrainingMatrix(P), overcomplete_dct(16, 36), 10, 3, 1e-3);
  ASSERT_EQ(r.fit_history.size(), 21U);
  for (std::size_t i = 1; i < r.fit_history.size(); i += 2) {
    EXPECT_LE(r.fit_history[i], r.fit_history[i - 1] * (1.0 + 1e-12)) << "update pass " << i / 2;
  }
}

TEST(Psnr, Examples) {
  const GrayImage a = ramp(4, 4);
  EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
  const GrayImage z(Matrix::Zero(3, 3));
  const GrayImage f(Matrix::Constant(3, 3, 255.0));
  EXPECT_NEAR(psnr(z, f), 0.0, 1e-12);
  EXPECT_THROW(psnr(a, z), DimensionError);
}

TEST(Psnr, GaussianNoiseMatchesTheory) {
  const GrayImage clean(Matrix::Constant(256, 256, 128.0));
  for (double sigma : {20.0, 60.0, 100.0}) {
    const double got = psnr(add_noise(clean, sigma, 7), clean);
    EXPECT_NEAR(got, 20.0 * std::log10(255.0 / sigma), 0.2) << "sigma " << sigma;
  }
}

TEST(Noise, SeededAndUnclipped) {
  const GrayImage clean(Matrix::Constant(32, 32, 250.0));
  const auto a = add_noise(clean, 30.0, 5);
  const auto b = add_noise(clean, 30.0, 5);
  EXPECT_EQ(a.pixels(), b.pixels());
  EXPECT_GT(a.pixels().maxCoeff(), 255.0);
  EXPECT_NE(add_noise(clean, 30.0, 6).pixels(), a.pixels());
}

TEST(Denoise, TinySigmaReturnsTheInput) {
  const GrayImage img = synthetic_piecewise_constant(16, 16, 3);
  DenoiseConfig cfg;
  cfg.sigma = 1e-3;
  cfg.dict_atoms = 64;
  cfg.learn_iters = 3;
  for (auto learner : {Learner::Alg2, Learner::KSVD}) {
    cfg.learner = learner;
    const auto res = denoise_image(img, cfg);
    EXPECT_GE(psnr(res.clean, img), 60.0) << to_string(learner);
  }
}

TEST(Denoise, ImprovesSyntheticImage) {
  const GrayImage truth = synthetic_piecewise_constant(32, 32, 11);
  const GrayImage noisy = add_noise(truth, 20.0, 12);
  DenoiseConfig cfg;
  cfg.dict_atoms = 64;
  cfg.learn_iters = 10;
  for (auto learner : {Learner::Alg2, Learner::KSVD, Learner::DCT}) {
    cfg.learner = learner;
    const auto res = denoise_image(noisy, cfg, {}, truth);
    ASSERT_TRUE(res.report.psnr_noisy && res.report.psnr_denoised);
    EXPECT_GT(*res.report.psnr_denoised, *res.report.psnr_noisy) << to_string(learner);
    EXPECT_LE(res.report.max_atom_norm, 1.0 + 1e-8) << to_string(learner);
    EXPECT_EQ(res.report.atoms, 64);
  }
}

TEST(Denoise, Alg2ObjectiveTraceIsMonotone) {
  const GrayImage noisy = add_noise(synthetic_piecewise_constant(24, 24, 13), 30.0, 14);
  DenoiseConfig cfg;
  cfg.sigma = 30.0;
  cfg.dict_atoms = 64;
  cfg.learn_iters = 8;
  const auto res = denoise_image(noisy, cfg);
  EXPECT_NEAR(res.report.lambda, 0.5 * res.report.mu, 1e-15);
  EXPECT_NEAR(res.report.blend_beta, 1.0, 1e-15);
  const auto& h = res.report.objective_trace;
  ASSERT_GE(h.size(), 2U);
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] + 1e-12 * std::abs(h[0]));
}

TEST(Denoise, ConfigValidation) {
  DenoiseConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_THROW(parse_learner("svd"), InvalidArgument);
  EXPECT_EQ(parse_learner("ksvd"), Learner::KSVD);
  EXPECT_EQ(to_string(Learner::DCT), "dct");
}

}  // namespace
}  // namespace sparsedict::denoise
