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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsedict/types.hpp"

// Patch-based image denoising: learn a dictionary on the noisy image's
// patches (BSUM with per-atom norm bounds, or the K-SVD/OMP baseline), code
// every patch, and average the reconstructions back with the noisy image:
//
//   S = (beta I + sum R^T R)^{-1} (beta Y + sum R^T A x).

namespace sparsedict::denoise {

/// Grayscale image, nominal range [0, 255]. Values may leave that range.
class GrayImage {
 public:
  explicit GrayImage(Matrix pixels);

  const Matrix& pixels() const noexcept { return pixels_; }
  Eigen::Index height() const noexcept { return pixels_.rows(); }
  Eigen::Index width() const noexcept { return pixels_.cols(); }

 private:
  Matrix pixels_;
};

struct PatchConfig {
  int patch_side = 8;
  int stride = 1;

  /// Throws unless the image holds at least one patch.
  void validate(const GrayImage& img) const;
  Eigen::Index rows_of_patches(Eigen::Index height) const { return (height - patch_side) / stride + 1; }
  Eigen::Index cols_of_patches(Eigen::Index width) const { return (width - patch_side) / stride + 1; }
};

enum class Learner { Alg2, KSVD, DCT };

std::string to_string(Learner learner);
/// "alg2", "ksvd" or "dct".
Learner parse_learner(const std::string& name);

struct DenoiseConfig {
  double sigma = 20.0;
  int dict_atoms = 256;
  double mu_slope = 0.0015;
  double mu_intercept = 0.2;
  double blend_beta_numerator = 30.0;
  Learner learner = Learner::Alg2;
  /// BSUM iterations (Alg2) or coding/update rounds (KSVD). DCT ignores it.
  int learn_iters = 20;
  /// OMP: at most omp_budget atoms, stop once ||r||^2 <= n (omp_gain sigma)^2.
  int omp_budget = 32;
  double omp_gain = 1.15;
  /// Learn on a random subset of this many patches (0 = all of them). Patches
  /// left out are coded afterwards with the learned dictionary.
  int max_training_patches = 0;
  /// Proximal-gradient passes used to code patches outside the training set.
  int coding_iters = 100;
  /// Subtract each patch's mean before learning and add it back afterwards.
  bool remove_patch_mean = true;
  std::uint64_t seed = 0;

  void validate() const;
};

TrainingMatrix extract_patches(const GrayImage& img, const PatchConfig& cfg);

/// Per pixel (blend_beta * noisy + sum of covering reconstructions) /
/// (blend_beta + cover count). An empty code set returns the noisy image.
GrayImage reassemble(const CodeMatrix& codes, const Dictionary& A, const GrayImage& noisy,
                     const PatchConfig& cfg, double blend_beta);

/// Separable overcomplete DCT, n_pixels = p^2 and n_atoms = m^2 with p <= m.
/// Unit-norm atoms; the first one is constant.
Dictionary overcomplete_dct(int n_pixels, int n_atoms);

/// c (mu_slope sigma + mu_intercept), c the mean patch norm.
double mu_schedule(double sigma, const TrainingMatrix& patches, const DenoiseConfig& cfg);

/// Orthogonal matching pursuit with a least-squares refit on the support each
/// step. Stops at max_atoms or once ||r||^2 <= residual_tol.
Vector omp(const Vector& y, const Matrix& A, int max_atoms, double residual_tol);
Vector omp(const Vector& y, const Dictionary& A, int max_atoms, double residual_tol);
/// Column-wise omp.
Matrix omp_batch(const Matrix& Y, const Matrix& A, int max_atoms, double residual_tol);

struct KsvdResult {
  Dictionary A;
  CodeMatrix X;
  /// sum ||A x_i - y_i||^2 after each coding pass and each atom-update pass,
  /// interleaved, ending with the final coding pass.
  std::vector<double> fit_history;
};

/// A0 must have unit-norm atoms.
KsvdResult ksvd_learn(const TrainingMatrix& patches, const Dictionary& A0, int iters,
                      int omp_budget, double residual_tol);

struct DenoiseReport {
  std::string learner;
  double sigma = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double blend_beta = 0.0;
  int iters = 0;
  double wall_time_ms = 0.0;
  std::vector<double> objective_trace;
  Eigen::Index patches = 0;
  Eigen::Index atoms = 0;
  double max_atom_norm = 0.0;
  std::optional<double> psnr_noisy;
  std::optional<double> psnr_denoised;
};

struct DenoiseResult {
  GrayImage clean;
  DenoiseReport report;
};

/// With a reference (clean) image the report carries both PSNR values.
DenoiseResult denoise_image(const GrayImage& noisy, const DenoiseConfig& cfg,
                            const PatchConfig& pcfg = {},
                            const std::optional<GrayImage>& reference = std::nullopt);

/// clean + sigma * N(0, 1) per pixel, no clipping.
GrayImage add_noise(const GrayImage& clean, double sigma, std::uint64_t seed);

/// 10 log10(255^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

/// Random axis-aligned rectangles and discs on a flat background.
GrayImage synthetic_piecewise_constant(int height, int width, std::uint64_t seed);

}  // namespace sparsedict::denoise
