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

#include "sparsedict/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "sparsedict/bsum.hpp"
#include "sparsedict/rng.hpp"

namespace sparsedict::denoise {

namespace {

int exact_sqrt(int v) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
  return r * r == v ? r : -1;
}

double fit(const Matrix& Y, const Matrix& A, const Matrix& X) { return (Y - A * X).squaredNorm(); }

// Columns of Y picked uniformly without replacement (sorted), or all of them.
std::vector<Eigen::Index> training_subset(Eigen::Index total, int cap, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (cap <= 0 || cap >= total) return idx;
  auto rng = SeedTree(seed).engine("denoise/training-subset");
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(cap));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Matrix gather(const Matrix& Y, const std::vector<Eigen::Index>& cols) {
  Matrix out(Y.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = Y.col(cols[c]);
  return out;
}

}  // namespace

GrayImage::GrayImage(Matrix pixels) : pixels_(std::move(pixels)) {
  if (pixels_.rows() < 1 || pixels_.cols() < 1) throw DimensionError("image must be nonempty");
  if (!all_finite(pixels_)) throw InvalidArgument("image contains non-finite pixels");
}

void PatchConfig::validate(const GrayImage& img) const {
  if (patch_side < 1) throw InvalidArgument("patch_side must be >= 1");
  if (stride < 1) throw InvalidArgument("stride must be >= 1");
  if (img.height() < patch_side || img.width() < patch_side) {
    std::ostringstream os;
    os << "image " << img.height() << "x" << img.width() << " is smaller than the " << patch_side
       << "x" << patch_side << " patch";
    throw DimensionError(os.str());
  }
}

std::string to_string(Learner learner) {
  switch (learner) {
    case Learner::Alg2: return "alg2";
    case Learner::KSVD: return "ksvd";
    case Learner::DCT: return "dct";
  }
  return "unknown";
}

Learner parse_learner(const std::string& name) {
  if (name == "alg2") return Learner::Alg2;
  if (name == "ksvd") return Learner::KSVD;
  if (name == "dct") return Learner::DCT;
  throw InvalidArgument("unknown learner '" + name + "' (expected alg2, ksvd or dct)");
}

void DenoiseConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be > 0");
  if (dict_atoms < 1) throw InvalidArgument("dict_atoms must be >= 1");
  if (learn_iters < 0) throw InvalidArgument("learn_iters must be >= 0");
  if (omp_budget < 1) throw InvalidArgument("omp_budget must be >= 1");
  if (!(omp_gain > 0.0)) throw InvalidArgument("omp_gain must be > 0");
  if (max_training_patches < 0) throw InvalidArgument("max_training_patches must be >= 0");
  if (coding_iters < 1) throw InvalidArgument("coding_iters must be >= 1");
  if (!(blend_beta_numerator >= 0.0)) throw InvalidArgument("blend_beta_numerator must be >= 0");
}

TrainingMatrix extract_patches(const GrayImage& img, const PatchConfig& cfg) {
  cfg.validate(img);
  const int p = cfg.patch_side;
  const Eigen::Index nr = cfg.rows_of_patches(img.height());
  const Eigen::Index nc = cfg.cols_of_patches(img.width());
  Matrix out(p * p, nr * nc);
  const Matrix& px = img.pixels();
  for (Eigen::Index bi = 0; bi < nr; ++bi) {
    for (Eigen::Index bj = 0; bj < nc; ++bj) {
      const Eigen::Index col = bi * nc + bj;
      for (int di = 0; di < p; ++di) {
        for (int dj = 0; dj < p; ++dj) {
          out(di * p + dj, col) = px(bi * cfg.stride + di, bj * cfg.stride + dj);
        }
      }
    }
  }
  return TrainingMatrix(std::move(out));
}

GrayImage reassemble(const CodeMatrix& codes, const Dictionary& A, const GrayImage& noisy,
                     const PatchConfig& cfg, double blend_beta) {
  cfg.validate(noisy);
  if (!(blend_beta >= 0.0)) throw InvalidArgument("blend_beta must be >= 0");
  const Matrix& X = codes.matrix();
  if (X.cols() == 0) return noisy;
  const int p = cfg.patch_side;
  const Eigen::Index nr = cfg.rows_of_patches(noisy.height());
  const Eigen::Index nc = cfg.cols_of_patches(noisy.width());
  if (A.dim() != p * p || X.rows() != A.size() || X.cols() != nr * nc) {
    std::ostringstream os;
    os << "reassemble: dictionary " << A.dim() << "x" << A.size() << " and codes " << X.rows()
       << "x" << X.cols() << " do not fit " << nr * nc << " patches of " << p * p << " pixels";
    throw DimensionError(os.str());
  }
  const Matrix recon = A.atoms() * X;
  Matrix sum = blend_beta * noisy.pixels();
  Matrix weight = Matrix::Constant(noisy.height(), noisy.width(), blend_beta);
  for (Eigen::Index bi = 0; bi < nr; ++bi) {
    for (Eigen::Index bj = 0; bj < nc; ++bj) {
      const Eigen::Index col = bi * nc + bj;
      for (int di = 0; di < p; ++di) {
        for (int dj = 0; dj < p; ++dj) {
          sum(bi * cfg.stride + di, bj * cfg.stride + dj) += recon(di * p + dj, col);
          weight(bi * cfg.stride + di, bj * cfg.stride + dj) += 1.0;
        }
      }
    }
  }
  // Pixels nothing covers keep their noisy value even when blend_beta = 0.
  Matrix out = (weight.array() > 0.0).select(sum.array() / weight.array(), noisy.pixels().array());
  return GrayImage(std::move(out));
}

Dictionary overcomplete_dct(int n_pixels, int n_atoms) {
  const int p = exact_sqrt(n_pixels);
  const int m = exact_sqrt(n_atoms);
  if (p < 1 || m < 1) throw InvalidArgument("overcomplete_dct needs square pixel and atom counts");
  if (p > m) throw InvalidArgument("overcomplete_dct needs at least as many atoms as pixels");
  Matrix D(p, m);
  for (int j = 0; j < m; ++j) {
    for (int t = 0; t < p; ++t) D(t, j) = std::cos(std::numbers::pi * j * (t + 0.5) / m);
    if (j > 0) D.col(j).array() -= D.col(j).mean();
    D.col(j).normalize();
  }
  Matrix atoms(n_pixels, n_atoms);
  for (int j1 = 0; j1 < m; ++j1) {
    for (int j2 = 0; j2 < m; ++j2) {
      Vector a(n_pixels);
      for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) a(r * p + c) = D(r, j1) * D(c, j2);
      }
      atoms.col(j1 * m + j2) = a / a.norm();
    }
  }
  return Dictionary(std::move(atoms), PerAtomNorm{std::vector<double>(n_atoms, 1.0)});
}

double mu_schedule(double sigma, const TrainingMatrix& patches, const DenoiseConfig& cfg) {
  const double c = patches.matrix().colwise().norm().mean();
  return c * (cfg.mu_slope * sigma + cfg.mu_intercept);
}

Vector omp(const Vector& y, const Matrix& A, int max_atoms, double residual_tol) {
  if (y.size() != A.rows()) throw DimensionError("omp: signal and dictionary rows differ");
  Vector x = Vector::Zero(A.cols());
  std::vector<Eigen::Index> support;
  Vector r = y;
  const double floor = 1e-12 * std::max(1.0, y.norm());
  while (static_cast<int>(support.size()) < max_atoms && r.squaredNorm() > residual_tol) {
    Vector corr = (A.transpose() * r).cwiseAbs();
    for (auto s : support) corr[s] = -1.0;
    Eigen::Index pick = 0;
    if (corr.maxCoeff(&pick) <= floor) break;
    support.push_back(pick);
    Matrix As(A.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) As.col(static_cast<Eigen::Index>(i)) = A.col(support[i]);
    const Vector coef = As.colPivHouseholderQr().solve(y);
    r = y - As * coef;
    x.setZero();
    for (std::size_t i = 0; i < support.size(); ++i) x[support[i]] = coef[static_cast<Eigen::Index>(i)];
  }
  return x;
}

Vector omp(const Vector& y, const Dictionary& A, int max_atoms, double residual_tol) {
  return omp(y, A.atoms(), max_atoms, residual_tol);
}

Matrix omp_batch(const Matrix& Y, const Matrix& A, int max_atoms, double residual_tol) {
  Matrix X(A.cols(), Y.cols());
  for (Eigen::Index i = 0; i < Y.cols(); ++i) X.col(i) = omp(Y.col(i), A, max_atoms, residual_tol);
  return X;
}

KsvdResult ksvd_learn(const TrainingMatrix& patches, const Dictionary& A0, int iters,
                      int omp_budget, double residual_tol) {
  const Matrix& Y = patches.matrix();
  if (A0.dim() != Y.rows()) throw DimensionError("ksvd_learn: dictionary and patch rows differ");
  if (iters < 0) throw InvalidArgument("iters must be >= 0");
  Matrix A = A0.atoms();
  Matrix X = omp_batch(Y, A, omp_budget, residual_tol);
  std::vector<double> history{fit(Y, A, X)};

  for (int it = 0; it < iters; ++it) {
    Matrix R = Y - A * X;
    Vector col_err = R.colwise().squaredNorm();
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      std::vector<Eigen::Index> used;
      for (Eigen::Index i = 0; i < X.cols(); ++i) {
        if (X(j, i) != 0.0) used.push_back(i);
      }
      if (used.empty()) {
        Eigen::Index worst = 0;
        if (col_err.maxCoeff(&worst) <= 0.0) continue;
        const double nrm = Y.col(worst).norm();
        if (nrm == 0.0) continue;
        A.col(j) = Y.col(worst) / nrm;
        col_err[worst] = 0.0;
        continue;
      }
      // Restricted residual with atom j's contribution added back, then a
      // rank-1 refit warm-started at the current atom. Each half-step is an
      // exact block minimization, so the fit cannot grow.
      Matrix E(Y.rows(), static_cast<Eigen::Index>(used.size()));
      for (std::size_t c = 0; c < used.size(); ++c) {
        const auto i = used[c];
        E.col(static_cast<Eigen::Index>(c)) = R.col(i) + A.col(j) * X(j, i);
      }
      Vector u = A.col(j);
      Vector v = E.transpose() * u;
      for (int inner = 0; inner < 20; ++inner) {
        const Vector Ev = E * v;
        const double n = Ev.norm();
        if (n == 0.0) break;
        const Vector u_next = Ev / n;
        v = E.transpose() * u_next;
        const double moved = (u_next - u).norm();
        u = u_next;
        if (moved <= 1e-12) break;
      }
      A.col(j) = u;
      for (std::size_t c = 0; c < used.size(); ++c) {
        const auto i = used[c];
        X(j, i) = v[static_cast<Eigen::Index>(c)];
        R.col(i) = E.col(static_cast<Eigen::Index>(c)) - u * v[static_cast<Eigen::Index>(c)];
      }
    }
    history.push_back(fit(Y, A, X));
    X = omp_batch(Y, A, omp_budget, residual_tol);
    history.push_back(fit(Y, A, X));
  }
  return {Dictionary(std::move(A), A0.regime()), CodeMatrix(std::move(X)), std::move(history)};
}

DenoiseResult denoise_image(const GrayImage& noisy, const DenoiseConfig& cfg,
                            const PatchConfig& pcfg, const std::optional<GrayImage>& reference) {
  cfg.validate();
  pcfg.validate(noisy);
  if (reference &&
      (reference->height() != noisy.height() || reference->width() != noisy.width())) {
    throw DimensionError("reference image size differs from the noisy image");
  }
  const auto start = std::chrono::steady_clock::now();

  const auto raw = extract_patches(noisy, pcfg);
  const Vector means = cfg.remove_patch_mean ? Vector(raw.matrix().colwise().mean().transpose())
                                             : Vector::Zero(raw.count());
  const TrainingMatrix patches(raw.matrix().rowwise() - means.transpose());
  const Matrix& Y = patches.matrix();
  const int n = pcfg.patch_side * pcfg.patch_side;
  const Dictionary dct = overcomplete_dct(n, cfg.dict_atoms);
  const auto subset = training_subset(Y.cols(), cfg.max_training_patches, cfg.seed);
  const bool all = static_cast<Eigen::Index>(subset.size()) == Y.cols();
  const TrainingMatrix train(all ? Y : gather(Y, subset));

  DenoiseReport rep;
  rep.learner = to_string(cfg.learner);
  rep.sigma = cfg.sigma;
  rep.mu = mu_schedule(cfg.sigma, patches, cfg);
  rep.blend_beta = cfg.blend_beta_numerator / cfg.sigma;
  rep.patches = Y.cols();

  Matrix A;
  Matrix X;
  if (cfg.learner == Learner::Alg2) {
    // The penalized patch objective is mu ||x||_1 + ||A x - y||^2; halving it
    // gives the learner's 1/2 ||.||^2 + lambda ||x||_1 form.
    rep.lambda = 0.5 * rep.mu;
    bsum::BsumProblem prob{train, cfg.dict_atoms, rep.lambda, dct.regime()};
    prob.config.max_iters = std::max(1, cfg.learn_iters);
    prob.config.seed = cfg.seed;
    prob.initial_dictionary = dct.atoms();
    auto res = bsum::solve_case2(prob);
    A = res.A.atoms();
    rep.iters = res.trace.iterations;
    rep.objective_trace = res.trace.objective_history;
    if (all) {
      X = res.X.matrix();
    } else {
      const double tau = bsum::step_constant(A, prob.config.tau_floor);
      X = Matrix::Zero(A.cols(), Y.cols());
      for (int it = 0; it < cfg.coding_iters; ++it) X = bsum::x_step(Y, A, X, rep.lambda, tau, false);
    }
  } else {
    const double tol = n * std::pow(cfg.omp_gain * cfg.sigma, 2);
    const int rounds = cfg.learner == Learner::KSVD ? cfg.learn_iters : 0;
    auto res = ksvd_learn(train, dct, rounds, cfg.omp_budget, tol);
    A = res.A.atoms();
    rep.iters = rounds;
    rep.objective_trace = res.fit_history;
    X = all ? res.X.matrix() : omp_batch(Y, A, cfg.omp_budget, tol);
  }
  rep.atoms = A.cols();
  rep.max_atom_norm = A.colwise().norm().maxCoeff();

  if (cfg.remove_patch_mean) {
    // Put the means back through an extra constant atom.
    const double root_n = std::sqrt(static_cast<double>(n));
    A.conservativeResize(Eigen::NoChange, A.cols() + 1);
    A.col(A.cols() - 1).setConstant(1.0 / root_n);
    X.conservativeResize(X.rows() + 1, Eigen::NoChange);
    X.row(X.rows() - 1) = root_n * means.transpose();
  }
  Dictionary dict(A, PerAtomNorm{std::vector<double>(static_cast<std::size_t>(A.cols()), 1.0)});
  GrayImage clean = reassemble(CodeMatrix(std::move(X)), dict, noisy, pcfg, rep.blend_beta);
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (reference) {
    rep.psnr_noisy = psnr(noisy, *reference);
    rep.psnr_denoised = psnr(clean, *reference);
  }
  return {std::move(clean), std::move(rep)};
}

GrayImage add_noise(const GrayImage& clean, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
  auto rng = SeedTree(seed).engine("denoise/noise");
  return GrayImage(clean.pixels() + sigma * gaussian_matrix(clean.height(), clean.width(), rng));
}

double psnr(const GrayImage& a, const GrayImage& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionError("psnr: image sizes differ");
  }
  const double mse = (a.pixels() - b.pixels()).squaredNorm() / static_cast<double>(a.pixels().size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

GrayImage synthetic_piecewise_constant(int height, int width, std::uint64_t seed) {
  if (height < 1 || width < 1) throw InvalidArgument("image size must be positive");
  auto rng = SeedTree(seed).engine("denoise/synthetic-image");
  std::uniform_real_distribution<double> level(30.0, 225.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix px = Matrix::Constant(height, width, std::round(level(rng)));
  for (int shape = 0; shape < 6; ++shape) {
    const double value = std::round(level(rng));
    const double cy = unit(rng) * height;
    const double cx = unit(rng) * width;
    const double ry = (0.1 + 0.25 * unit(rng)) * height;
    const double rx = (0.1 + 0.25 * unit(rng)) * width;
    const bool disc = shape % 2 == 1;
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const double dy = (i + 0.5 - cy) / ry;
        const double dx = (j + 0.5 - cx) / rx;
        const bool inside = disc ? dy * dy + dx * dx <= 1.0 : std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0;
        if (inside) px(i, j) = value;
      }
    }
  }
  return GrayImage(std::move(px));
}

}  // namespace sparsedict::denoise
